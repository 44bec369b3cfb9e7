//! Mixing work and energy transfer per photon against the gas temperature.

use std::f64::consts::FRAC_PI_2;

use gibbsmix::analytic::{classical_mixing_work, energy_transfer_general, mixing_work};
use gibbsmix::{initial_moments, SystemParams};

use super::{finish, par_map, GasFamily, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::grid::{log_grid, loglog_slope};
use crate::output::Table;
use crate::svg::{Plot, Series, Style};

pub const T_MIN: f64 = 0.1;
pub const T_MAX: f64 = 100.0;
/// Range of `k_B T/(ħω)` used for the high-temperature slope.
pub const SLOPE_RANGE: (f64, f64) = (10.0, 100.0);

/// One temperature point; energies per photon in the units of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Row {
    pub temperature: f64,
    pub kt_over_hbar_omega: f64,
    pub w_mix: f64,
    pub dh_pi2: f64,
    pub dh_0: f64,
    pub w_classical: f64,
}

pub fn row(p: &SystemParams<f64>, r: f64) -> CliResult<Fig4Row> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(CliError::Usage(format!(
            "temperatures must be positive, got k_BT/ħω = {r}"
        )));
    }
    let gas = GasFamily::Thermal(r);
    let per_photon = |theta: f64| -> CliResult<(f64, f64)> {
        let (l, rr, m) = gas.states(theta, p);
        let mo = initial_moments(&l, &rr, &m, p)?;
        let n = mo.mean_n_right;
        Ok((mixing_work(&mo, p) / n, energy_transfer_general(&mo, p)? / n))
    };
    let (w_mix, dh_pi2) = per_photon(FRAC_PI_2)?;
    let (_, dh_0) = per_photon(0.0)?;
    let temperature = r * p.hbar * p.omega / p.k_b;
    Ok(Fig4Row {
        temperature,
        kt_over_hbar_omega: r,
        w_mix,
        dh_pi2,
        dh_0,
        w_classical: classical_mixing_work(1.0, temperature, p.k_b),
    })
}

/// Log-log slopes of the three quantum columns over [`SLOPE_RANGE`].
pub fn high_temperature_slopes(rows: &[Fig4Row]) -> [f64; 3] {
    let sel: Vec<&Fig4Row> = rows
        .iter()
        .filter(|r| {
            r.kt_over_hbar_omega >= SLOPE_RANGE.0 * (1.0 - 1e-12)
                && r.kt_over_hbar_omega <= SLOPE_RANGE.1 * (1.0 + 1e-12)
        })
        .collect();
    let t: Vec<f64> = sel.iter().map(|r| r.temperature).collect();
    let col = |f: fn(&Fig4Row) -> f64| loglog_slope(&t, &sel.iter().map(|r| f(r)).collect::<Vec<_>>());
    [col(|r| r.w_mix), col(|r| r.dh_pi2), col(|r| r.dh_0)]
}

/// Temperature grid with the slope range sampled on its own.
pub fn temperature_grid(points: usize) -> Vec<f64> {
    let mut g = log_grid(T_MIN, T_MAX, points);
    g.extend(log_grid(SLOPE_RANGE.0, SLOPE_RANGE.1, 11));
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    g
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let p = cfg.system();
    let grid = temperature_grid(cfg.t_points);
    let rows = par_map(&grid, |&r| row(&p, r))?;

    let mut table = Table::new(&[
        "T",
        "kT_over_hbar_omega",
        "W_mix_per_photon",
        "dH_theta_pi2",
        "dH_theta_0",
        "W_classical_per_particle",
    ]);
    for r in &rows {
        table.push(vec![
            r.temperature.into(),
            r.kt_over_hbar_omega.into(),
            r.w_mix.into(),
            r.dh_pi2.into(),
            r.dh_0.into(),
            r.w_classical.into(),
        ]);
    }
    let mut files = vec![cfg.out.join("fig4.csv")];
    table.save(&files[0])?;

    if cfg.plots {
        let mut plot = Plot::new("Work and energy transfer per photon", "k_BT/ħω", "energy per photon").log_log();
        let pts = |f: fn(&Fig4Row) -> f64| rows.iter().map(|r| (r.kt_over_hbar_omega, f(r))).collect::<Vec<_>>();
        plot.add(Series::new("W_mix, θ = π/2", pts(|r| r.w_mix), Style::Line, 0));
        plot.add(Series::new("ΔH̄_M, θ = π/2", pts(|r| r.dh_pi2), Style::Dashed, 1));
        plot.add(Series::new("ΔH̄_M, θ = 0", pts(|r| r.dh_0), Style::Dotted, 2));
        plot.add(Series::new("2k_BT ln2", pts(|r| r.w_classical), Style::Line, 3));
        let path = cfg.out.join("fig4.svg");
        plot.save(&path)?;
        files.push(path);
    }

    let [s_w, s_pi2, s_0] = high_temperature_slopes(&rows);
    let summary = format!(
        "fig4: log-log slopes over k_BT/ħω ∈ [{}, {}]: W_mix {s_w:.4}, ΔH(π/2) {s_pi2:.4}, ΔH(0) {s_0:.4}",
        SLOPE_RANGE.0, SLOPE_RANGE.1
    );
    Ok(finish(cfg, files, summary))
}

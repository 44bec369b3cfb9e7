//! Energy transfer to the membrane: photon-number normalised curves for the
//! ideal PBS (panel a) and the PBS↔BS crossover (panel b).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

use gibbsmix::analytic::energy_transfer_general;
use gibbsmix::{initial_moments, SystemParams};

use super::{exact_run, finish, par_map, GasFamily, Outcome, PANEL_FAMILIES};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::grid::theta_grid;
use crate::output::{Cell, Table};
use crate::svg::{Plot, Series, Style};

pub const EXACT_COUPLING_SCALE: f64 = 0.2;
pub const EXACT_D_M: usize = 24;
pub const EXACT_THETA_POINTS: usize = 9;

/// `(r_λ, r_g)` pairs from the balanced beamsplitter to a strong PBS.
pub const CROSSOVER_CONFIGS: [(f64, f64); 5] = [(1.0, 1.0), (0.75, 2.0), (0.5, 4.0), (0.375, 6.0), (0.0, 10.0)];

/// `ΔH̄_M/⟨N²⟩` in units of `ħ²g_H²/(mω_M²)`.
pub fn panel_a_point(p: &SystemParams<f64>, family: GasFamily, theta: f64) -> CliResult<f64> {
    let (l, r, m) = family.states(theta, p);
    let mo = initial_moments(&l, &r, &m, p)?;
    Ok(energy_transfer_general(&mo, p)? / (mo.sec_n_right * p.energy_unit()))
}

/// `ΔH̄_M/⟨N²⟩` for Fock(1) gases in units of `ħ²g_V²/(mω_M²)`.
pub fn panel_b_point(p: &SystemParams<f64>, theta: f64) -> CliResult<f64> {
    let (l, r, m) = GasFamily::Fock(1).states(theta, p);
    let mo = initial_moments(&l, &r, &m, p)?;
    let unit = p.hbar * p.hbar * p.g_v * p.g_v / (p.mass * p.omega_m * p.omega_m);
    Ok(energy_transfer_general(&mo, p)? / (mo.sec_n_right * unit))
}

pub fn crossover_label(r_lambda: f64, r_g: f64) -> String {
    format!("r_lambda{r_lambda}_r_g{r_g}")
}

fn exact_energy(p: &SystemParams<f64>, family: GasFamily, theta: f64) -> CliResult<f64> {
    let states = family.states(theta, p);
    Ok(exact_run(p, &states, EXACT_D_M, 10)?.0.energy_transfer)
}

pub fn run_a(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let p = cfg.system();
    let thetas = theta_grid(cfg.theta_points);
    let jobs: Vec<(GasFamily, f64)> = PANEL_FAMILIES
        .iter()
        .flat_map(|&f| thetas.iter().map(move |&t| (f, t)))
        .collect();
    let values = par_map(&jobs, |&(f, t)| panel_a_point(&p, f, t))?;

    let mut table = Table::new(&["theta", "config_label", "dH_over_N2", "inset"]);
    for (&(f, t), &v) in jobs.iter().zip(&values) {
        table.push(vec![
            t.into(),
            f.label().into(),
            v.into(),
            (t <= FRAC_PI_8 + 1e-12).into(),
        ]);
    }
    let mut files = vec![cfg.out.join("fig5a.csv")];
    table.save(&files[0])?;

    let mut exact = Vec::new();
    if cfg.exact {
        let q = p.with_coupling_scale(EXACT_COUPLING_SCALE);
        let coarse = theta_grid(EXACT_THETA_POINTS.min(cfg.theta_points));
        exact = par_map(&coarse, |&t| {
            let e = exact_energy(&q, GasFamily::Fock(1), t)?;
            let (l, r, m) = GasFamily::Fock(1).states(t, &q);
            let mo = initial_moments(&l, &r, &m, &q)?;
            Ok((t, e / (mo.sec_n_right * q.energy_unit())))
        })?;
        let mut t = Table::new(&["theta", "config_label", "dH_over_N2", "coupling_scale"]);
        for &(th, v) in &exact {
            t.push(vec![
                th.into(),
                "exact_fock_n1".into(),
                v.into(),
                EXACT_COUPLING_SCALE.into(),
            ]);
        }
        files.push(cfg.out.join("fig5a_exact.csv"));
        t.save(files.last().unwrap())?;
    }

    if cfg.plots {
        for (name, limit) in [("fig5a.svg", FRAC_PI_2), ("fig5a_inset.svg", FRAC_PI_8)] {
            let mut plot = Plot::new(
                "Energy transfer per squared photon number",
                "θ (rad)",
                "ΔH̄_M/⟨N²⟩  [ħ²g_H²/(mω_M²)]",
            );
            for (k, f) in PANEL_FAMILIES.iter().enumerate() {
                let pts = jobs
                    .iter()
                    .zip(&values)
                    .filter(|((g, t), _)| g == f && *t <= limit + 1e-12)
                    .map(|(&(_, t), &v)| (t, v))
                    .collect();
                plot.add(Series::new(f.label(), pts, Style::Line, k));
            }
            let pts: Vec<(f64, f64)> = exact.iter().copied().filter(|(t, _)| *t <= limit + 1e-12).collect();
            if !pts.is_empty() {
                plot.add(Series::new(
                    format!("exact n=1 (g×{EXACT_COUPLING_SCALE})"),
                    pts,
                    Style::Markers,
                    4,
                ));
            }
            let path = cfg.out.join(name);
            plot.save(&path)?;
            files.push(path);
        }
    }

    let min0 = jobs
        .iter()
        .zip(&values)
        .filter(|((_, t), _)| *t == 0.0)
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    Ok(finish(cfg, files, format!("fig5a: smallest θ = 0 value {min0:.6e}")))
}

pub fn run_b(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let base = cfg.system();
    let thetas = theta_grid(cfg.theta_points);
    let jobs: Vec<((f64, f64), f64)> = CROSSOVER_CONFIGS
        .iter()
        .flat_map(|&c| thetas.iter().map(move |&t| (c, t)))
        .collect();
    let params = |(rl, rg): (f64, f64)| {
        let mut p = base;
        p.lambda_h = rl * p.lambda_v;
        p.g_h = rg * p.g_v;
        p
    };
    // resonance errors are reported per point rather than aborting the panel
    let values: Vec<Result<f64, String>> = par_map(&jobs, |&(c, t)| {
        Ok(panel_b_point(&params(c), t).map_err(|e| e.to_string()))
    })?;

    let mut table = Table::new(&["theta", "config_label", "r_lambda", "r_g", "dH_over_N2", "status"]);
    for (&((rl, rg), t), v) in jobs.iter().zip(&values) {
        let (value, status): (Cell, Cell) = match v {
            Ok(x) => ((*x).into(), "ok".into()),
            Err(e) => (Cell::Empty, e.clone().into()),
        };
        table.push(vec![
            t.into(),
            crossover_label(rl, rg).into(),
            rl.into(),
            rg.into(),
            value,
            status,
        ]);
    }
    let mut files = vec![cfg.out.join("fig5b.csv")];
    table.save(&files[0])?;

    let mut exact = Vec::new();
    if cfg.exact {
        let q = params(CROSSOVER_CONFIGS[0]).with_coupling_scale(EXACT_COUPLING_SCALE);
        let coarse = theta_grid(EXACT_THETA_POINTS.min(cfg.theta_points));
        let unit = q.hbar * q.hbar * q.g_v * q.g_v / (q.mass * q.omega_m * q.omega_m);
        exact = par_map(&coarse, |&t| Ok((t, exact_energy(&q, GasFamily::Fock(1), t)? / unit)))?;
        let mut t = Table::new(&["theta", "config_label", "dH_over_N2", "coupling_scale"]);
        for &(th, v) in &exact {
            t.push(vec![
                th.into(),
                format!("exact_{}", crossover_label(1.0, 1.0)).into(),
                v.into(),
                EXACT_COUPLING_SCALE.into(),
            ]);
        }
        files.push(cfg.out.join("fig5b_exact.csv"));
        t.save(files.last().unwrap())?;
    }

    if cfg.plots {
        let mut plot = Plot::new("PBS to BS crossover, Fock(1)", "θ (rad)", "ΔH̄_M/⟨N²⟩  [ħ²g_V²/(mω_M²)]");
        for (k, &c) in CROSSOVER_CONFIGS.iter().enumerate() {
            let pts = jobs
                .iter()
                .zip(&values)
                .filter(|((d, _), v)| *d == c && v.is_ok())
                .map(|(&(_, t), v)| (t, *v.as_ref().unwrap()))
                .collect();
            plot.add(Series::new(
                format!("r_λ = {}, r_g = {}", c.0, c.1),
                pts,
                Style::Line,
                k,
            ));
        }
        if !exact.is_empty() {
            plot.add(Series::new(
                format!("exact BS (g×{EXACT_COUPLING_SCALE})"),
                exact.clone(),
                Style::Markers,
                5,
            ));
        }
        let path = cfg.out.join("fig5b.svg");
        plot.save(&path)?;
        files.push(path);
    }

    let failed = values.iter().filter(|v| v.is_err()).count();
    let summary = format!(
        "fig5b: {} configurations, {} points, {failed} resonance failures",
        CROSSOVER_CONFIGS.len(),
        jobs.len()
    );
    Ok(finish(cfg, files, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_endpoint_ordering() {
        let bs = SystemParams::crossover(1.0, 1.0);
        assert!(panel_b_point(&bs, 0.0).unwrap() > panel_b_point(&bs, FRAC_PI_2).unwrap());
        let pbs = SystemParams::crossover(0.0, 10.0);
        assert!(panel_b_point(&pbs, FRAC_PI_2).unwrap() > panel_b_point(&pbs, 0.0).unwrap());
    }

    #[test]
    fn indistinguishable_transfer_is_positive() {
        let p = SystemParams::fig3();
        for f in PANEL_FAMILIES {
            assert!(panel_a_point(&p, f, 0.0).unwrap() > 0.0);
        }
    }
}

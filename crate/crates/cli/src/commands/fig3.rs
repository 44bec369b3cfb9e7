//! Displacement per photon and its spread against θ.

use gibbsmix::analytic::{averaging_window, displacement_variance, time_averaged_displacement, VarianceKind};
use gibbsmix::{initial_moments, SystemParams};

use super::{exact_run, finish, par_map, GasFamily, Outcome, PANEL_FAMILIES};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::grid::theta_grid;
use crate::output::Table;
use crate::svg::{Plot, Series, Style};

/// Coupling scale and membrane dimension of the exact overlay.
pub const EXACT_COUPLING_SCALE: f64 = 0.5;
pub const EXACT_D_M: usize = 24;
pub const EXACT_THETA_POINTS: usize = 9;

/// `(mean, std)` of the cycle-averaged displacement per photon in units of
/// `ħ g_H/(m ω_M²)`.
pub fn point(p: &SystemParams<f64>, family: GasFamily, theta: f64) -> CliResult<(f64, f64)> {
    let (l, r, m) = family.states(theta, p);
    let mo = initial_moments(&l, &r, &m, p)?;
    let n = mo.mean_n_right;
    let tau = averaging_window(p.lambda_v, p.omega_m).tau;
    let var = displacement_variance(&mo, p, VarianceKind::Instantaneous, tau)?;
    let unit = p.length_unit() * n;
    Ok((time_averaged_displacement(&mo, p) / unit, var.sqrt() / unit))
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let p = cfg.system();
    let thetas = theta_grid(cfg.theta_points);
    let jobs: Vec<(GasFamily, f64)> = PANEL_FAMILIES
        .iter()
        .flat_map(|&f| thetas.iter().map(move |&t| (f, t)))
        .collect();
    let values = par_map(&jobs, |&(f, t)| point(&p, f, t))?;

    let mut table = Table::new(&["theta", "config_label", "mean_disp_per_photon", "std_disp_per_photon"]);
    for (&(f, t), &(mean, std)) in jobs.iter().zip(&values) {
        table.push(vec![t.into(), f.label().into(), mean.into(), std.into()]);
    }
    let mut files = vec![cfg.out.join("fig3.csv")];
    table.save(&files[0])?;

    let mut exact_rows = Vec::new();
    if cfg.exact {
        let q = p.with_coupling_scale(EXACT_COUPLING_SCALE);
        let coarse = theta_grid(EXACT_THETA_POINTS.min(cfg.theta_points));
        let jobs: Vec<(u32, f64)> = [1u32, 2]
            .iter()
            .flat_map(|&n| coarse.iter().map(move |&t| (n, t)))
            .collect();
        exact_rows = par_map(&jobs, |&(n, t)| {
            let states = GasFamily::Fock(n).states(t, &q);
            let (e, _) = exact_run(&q, &states, EXACT_D_M, cfg.periods)?;
            let unit = q.length_unit() * n as f64;
            Ok((n, t, e.displacement / unit, e.variance.max(0.0).sqrt() / unit))
        })?;
        let mut t = Table::new(&[
            "theta",
            "config_label",
            "mean_disp_per_photon",
            "std_disp_per_photon",
            "coupling_scale",
        ]);
        for &(n, th, mean, std) in &exact_rows {
            t.push(vec![
                th.into(),
                format!("exact_fock_n{n}").into(),
                mean.into(),
                std.into(),
                EXACT_COUPLING_SCALE.into(),
            ]);
        }
        files.push(cfg.out.join("fig3_exact.csv"));
        t.save(files.last().unwrap())?;
    }

    if cfg.plots {
        for (panel, fams, tag) in [
            ("a", &PANEL_FAMILIES[..2], "Fock gases"),
            ("b", &PANEL_FAMILIES[2..], "thermal gases"),
        ] {
            let mut plot = Plot::new(
                &format!("Displacement per photon, {tag}"),
                "θ (rad)",
                "⟨X̄_M⟩/⟨N⟩  [ħg_H/(mω_M²)]",
            );
            for (k, f) in fams.iter().enumerate() {
                let rows: Vec<(f64, f64, f64)> = jobs
                    .iter()
                    .zip(&values)
                    .filter(|((g, _), _)| g == f)
                    .map(|(&(_, t), &(m, s))| (t, m, s))
                    .collect();
                let color = 2 * k + if panel == "a" { 0 } else { 2 } % 8;
                plot.add(Series::new(
                    format!("{} mean", f.label()),
                    rows.iter().map(|r| (r.0, r.1)).collect(),
                    Style::Line,
                    color,
                ));
                plot.add(Series::new(
                    format!("{} ± std", f.label()),
                    rows.iter().map(|r| (r.0, r.1 + r.2)).collect(),
                    Style::Dashed,
                    color,
                ));
                plot.add(Series::new(
                    "",
                    rows.iter().map(|r| (r.0, r.1 - r.2)).collect(),
                    Style::Dashed,
                    color,
                ));
            }
            if panel == "a" {
                for (k, n) in [1u32, 2].iter().enumerate() {
                    let pts: Vec<(f64, f64)> = exact_rows.iter().filter(|r| r.0 == *n).map(|r| (r.1, r.2)).collect();
                    if !pts.is_empty() {
                        plot.add(Series::new(
                            format!("exact n={n} (g×{EXACT_COUPLING_SCALE})"),
                            pts,
                            Style::Markers,
                            4 + k,
                        ));
                    }
                }
            }
            let path = cfg.out.join(format!("fig3{panel}.svg"));
            plot.save(&path)?;
            files.push(path);
        }
    }

    let dev = jobs
        .iter()
        .zip(&values)
        .map(|(&(_, t), &(m, _))| (m - t.sin().powi(2)).abs())
        .fold(0.0f64, f64::max);
    let summary = format!(
        "fig3: max |mean per photon − sin²θ| = {dev:.3e} over {} points",
        jobs.len()
    );
    Ok(finish(cfg, files, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_spread_ordering() {
        let p = SystemParams::fig3();
        for f in PANEL_FAMILIES {
            let (m0, _) = point(&p, f, 0.0).unwrap();
            let (m1, _) = point(&p, f, std::f64::consts::FRAC_PI_2).unwrap();
            assert!(m0.abs() < 1e-14);
            assert!((m1 - 1.0).abs() < 1e-12);
        }
        for t in theta_grid(20) {
            let (_, s1) = point(&p, GasFamily::Fock(1), t).unwrap();
            let (_, s100) = point(&p, GasFamily::Fock(100), t).unwrap();
            assert!(s1 > s100);
        }
    }
}

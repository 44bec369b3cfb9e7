//! Driven cavities: membrane trajectories and the steady-state displacement.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use gibbsmix::driven::{
    default_step, integrate_with, kappa_calibration, steady_state_formula, steady_state_numeric, DrivenOptions, Scheme,
};
use gibbsmix::{DrivenParams64, DrivenTrajectory64};

use super::{driven_params, finish, par_map, Outcome};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::grid::{proportional_r2, theta_grid};
use crate::output::{save_with, Cell, Table};
use crate::svg::{Plot, Series, Style};

/// Length of the panel (a) trajectories in mechanical periods.
pub const TRAJECTORY_PERIODS: f64 = 40.0;
/// Samples written per mechanical period.
pub const SAMPLES_PER_PERIOD: usize = 64;
pub const TRAJECTORY_ANGLES: [(&str, f64); 3] = [("0", 0.0), ("pi4", FRAC_PI_4), ("pi2", FRAC_PI_2)];

pub fn trajectory(p: &DrivenParams64, periods: f64) -> CliResult<DrivenTrajectory64> {
    let period = 2.0 * PI / p.base.omega_m;
    let h = default_step(p, Scheme::Split);
    let per_period = (period / h).ceil() as usize;
    let stride = (per_period / SAMPLES_PER_PERIOD).max(1);
    let dt = period / (stride * SAMPLES_PER_PERIOD) as f64;
    let opts = DrivenOptions {
        order0_photons: true,
        scheme: Scheme::Split,
        stride,
    };
    Ok(integrate_with(p, periods * period, dt, opts)?)
}

/// Mean position over the last `periods` mechanical periods.
pub fn late_average(traj: &DrivenTrajectory64, samples_per_period: usize, periods: usize) -> f64 {
    let x = traj.positions();
    let n = (samples_per_period * periods).min(x.len());
    x[x.len() - n..].iter().sum::<f64>() / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyRow {
    pub theta: f64,
    pub formula: f64,
    pub numeric: f64,
}

impl SteadyRow {
    /// `None` where the formula vanishes.
    pub fn ratio(&self) -> Option<f64> {
        (self.formula.abs() > 0.0 && self.theta > 1e-12).then(|| self.numeric / self.formula)
    }
}

pub fn steady_rows(p: &DrivenParams64, thetas: &[f64]) -> CliResult<Vec<SteadyRow>> {
    par_map(thetas, |&t| {
        let q = p.with_theta(t);
        Ok(SteadyRow {
            theta: t,
            formula: steady_state_formula(&q),
            numeric: steady_state_numeric(&q)?.displacement,
        })
    })
}

/// `(c, R²)` of `numeric ≈ c sin²θ`.
pub fn sin2_fit(rows: &[SteadyRow]) -> (f64, f64) {
    let s2: Vec<f64> = rows.iter().map(|r| r.theta.sin().powi(2)).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.numeric).collect();
    proportional_r2(&s2, &y)
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let p = driven_params(cfg);
    p.validate()?;
    let mut files = Vec::new();

    let trajs = par_map(&TRAJECTORY_ANGLES, |&(_, t)| {
        trajectory(&p.with_theta(t), TRAJECTORY_PERIODS)
    })?;
    for ((name, _), traj) in TRAJECTORY_ANGLES.iter().zip(&trajs) {
        let path = cfg.out.join(format!("fig6a_theta_{name}.csv"));
        save_with(&path, |w| traj.write_csv(w))?;
        files.push(path);
    }

    let rows = steady_rows(&p, &theta_grid(cfg.theta_points))?;
    let mut table = Table::new(&["theta", "formula", "numeric", "ratio"]);
    for r in &rows {
        let ratio: Cell = r.ratio().map_or(Cell::Empty, Cell::from);
        table.push(vec![r.theta.into(), r.formula.into(), r.numeric.into(), ratio]);
    }
    let path = cfg.out.join("fig6b.csv");
    table.save(&path)?;
    files.push(path);

    let conventions = [
        gibbsmix::driven::KappaConvention::FullLinewidth,
        gibbsmix::driven::KappaConvention::AmplitudeRate,
    ];
    let cal = par_map(&conventions, |&c| Ok(kappa_calibration(&p, c)?))?;
    let mut table = Table::new(&["convention", "numeric", "formula", "ratio", "selected"]);
    for c in &cal {
        table.push(vec![
            c.convention.name().into(),
            c.numeric.into(),
            c.formula.into(),
            c.ratio.into(),
            (c.convention == p.convention).into(),
        ]);
    }
    let path = cfg.out.join("fig6_calibration.csv");
    table.save(&path)?;
    files.push(path);

    if cfg.plots {
        let period = 2.0 * PI / p.base.omega_m;
        let mut plot = Plot::new("Membrane displacement under driving", "t (mechanical periods)", "x (m)");
        for (k, ((name, _), traj)) in TRAJECTORY_ANGLES.iter().zip(&trajs).enumerate() {
            let pts = traj
                .times
                .iter()
                .zip(traj.positions())
                .map(|(t, x)| (t / period, x))
                .collect();
            plot.add(Series::new(format!("θ = {name}"), pts, Style::Line, k));
        }
        for (k, r) in rows
            .iter()
            .enumerate()
            .filter(|(_, r)| TRAJECTORY_ANGLES.iter().any(|(_, t)| (t - r.theta).abs() < 1e-12))
        {
            let pts = vec![(0.0, r.formula), (TRAJECTORY_PERIODS, r.formula)];
            plot.add(Series::new(
                format!("steady state θ = {:.3}", r.theta),
                pts,
                Style::Dotted,
                3 + k % 3,
            ));
        }
        let path = cfg.out.join("fig6a.svg");
        plot.save(&path)?;
        files.push(path);

        let mut plot = Plot::new("Steady-state displacement", "θ (rad)", "x_ss (m)");
        plot.add(Series::new(
            "formula",
            rows.iter().map(|r| (r.theta, r.formula)).collect(),
            Style::Line,
            0,
        ));
        plot.add(Series::new(
            "numeric",
            rows.iter().map(|r| (r.theta, r.numeric)).collect(),
            Style::Markers,
            1,
        ));
        let path = cfg.out.join("fig6b.svg");
        plot.save(&path)?;
        files.push(path);
    }

    let (_, r2) = sin2_fit(&rows);
    let ratios: Vec<f64> = rows.iter().filter_map(SteadyRow::ratio).collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    let selected = cal
        .iter()
        .find(|c| c.convention == p.convention)
        .map_or(f64::NAN, |c| c.ratio);
    let summary = format!(
        "fig6: sin²θ fit R² = {r2:.9}; numeric/formula ratio in [{lo:.6}, {hi:.6}]; calibration ratio ({}) = {selected:.11}",
        p.convention.name()
    );
    log::info!("{summary}");
    Ok(finish(cfg, files, summary))
}

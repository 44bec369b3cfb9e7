//! One module per command. Every command computes its grid points in
//! parallel, collects them in grid order and writes CSV, plots and a short
//! summary into the output directory.

pub mod fig3;
pub mod fig4;
pub mod fig5;
pub mod fig6;
pub mod sweep;
pub mod validate;

use std::path::PathBuf;

use gibbsmix::{GasSpec, MembraneSpec, SystemParams};

use crate::config::{Command, ExperimentConfig};
use crate::error::CliResult;

/// Files written and a human-readable summary.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
    /// False when a validation check failed.
    pub success: bool,
}

pub fn dispatch(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    match cfg.command {
        Command::Fig3 => fig3::run(cfg),
        Command::Fig4 => fig4::run(cfg),
        Command::Fig5a => fig5::run_a(cfg),
        Command::Fig5b => fig5::run_b(cfg),
        Command::Fig6 => fig6::run(cfg),
        Command::Sweep => sweep::run(cfg),
        Command::Validate => validate::run(cfg),
    }
}

/// Photon gas family of the figure panels: both gases share the number
/// distribution, the left gas is V polarised and the right gas is at θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GasFamily {
    Fock(u32),
    /// Thermal gases at `k_B T/(ħω)`; the membrane shares the temperature.
    Thermal(f64),
}

impl GasFamily {
    pub fn label(&self) -> String {
        match self {
            GasFamily::Fock(n) => format!("fock_n{n}"),
            GasFamily::Thermal(r) => format!("thermal_kT{r}"),
        }
    }

    /// Left gas, right gas and membrane. Fock gases come with a membrane
    /// at `k_B T = ħω_M`.
    pub fn states(&self, theta: f64, p: &SystemParams<f64>) -> (GasSpec<f64>, GasSpec<f64>, MembraneSpec<f64>) {
        match *self {
            GasFamily::Fock(n) => (
                GasSpec::fock(n, 0.0),
                GasSpec::fock(n, theta),
                MembraneSpec::thermal(p.hbar * p.omega_m / p.k_b),
            ),
            GasFamily::Thermal(r) => {
                let t = r * p.hbar * p.omega / p.k_b;
                (
                    GasSpec::thermal(t, 0.0),
                    GasSpec::thermal(t, theta),
                    MembraneSpec::thermal(t),
                )
            }
        }
    }
}

/// Fock n ∈ {1, 100} and thermal k_B T/(ħω) ∈ {1, 100}.
pub const PANEL_FAMILIES: [GasFamily; 4] = [
    GasFamily::Fock(1),
    GasFamily::Fock(100),
    GasFamily::Thermal(1.0),
    GasFamily::Thermal(100.0),
];

pub(crate) fn finish(cfg: &ExperimentConfig, files: Vec<PathBuf>, summary: String) -> Outcome {
    log::info!(
        "{}: wrote {} files to {}",
        cfg.command.name(),
        files.len(),
        cfg.out.display()
    );
    Outcome {
        files,
        summary,
        success: true,
    }
}

/// Cycle-averaged results of one exact-engine run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPoint {
    pub displacement: f64,
    /// Cycle average of the instantaneous variance of `X_M`.
    pub variance: f64,
    /// `⟨H_M⟩` cycle average minus its initial value.
    pub energy_transfer: f64,
    pub max_norm_drift: f64,
    pub max_energy_drift: f64,
    /// Largest `|⟨ΔN_H(t)⟩ − ⟨ΔN_H(0)⟩|`.
    pub dnh_drift: f64,
}

pub const POINTS_PER_PERIOD: usize = 64;

/// Evolves the given initial state for `periods` mechanical periods and
/// averages over the longest whole number of common periods that fits.
pub fn exact_run(
    p: &SystemParams<f64>,
    states: &(GasSpec<f64>, GasSpec<f64>, MembraneSpec<f64>),
    d_m: usize,
    periods: usize,
) -> CliResult<(ExactPoint, gibbsmix::Trajectory64)> {
    use gibbsmix::analytic::averaging_window_for;
    use gibbsmix::exactsim::{
        cycle_average, evolve, initial_state, EvolveOptions, Quantity, TimeGrid, TruncationConfig,
    };

    let truncation = TruncationConfig {
        d_m,
        ..Default::default()
    };
    let state = initial_state(&states.0, &states.1, &states.2, p, &truncation)?;
    let grid = TimeGrid::periods(p.omega_m, periods, POINTS_PER_PERIOD)?;
    let traj = evolve(&state, p, &grid, EvolveOptions::default())?;
    let window = averaging_window_for(&[p.lambda_v, p.lambda_h], p.omega_m);
    let used = if window.commensurate && window.periods as usize <= periods {
        periods / window.periods as usize * window.periods as usize
    } else {
        log::warn!("no common period within {periods} mechanical periods; averaging over the whole run");
        periods
    };
    let tau = used as f64 * 2.0 * std::f64::consts::PI / p.omega_m;
    let h = traj.series(Quantity::HM);
    let dnh = traj.series(Quantity::DNH);
    let point = ExactPoint {
        displacement: cycle_average(&traj, tau, Quantity::X)?,
        variance: cycle_average(&traj, tau, Quantity::VarX)?,
        energy_transfer: cycle_average(&traj, tau, Quantity::HM)? - h[0],
        max_norm_drift: traj.max_norm_drift(),
        max_energy_drift: traj.max_energy_drift,
        dnh_drift: dnh.iter().fold(0.0f64, |m, v| m.max((v - dnh[0]).abs())),
    };
    Ok((point, traj))
}

/// Runs `f` over `items` on the current worker pool, keeping input order.
pub(crate) fn par_map<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> CliResult<U> + Sync + Send,
) -> CliResult<Vec<U>> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Drive parameters of the driven commands: the Fig. 6 set with any drive
/// keys of the parameter file applied on top. The system block of the file
/// replaces the Fig. 6 system only for the `fig6` command, whose defaults
/// are the experimental numbers.
pub fn driven_params(cfg: &ExperimentConfig) -> gibbsmix::DrivenParams64 {
    let mut d = gibbsmix::DrivenParams64::fig6();
    if cfg.command == Command::Fig6 {
        d.base = cfg.system();
    }
    let k = &cfg.params.drive;
    d.epsilon = k.epsilon.unwrap_or(d.epsilon);
    d.kappa = k.kappa.unwrap_or(d.kappa);
    d.kappa_m = k.kappa_m.unwrap_or(d.kappa_m);
    d.theta = k.theta.unwrap_or(d.theta);
    d
}

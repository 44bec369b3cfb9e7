//! Command line, resolved run configuration and its echo.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use gibbsmix::paramfile::{format_params, parse_params, ParamFile};
use gibbsmix::SystemParams;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Command {
    /// Displacement per photon against θ
    Fig3,
    /// Mixing work and energy transfer per photon against temperature
    Fig4,
    /// Energy transfer against θ for the ideal PBS membrane
    Fig5a,
    /// Energy transfer across the PBS to BS crossover
    Fig5b,
    /// Driven, damped implementation: trajectories and steady state
    Fig6,
    /// Exact-engine trajectories over a θ grid with closed-form comparison
    Sweep,
    /// Every oracle and invariant check, with a pass/fail report
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Fig5a => "fig5a",
            Command::Fig5b => "fig5b",
            Command::Fig6 => "fig6",
            Command::Sweep => "sweep",
            Command::Validate => "validate",
        }
    }

    /// Parameters a parameter file overrides for this command.
    pub fn base_params(self) -> SystemParams<f64> {
        match self {
            Command::Fig5b => SystemParams::crossover(1.0, 1.0),
            Command::Fig6 => SystemParams::fig6_si(),
            _ => SystemParams::fig3(),
        }
    }

    fn default_theta_points(self) -> usize {
        match self {
            Command::Fig6 => 11,
            Command::Sweep => 5,
            _ => 50,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gibbsmix",
    version,
    about = "Optomechanical Gibbs mixing: figure data, sweeps and validation"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// key = value parameter file overriding the command's defaults
    #[arg(long)]
    pub params: Option<PathBuf>,

    /// Output directory (created if missing)
    #[arg(long)]
    pub out: PathBuf,

    /// Number of θ grid points on [0, π/2]
    #[arg(long)]
    pub theta_points: Option<usize>,

    /// Number of temperature grid points (fig4)
    #[arg(long)]
    pub t_points: Option<usize>,

    /// Mechanical periods simulated by the exact engine
    #[arg(long)]
    pub periods: Option<usize>,

    /// Fock photon number per gas for the exact engine (sweep)
    #[arg(long, default_value_t = 1)]
    pub photons: u32,

    /// Overlay exact-engine points at reduced coupling
    #[arg(long)]
    pub exact: bool,

    /// Worker threads (defaults to the available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,

    /// Tolerance override for a validation check, NAME=VALUE (repeatable)
    #[arg(long = "tol", value_parser = parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,

    /// Skip the SVG plots
    #[arg(long)]
    pub no_plots: bool,
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(format!("tolerance for `{k}` must be positive"));
    }
    Ok((k.trim().to_string(), v))
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub params_path: Option<PathBuf>,
    pub params: ParamFile<f64>,
    pub out: PathBuf,
    pub theta_points: usize,
    pub t_points: usize,
    pub periods: usize,
    pub photons: u32,
    pub exact: bool,
    pub workers: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub plots: bool,
}

pub const MAX_GRID_POINTS: usize = 100_000;

impl ExperimentConfig {
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let text = match &cli.params {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read parameter file {}: {e}", path.display())))?,
            None => String::new(),
        };
        let params = parse_params(&text, cli.command.base_params())?;
        let grid = |name: &str, v: usize, min: usize| -> CliResult<usize> {
            if v < min || v > MAX_GRID_POINTS {
                return Err(CliError::Usage(format!(
                    "{name} must lie in [{min}, {MAX_GRID_POINTS}], got {v}"
                )));
            }
            Ok(v)
        };
        let theta_points = grid(
            "--theta-points",
            cli.theta_points.unwrap_or(cli.command.default_theta_points()),
            2,
        )?;
        let t_points = grid("--t-points", cli.t_points.unwrap_or(31), 2)?;
        let periods = grid("--periods", cli.periods.unwrap_or(10), 1)?;
        let workers = match cli.workers {
            Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
            Some(k) => k,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        if cli.photons == 0 || cli.photons > 8 {
            return Err(CliError::Usage(
                "--photons must lie in [1, 8] for the exact engine".into(),
            ));
        }
        let mut tolerances = BTreeMap::new();
        for (k, v) in cli.tolerances {
            if tolerances.insert(k.clone(), v).is_some() {
                return Err(CliError::Usage(format!("tolerance `{k}` given twice")));
            }
        }
        if cli.command != Command::Fig6 && params.drive != Default::default() {
            log::warn!("drive keys in the parameter file are only used by fig6");
        }
        Ok(Self {
            command: cli.command,
            params_path: cli.params,
            params,
            out: cli.out,
            theta_points,
            t_points,
            periods,
            photons: cli.photons,
            exact: cli.exact,
            workers,
            tolerances,
            plots: !cli.no_plots,
        })
    }

    pub fn system(&self) -> SystemParams<f64> {
        self.params.system
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// Arguments reproducing this run from the echoed parameter file.
    pub fn command_line(&self) -> String {
        let mut s = format!(
            "gibbsmix {} --params params.txt --out {} --theta-points {} --t-points {} --periods {} --photons {} --workers {}",
            self.command.name(),
            self.out.display(),
            self.theta_points,
            self.t_points,
            self.periods,
            self.photons,
            self.workers
        );
        if self.exact {
            s.push_str(" --exact");
        }
        if !self.plots {
            s.push_str(" --no-plots");
        }
        for (k, v) in &self.tolerances {
            let _ = write!(s, " --tol {k}={v:e}");
        }
        s
    }
}

/// Writes `params.txt` (effective parameters, re-readable with `--params`)
/// and `config.txt` (grid settings and the reproducing command line).
pub fn write_echo(cfg: &ExperimentConfig) -> CliResult<()> {
    let mut params = cfg.params;
    if matches!(cfg.command, Command::Fig6 | Command::Validate) {
        let d = crate::commands::driven_params(cfg);
        params.drive.epsilon = Some(d.epsilon);
        params.drive.kappa = Some(d.kappa);
        params.drive.kappa_m = Some(d.kappa_m);
        params.drive.theta = Some(d.theta);
    }
    std::fs::write(cfg.out.join("params.txt"), format_params(&params))?;
    let mut s = String::new();
    let _ = writeln!(s, "# gibbsmix {} run configuration", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "command = {}", cfg.command.name());
    let _ = writeln!(
        s,
        "params_source = {}",
        cfg.params_path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "defaults".into())
    );
    let _ = writeln!(s, "theta_points = {}", cfg.theta_points);
    let _ = writeln!(s, "t_points = {}", cfg.t_points);
    let _ = writeln!(s, "periods = {}", cfg.periods);
    let _ = writeln!(s, "photons = {}", cfg.photons);
    let _ = writeln!(s, "exact = {}", cfg.exact);
    let _ = writeln!(s, "workers = {}", cfg.workers);
    let _ = writeln!(s, "plots = {}", cfg.plots);
    for (k, v) in &cfg.tolerances {
        let _ = writeln!(s, "tolerance.{k} = {v:e}");
    }
    let _ = writeln!(s, "reproduce = {}", cfg.command_line());
    std::fs::write(cfg.out.join("config.txt"), s)?;
    Ok(())
}

//! Figure reproduction, sweeps and validation on top of `gibbsmix`.

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod output;
pub mod svg;

pub use config::{Cli, Command, ExperimentConfig};
pub use error::{CliError, CliResult};

/// Runs one command inside a worker pool of the configured size.
pub fn run(cfg: &ExperimentConfig) -> CliResult<commands::Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    std::fs::create_dir_all(&cfg.out)?;
    let outcome = pool.install(|| commands::dispatch(cfg))?;
    config::write_echo(cfg)?;
    Ok(outcome)
}

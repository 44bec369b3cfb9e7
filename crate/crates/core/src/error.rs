use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The first-order closed forms are singular at λ = ω_M.
    #[error(
        "tunnelling rate {lambda} is within the resonance guard of ω_M = {omega_m} \
         (|λ − ω_M|/ω_M ≤ 1e-6); use the exact engine, which has no singularity"
    )]
    Resonance { lambda: f64, omega_m: f64 },

    #[error("basis dimension {dimension} exceeds the cap of {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state truncation infeasible: {0}")]
    Truncation(String),

    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    #[error("invalid time grid: {0}")]
    Grid(String),

    #[error("time average did not converge: {0}")]
    NonConvergence(String),

    #[error("parameter file, line {line}: {reason}")]
    ParamFile { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

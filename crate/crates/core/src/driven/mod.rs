//! Driven, damped mean-field model of the membrane in a two-mode cavity.
//!
//! Each of the four cavity modes (left/right, V/H) is a classical complex
//! amplitude driven by a laser and damped by cavity loss, and the membrane
//! is a damped oscillator pushed by the photon-number imbalance.

mod integrate;
mod params;
mod state;
mod steady;

pub use integrate::{default_step, integrate, integrate_with, DrivenOptions, DrivenTrajectory, Scheme};
pub use params::{DrivenParams, KappaConvention};
pub use state::{rhs, MeanFieldState};
pub use steady::{
    kappa_calibration, steady_state_formula, steady_state_numeric, steady_state_numeric_with, KappaCalibration,
    SteadyState,
};

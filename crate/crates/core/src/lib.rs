//! Gibbs mixing of partially distinguishable photon gases across a
//! polarising-beamsplitter membrane.
//!
//! * [`analytic`]: first-order closed forms for the membrane displacement,
//!   mixing work, fluctuations and energy transfer.
//! * [`exactsim`]: truncated Fock-space evolution under the full
//!   Hamiltonian, used as an oracle for the closed forms.
//! * [`driven`]: mean-field model of laser-driven, damped cavities.
//!
//! Numerical code is generic over [`Real`]; the `*64` aliases below fix the
//! scalar to `f64`. Photon-number algebra that is exact in rational
//! arithmetic is generic over [`Field`] and instantiated with
//! [`BigRational`] through [`ExactNumberMoments`].

pub mod analytic;
pub mod csv;
pub mod driven;
pub mod error;
pub mod exactsim;
pub mod gas;
pub mod moments;
pub mod paramfile;
pub mod params;
pub mod scalar;

pub use error::{Error, Result};
pub use gas::{GasKind, GasSpec, MembraneSpec};
pub use moments::{initial_moments, number_moments, GasNumberStats, InitialMoments, NumberMoments};
pub use params::{natural_units, ScaledParams, SystemParams};
pub use scalar::{Field, Real};

pub use num_rational::BigRational;

pub type SystemParams64 = SystemParams<f64>;
pub type SystemParams32 = SystemParams<f32>;
pub type ScaledParams64 = ScaledParams<f64>;
pub type GasSpec64 = GasSpec<f64>;
pub type MembraneSpec64 = MembraneSpec<f64>;
pub type InitialMoments64 = InitialMoments<f64>;
pub type InitialMoments32 = InitialMoments<f32>;
pub type ExactNumberMoments = NumberMoments<BigRational>;
pub type ExactGasStats = GasNumberStats<BigRational>;
pub type EnsembleState64 = exactsim::EnsembleState<f64>;
pub type Trajectory64 = exactsim::Trajectory<f64>;
pub type DrivenParams64 = driven::DrivenParams<f64>;
pub type DrivenTrajectory64 = driven::DrivenTrajectory<f64>;

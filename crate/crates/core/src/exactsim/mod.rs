//! Exact evolution under the full Hamiltonian on a truncated Fock space.
//!
//! The photon numbers `N_V` and `N_H` are conserved, and so is the left H
//! count when H photons cannot tunnel, so the Hilbert space splits into
//! small sectors. Mixed initial states are diagonal mixtures of product
//! states and are evolved as weighted pure states, in parallel.

mod basis;
mod ensemble;
mod hamiltonian;
mod observables;
mod oracle;
mod propagate;
mod sparse;
mod trajectory;

pub use basis::{build_basis, FockBasis, Occupation, Sector, DEFAULT_DIMENSION_CAP};
pub use ensemble::{initial_state, EnsembleMember, EnsembleState, TruncationConfig};
pub use hamiltonian::build_hamiltonian;
pub use observables::{observables, vector_observables, Observables};
pub use oracle::{determine_linear_term, exact_fock_moments, moment_oracle, LinearTermReport, LinearTermVariant};
pub use propagate::{bessel_j_sequence, Propagator, PropagatorKind};
pub use sparse::SparseOperator;
pub use trajectory::{
    cycle_average, cycle_average_from, evolve, trapezoid_average, EvolveOptions, Quantity, TimeGrid, Trajectory,
};

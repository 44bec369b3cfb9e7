//! First-order (in `g_H`, `g_V`) Heisenberg-picture predictions.
//!
//! To this order the photons evolve under the beamsplitter alone and drive
//! the membrane as a harmonic oscillator. Every quantity below is a closed
//! form in the [`InitialMoments`] and [`SystemParams`].

mod averaging;
mod energy;
pub(crate) mod harmonics;
pub(crate) mod response;
mod variance;

pub use averaging::{averaging_window, averaging_window_for, rational_approximation, AveragingWindow};
pub use energy::{energy_transfer, energy_transfer_general, EnergyPrefactors};
pub use harmonics::Harmonics;
pub use response::RESONANCE_GUARD;
pub use variance::{
    displacement_variance, displacement_variance_cycle, displacement_variance_of_average, VarianceKind,
};

use crate::error::Result;
use crate::moments::InitialMoments;
use crate::params::SystemParams;
use crate::scalar::Real;
use response::check_resonance;

/// Reflection and transmission amplitudes `(cos(λt/2), sin(λt/2))` of the
/// beamsplitter acting alone for a time `t`.
pub fn pbs_coefficients<T: Real>(t: T, lambda: T) -> (T, T) {
    let half = lambda * t / T::lit(2.0);
    (half.cos(), half.sin())
}

/// `⟨ΔN_V(t)⟩` at zeroth order: the V photons swap sides at rate λ.
pub fn delta_nv_mean<T: Real>(t: T, m: &InitialMoments<T>, lambda: T) -> T {
    m.mean_dnv * (lambda * t).cos() + m.mean_dkv * (lambda * t).sin()
}

/// Beating between the tunnelling rate λ and the membrane frequency,
/// `v_V(t) = ω_M²/(ω_M² − λ²) (sin λt − (λ/ω_M) sin ω_M t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatingFunction<T> {
    lambda: T,
    omega_m: T,
}

impl<T: Real> BeatingFunction<T> {
    pub fn new(lambda: T, omega_m: T) -> Result<Self> {
        check_resonance(lambda, omega_m)?;
        Ok(Self { lambda, omega_m })
    }

    fn prefactor(&self) -> T {
        let w2 = self.omega_m * self.omega_m;
        w2 / (w2 - self.lambda * self.lambda)
    }

    pub fn value(&self, t: T) -> T {
        self.prefactor() * ((self.lambda * t).sin() - self.lambda / self.omega_m * (self.omega_m * t).sin())
    }

    pub fn derivative(&self, t: T) -> T {
        self.lambda * self.derivative_over_lambda(t)
    }

    /// `v̇_V(t)/λ`, finite at λ = 0.
    pub fn derivative_over_lambda(&self, t: T) -> T {
        self.prefactor() * ((self.lambda * t).cos() - (self.omega_m * t).cos())
    }

    /// Upper bound `ω_M (ω_M + λ)/|ω_M² − λ²|` on `|v_V(t)|`.
    pub fn bound(&self) -> T {
        self.prefactor().abs() * (T::one() + self.lambda / self.omega_m)
    }
}

/// `⟨X_M(t)⟩` for the ideal PBS, starting from `⟨X_M(0)⟩ = ⟨P_M(0)⟩ = 0`.
pub fn mean_displacement<T: Real>(t: T, m: &InitialMoments<T>, p: &SystemParams<T>) -> Result<T> {
    let v = BeatingFunction::new(p.lambda_v, p.omega_m)?;
    let static_unit = p.hbar / (p.mass * p.omega_m * p.omega_m);
    let constant = static_unit * p.g_h * m.mean_dnh;
    let (x0, p0) = (T::zero(), T::zero());
    Ok(constant
        + v.value(t) * static_unit * p.g_v * m.mean_dkv
        + v.derivative_over_lambda(t) * static_unit * p.g_v * m.mean_dnv
        + (p.omega_m * t).cos() * (x0 - constant)
        + (p.omega_m * t).sin() * p0 / (p.mass * p.omega_m))
}

/// Cycle-averaged displacement `ħ g_H ⟨ΔN_H(0)⟩/(m ω_M²)`; every
/// oscillatory term averages out.
pub fn time_averaged_displacement<T: Real>(m: &InitialMoments<T>, p: &SystemParams<T>) -> T {
    p.hbar * p.g_h * m.mean_dnh / (p.mass * p.omega_m * p.omega_m)
}

/// Potential energy of the time-averaged displaced origin,
/// `½ m ω_M² ⟨X̄_M⟩²`.
pub fn mixing_work<T: Real>(m: &InitialMoments<T>, p: &SystemParams<T>) -> T {
    let x = time_averaged_displacement(m, p);
    T::lit(0.5) * p.mass * p.omega_m * p.omega_m * x * x
}

/// Classical Gibbs mixing work for distinguishable ideal gases, `2 n k_B T ln 2`.
pub fn classical_mixing_work<T: Real>(n: T, temperature: T, k_b: T) -> T {
    T::lit(2.0) * n * k_b * temperature * T::LN_2()
}

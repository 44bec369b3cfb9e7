//! Initial-state descriptions of the photon gases and the membrane.

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GasKind<T> {
    /// Exactly `n` photons in the cavity half.
    Fock { n: u32 },
    /// Single-mode thermal state; `temperature` in the same units as
    /// `ħω/k_B`.
    Thermal { temperature: T },
}

/// A photon gas whose photons all share the polarisation
/// `cos θ |V⟩ + sin θ |H⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasSpec<T> {
    pub kind: GasKind<T>,
    pub theta: T,
}

impl<T: Real> GasSpec<T> {
    pub fn fock(n: u32, theta: T) -> Self {
        Self {
            kind: GasKind::Fock { n },
            theta,
        }
    }

    pub fn thermal(temperature: T, theta: T) -> Self {
        Self {
            kind: GasKind::Thermal { temperature },
            theta,
        }
    }

    pub fn vacuum() -> Self {
        Self::fock(0, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= T::zero() && self.theta <= T::FRAC_PI_2() * T::lit(1.0 + 1e-12)) {
            return Err(Error::param(
                "theta",
                format!("polarisation angle {} outside [0, π/2]", self.theta),
            ));
        }
        if let GasKind::Thermal { temperature } = self.kind {
            if !(temperature >= T::zero()) || !temperature.is_finite() {
                return Err(Error::param(
                    "temperature",
                    format!("must be non-negative, got {temperature}"),
                ));
            }
        }
        Ok(())
    }

    /// `sin²θ`, the H-photon fraction.
    pub fn h_fraction(&self) -> T {
        let s = self.theta.sin();
        s * s
    }
}

/// Thermal phonon state of the membrane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneSpec<T> {
    pub temperature: T,
}

impl<T: Real> MembraneSpec<T> {
    pub fn ground() -> Self {
        Self { temperature: T::zero() }
    }

    pub fn thermal(temperature: T) -> Self {
        Self { temperature }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature >= T::zero()) || !self.temperature.is_finite() {
            return Err(Error::param(
                "membrane temperature",
                format!("must be non-negative, got {}", self.temperature),
            ));
        }
        Ok(())
    }

    /// Mean phonon number `n̄_M = 1/(exp(ħω_M/k_B T) − 1)`.
    pub fn mean_occupation(&self, params: &SystemParams<T>) -> T {
        bose_occupation(params.hbar * params.omega_m, params.k_b * self.temperature)
    }
}

/// Bose–Einstein occupation of a mode with quantum `energy` at thermal
/// energy `kt`; zero at `kt = 0`.
pub fn bose_occupation<T: Real>(energy: T, kt: T) -> T {
    if kt <= T::zero() {
        return T::zero();
    }
    let x = energy / kt;
    if x > T::lit(700.0) {
        return T::zero();
    }
    T::one() / x.exp_m1()
}

/// Boltzmann ratio `exp(−ħω/k_B T)` between successive Fock populations.
pub(crate) fn boltzmann_ratio<T: Real>(energy: T, kt: T) -> T {
    if kt <= T::zero() {
        T::zero()
    } else {
        (-energy / kt).exp()
    }
}

/// `⟨N⟩` per gas: `n` for Fock, Bose–Einstein for thermal.
pub fn mean_photon_number<T: Real>(gas: &GasSpec<T>, params: &SystemParams<T>) -> T {
    match gas.kind {
        GasKind::Fock { n } => T::from_u32(n).unwrap(),
        GasKind::Thermal { temperature } => bose_occupation(params.hbar * params.omega, params.k_b * temperature),
    }
}

/// `⟨N²⟩` per gas: `n²` for Fock, `2⟨N⟩² + ⟨N⟩` for the geometric thermal
/// distribution.
pub fn second_moment_photon_number<T: Real>(gas: &GasSpec<T>, params: &SystemParams<T>) -> T {
    let mean = mean_photon_number(gas, params);
    match gas.kind {
        GasKind::Fock { .. } => mean * mean,
        GasKind::Thermal { .. } => T::lit(2.0) * mean * mean + mean,
    }
}

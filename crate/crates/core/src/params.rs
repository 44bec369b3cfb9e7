//! System parameters and unit conventions.
//!
//! Engines compute internally in natural units ħ = ω_M = m = 1, where the
//! natural length is `sqrt(ħ/(m ω_M))` (so `x_zpf = 1/√2`), the natural
//! energy is `ħ ω_M` and the natural time is `1/ω_M`. Results are reported
//! in the units of the figures: lengths in `ħ g_H/(m ω_M²)` and energies in
//! `ħ² g_H²/(m ω_M²)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reduced Planck constant in SI units.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant in SI units.
pub const K_B_SI: f64 = 1.380_649e-23;

/// Hamiltonian coefficients of the membrane-in-the-middle setup.
///
/// Frequencies are angular. `g_h`, `g_v` are forces per photon divided by ħ
/// (frequency per length). `lambda_h = 0` is the ideal polarising
/// beamsplitter; `lambda_h = lambda_v` with `g_h = g_v` the ideal
/// beamsplitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub omega: T,
    pub omega_m: T,
    pub lambda_v: T,
    pub lambda_h: T,
    pub g_h: T,
    pub g_v: T,
    pub mass: T,
    pub hbar: T,
    pub k_b: T,
}

impl<T: Real> SystemParams<T> {
    /// Parameters already expressed in natural units (ħ = ω_M = m = k_B = 1).
    pub fn natural(omega: T, lambda_v: T, lambda_h: T, g_h: T, g_v: T) -> Self {
        Self {
            omega,
            omega_m: T::one(),
            lambda_v,
            lambda_h,
            g_h,
            g_v,
            mass: T::one(),
            hbar: T::one(),
            k_b: T::one(),
        }
    }

    /// Natural-unit parameters from the dimensionless ratios used in the
    /// figure captions: λ/ω_M, g_H/g_V, ω/ω_M and ω_M/(g_V x_zpf).
    pub fn from_ratios(lambda_ratio: T, g_ratio: T, omega_ratio: T, coupling_ratio: T) -> Self {
        let x_zpf = T::FRAC_1_SQRT_2();
        let g_v = T::one() / (coupling_ratio * x_zpf);
        Self::natural(omega_ratio, lambda_ratio, T::zero(), g_ratio * g_v, g_v)
    }

    /// Parameter set of the displacement, temperature and energy figures:
    /// λ/ω_M = 2, g_H/g_V = 6, ω_M/(g_V x_zpf) = 10, ω/ω_M = 10.
    pub fn fig3() -> Self {
        Self::from_ratios(T::lit(2.0), T::lit(6.0), T::lit(10.0), T::lit(10.0))
    }

    /// Generalised beamsplitter of the PBS↔BS crossover: λ_V = 4 ω_M,
    /// g_V x_zpf = 0.1 ω_M, λ_H = r_λ λ_V, g_H = r_g g_V.
    pub fn crossover(r_lambda: T, r_g: T) -> Self {
        let mut p = Self::from_ratios(T::lit(4.0), r_g, T::lit(10.0), T::lit(10.0));
        p.lambda_h = r_lambda * p.lambda_v;
        p
    }

    /// Experimental membrane-in-the-middle numbers (SI units) used for the
    /// driven implementation: ω_M = 350 kHz, ω = 20 THz, λ = 34 GHz,
    /// m = 45 ng, g_V x_zpf = 3.3 kHz, g_H x_zpf = 19.8 kHz.
    pub fn fig6_si() -> Self {
        let mut p = Self {
            omega: T::lit(20e12),
            omega_m: T::lit(350e3),
            lambda_v: T::lit(34e9),
            lambda_h: T::zero(),
            g_h: T::zero(),
            g_v: T::zero(),
            mass: T::lit(45e-12),
            hbar: T::lit(HBAR_SI),
            k_b: T::lit(K_B_SI),
        };
        let x_zpf = p.x_zpf();
        p.g_v = T::lit(3.3e3) / x_zpf;
        p.g_h = T::lit(19.8e3) / x_zpf;
        p
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_m", self.omega_m),
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("k_b", self.k_b),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::param(name, format!("must be positive and finite, got {v}")));
            }
        }
        let non_negative = [
            ("omega", self.omega),
            ("lambda_v", self.lambda_v),
            ("lambda_h", self.lambda_h),
            ("g_v", self.g_v),
        ];
        for (name, v) in non_negative {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::param(name, format!("must be non-negative and finite, got {v}")));
            }
        }
        if !(self.g_h >= self.g_v) || !self.g_h.is_finite() {
            return Err(Error::param(
                "g_h",
                format!(
                    "H photons must push at least as hard as V photons (g_h = {}, g_v = {})",
                    self.g_h, self.g_v
                ),
            ));
        }
        Ok(())
    }

    /// Zero-point fluctuation length `sqrt(ħ/(2 m ω_M))`.
    pub fn x_zpf(&self) -> T {
        (self.hbar / (T::lit(2.0) * self.mass * self.omega_m)).sqrt()
    }

    /// Natural length `sqrt(ħ/(m ω_M))`.
    pub fn natural_length(&self) -> T {
        (self.hbar / (self.mass * self.omega_m)).sqrt()
    }

    /// Reporting length unit `ħ g_H/(m ω_M²)`.
    pub fn length_unit(&self) -> T {
        self.hbar * self.g_h / (self.mass * self.omega_m * self.omega_m)
    }

    /// Reporting energy unit `ħ² g_H²/(m ω_M²)`.
    pub fn energy_unit(&self) -> T {
        self.hbar * self.hbar * self.g_h * self.g_h / (self.mass * self.omega_m * self.omega_m)
    }

    /// Same parameters with both couplings multiplied by `scale`.
    pub fn with_coupling_scale(&self, scale: T) -> Self {
        Self {
            g_h: self.g_h * scale,
            g_v: self.g_v * scale,
            ..*self
        }
    }

    /// Converts a temperature to natural units `k_B T/(ħ ω_M)`.
    pub fn temperature_to_natural(&self, temperature: T) -> T {
        self.k_b * temperature / (self.hbar * self.omega_m)
    }

    /// The same physical system in natural units.
    pub fn to_natural(&self) -> Self {
        let l0 = self.natural_length();
        let w = self.omega_m;
        Self::natural(
            self.omega / w,
            self.lambda_v / w,
            self.lambda_h / w,
            self.g_h * l0 / w,
            self.g_v * l0 / w,
        )
    }
}

/// Dimensionless view of [`SystemParams`] plus the reporting units.
///
/// Couplings are stored as `g x_zpf/ω_M`, which stays finite when `g_V = 0`.
/// [`ScaledParams::to_params`] inverts [`natural_units`] exactly up to
/// rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams<T> {
    pub length_unit: T,
    pub energy_unit: T,
    pub lambda_ratio: T,
    pub lambda_h_ratio: T,
    pub omega_ratio: T,
    pub g_h_coupling: T,
    pub g_v_coupling: T,
    pub omega_m: T,
    pub mass: T,
    pub hbar: T,
    pub k_b: T,
}

impl<T: Real> ScaledParams<T> {
    /// g_H/g_V (infinite when g_V = 0).
    pub fn g_ratio(&self) -> T {
        self.g_h_coupling / self.g_v_coupling
    }

    /// ω_M/(g_V x_zpf).
    pub fn coupling_ratio(&self) -> T {
        T::one() / self.g_v_coupling
    }

    pub fn to_params(&self) -> SystemParams<T> {
        let mut p = SystemParams {
            omega: self.omega_ratio * self.omega_m,
            omega_m: self.omega_m,
            lambda_v: self.lambda_ratio * self.omega_m,
            lambda_h: self.lambda_h_ratio * self.omega_m,
            g_h: T::zero(),
            g_v: T::zero(),
            mass: self.mass,
            hbar: self.hbar,
            k_b: self.k_b,
        };
        let x_zpf = p.x_zpf();
        p.g_h = self.g_h_coupling * self.omega_m / x_zpf;
        p.g_v = self.g_v_coupling * self.omega_m / x_zpf;
        p
    }

    pub fn length_to_units(&self, x: T) -> T {
        x / self.length_unit
    }

    pub fn length_from_units(&self, x: T) -> T {
        x * self.length_unit
    }

    pub fn energy_to_units(&self, e: T) -> T {
        e / self.energy_unit
    }

    pub fn energy_from_units(&self, e: T) -> T {
        e * self.energy_unit
    }
}

pub fn natural_units<T: Real>(params: &SystemParams<T>) -> ScaledParams<T> {
    let w = params.omega_m;
    let x_zpf = params.x_zpf();
    ScaledParams {
        length_unit: params.length_unit(),
        energy_unit: params.energy_unit(),
        lambda_ratio: params.lambda_v / w,
        lambda_h_ratio: params.lambda_h / w,
        omega_ratio: params.omega / w,
        g_h_coupling: params.g_h * x_zpf / w,
        g_v_coupling: params.g_v * x_zpf / w,
        omega_m: w,
        mass: params.mass,
        hbar: params.hbar,
        k_b: params.k_b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fig3_ratios() {
        let s = natural_units(&SystemParams::<f64>::fig3());
        assert_relative_eq!(s.lambda_ratio, 2.0, max_relative = 1e-14);
        assert_relative_eq!(s.g_ratio(), 6.0, max_relative = 1e-14);
        assert_relative_eq!(s.omega_ratio, 10.0, max_relative = 1e-14);
        assert_relative_eq!(s.coupling_ratio(), 10.0, max_relative = 1e-14);
    }

    #[test]
    fn scaling_round_trip() {
        let p = SystemParams::<f64>::fig6_si();
        let s = natural_units(&p);
        let x = 3.7e-9;
        assert_relative_eq!(s.length_from_units(s.length_to_units(x)), x, max_relative = 1e-12);
        let q = s.to_params();
        for (a, b) in [
            (p.omega, q.omega),
            (p.lambda_v, q.lambda_v),
            (p.g_h, q.g_h),
            (p.g_v, q.g_v),
        ] {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn length_unit_linear_in_g_h() {
        let p = SystemParams::<f64>::fig3();
        let mut q = p;
        q.g_h *= 2.0;
        assert_relative_eq!(q.length_unit(), 2.0 * p.length_unit(), max_relative = 1e-15);
    }

    #[test]
    fn natural_conversion_preserves_ratios() {
        let p = SystemParams::<f64>::fig6_si();
        let n = p.to_natural();
        assert_relative_eq!(n.x_zpf(), std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-15);
        let a = natural_units(&p);
        let b = natural_units(&n);
        assert_relative_eq!(a.g_h_coupling, b.g_h_coupling, max_relative = 1e-12);
        assert_relative_eq!(a.lambda_ratio, b.lambda_ratio, max_relative = 1e-12);
        // g_H x_zpf = 19.8 kHz against ω_M = 350 kHz
        assert_relative_eq!(a.g_h_coupling, 19.8 / 350.0, max_relative = 1e-12);
    }

    #[test]
    fn validation_rejects_weak_h_force() {
        let mut p = SystemParams::<f64>::fig3();
        p.g_h = 0.5 * p.g_v;
        assert!(p.validate().is_err());
        p.g_h = p.g_v;
        assert!(p.validate().is_ok());
        p.mass = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn crossover_sets() {
        let bs = SystemParams::<f64>::crossover(1.0, 1.0);
        assert_eq!(bs.lambda_h, bs.lambda_v);
        assert_eq!(bs.g_h, bs.g_v);
        let pbs = SystemParams::<f64>::crossover(0.0, 10.0);
        assert_eq!(pbs.lambda_h, 0.0);
        assert_relative_eq!(pbs.g_v * pbs.x_zpf(), 0.1, max_relative = 1e-14);
    }
}

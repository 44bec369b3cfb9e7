use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::scalar::Real;

/// How the cavity damping rate `kappa` enters the amplitude equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KappaConvention {
    /// Amplitudes decay at `kappa`; the steady H population is `ε_H²/κ²`.
    AmplitudeRate,
    /// `kappa` is the full energy linewidth, so amplitudes decay at `κ/2`
    /// and the steady H population is `4ε_H²/κ²`.
    #[default]
    FullLinewidth,
}

impl KappaConvention {
    pub fn name(&self) -> &'static str {
        match self {
            KappaConvention::AmplitudeRate => "amplitude-rate",
            KappaConvention::FullLinewidth => "full-linewidth",
        }
    }
}

/// Drive and damping on top of the closed-system parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenParams<T> {
    /// Laser drive amplitude (frequency units).
    pub epsilon: T,
    pub kappa: T,
    pub kappa_m: T,
    /// Polarisation angle of the right-hand drive.
    pub theta: T,
    pub base: SystemParams<T>,
    pub convention: KappaConvention,
}

impl<T: Real> DrivenParams<T> {
    /// Experimental membrane-in-the-middle set: ε = 40 GHz, κ = 85 kHz,
    /// κ_M = 1 Hz on top of [`SystemParams::fig6_si`].
    pub fn fig6() -> Self {
        Self {
            epsilon: T::lit(40e9),
            kappa: T::lit(85e3),
            kappa_m: T::one(),
            theta: T::FRAC_PI_2(),
            base: SystemParams::fig6_si(),
            convention: KappaConvention::default(),
        }
    }

    pub fn with_theta(&self, theta: T) -> Self {
        Self { theta, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.kappa > T::zero()) || !self.kappa.is_finite() {
            return Err(Error::param("kappa", "cavity damping must be positive"));
        }
        if !(self.kappa_m >= T::zero()) || !self.kappa_m.is_finite() {
            return Err(Error::param("kappa_m", "membrane damping must be non-negative"));
        }
        if !(self.epsilon >= T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::param("epsilon", "drive amplitude must be non-negative"));
        }
        if !(self.theta >= T::zero() && self.theta <= T::FRAC_PI_2() * T::lit(1.0 + 1e-12)) {
            return Err(Error::param("theta", "polarisation angle must lie in [0, π/2]"));
        }
        if self.kappa_m > T::zero() && self.kappa / self.kappa_m < T::lit(100.0) {
            log::warn!(
                "κ/κ_M = {:.3e} < 100: cavity and membrane damping are not well separated",
                (self.kappa / self.kappa_m).to_f64_lossy()
            );
        }
        Ok(())
    }

    /// Damping rate of the mode amplitudes.
    pub fn amplitude_damping(&self) -> T {
        match self.convention {
            KappaConvention::AmplitudeRate => self.kappa,
            KappaConvention::FullLinewidth => self.kappa / T::lit(2.0),
        }
    }

    /// Drive amplitudes `(ε_LV, ε_LH, ε_RV, ε_RH)`.
    pub fn drives(&self) -> [T; 4] {
        [
            self.epsilon,
            T::zero(),
            self.epsilon * self.theta.cos(),
            self.epsilon * self.theta.sin(),
        ]
    }

    /// The same system with ħ = ω_M = m = 1.
    pub fn to_natural(&self) -> Self {
        let w = self.base.omega_m;
        Self {
            epsilon: self.epsilon / w,
            kappa: self.kappa / w,
            kappa_m: self.kappa_m / w,
            theta: self.theta,
            base: self.base.to_natural(),
            convention: self.convention,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig6_in_natural_units() {
        let p = DrivenParams::<f64>::fig6().to_natural();
        assert!((p.epsilon - 40e9 / 350e3).abs() < 1e-6);
        assert!((p.kappa - 85.0 / 350.0).abs() < 1e-12);
        assert!((p.base.lambda_v - 34e9 / 350e3).abs() < 1e-6);
        // g x_zpf/ω_M with x_zpf = 1/√2
        assert!((p.base.g_h / std::f64::consts::SQRT_2 - 19.8 / 350.0).abs() < 1e-12);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_bad_rates() {
        let mut p = DrivenParams::<f64>::fig6();
        p.kappa = 0.0;
        assert!(p.validate().is_err());
        let mut p = DrivenParams::<f64>::fig6();
        p.theta = 2.0;
        assert!(p.validate().is_err());
        assert_eq!(DrivenParams::<f64>::fig6().amplitude_damping(), 42.5e3);
    }
}

use num_complex::Complex;

use super::params::DrivenParams;
use crate::scalar::Real;

/// Mean-field amplitudes and membrane phase-space point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldState<T> {
    pub a_lv: Complex<T>,
    pub a_rv: Complex<T>,
    pub a_lh: Complex<T>,
    pub a_rh: Complex<T>,
    pub x: T,
    pub v: T,
}

impl<T: Real> Default for MeanFieldState<T> {
    fn default() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self {
            a_lv: z,
            a_rv: z,
            a_lh: z,
            a_rh: z,
            x: T::zero(),
            v: T::zero(),
        }
    }
}

impl<T: Real> MeanFieldState<T> {
    pub fn delta_nv(&self) -> T {
        self.a_rv.norm_sqr() - self.a_lv.norm_sqr()
    }

    pub fn delta_nh(&self) -> T {
        self.a_rh.norm_sqr() - self.a_lh.norm_sqr()
    }

    pub fn photon_number(&self) -> T {
        self.a_lv.norm_sqr() + self.a_rv.norm_sqr() + self.a_lh.norm_sqr() + self.a_rh.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        [self.a_lv, self.a_rv, self.a_lh, self.a_rh]
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
            && self.x.is_finite()
            && self.v.is_finite()
    }

    pub(crate) fn axpy(&self, k: &Self, h: T) -> Self {
        Self {
            a_lv: self.a_lv + k.a_lv * h,
            a_rv: self.a_rv + k.a_rv * h,
            a_lh: self.a_lh + k.a_lh * h,
            a_rh: self.a_rh + k.a_rh * h,
            x: self.x + k.x * h,
            v: self.v + k.v * h,
        }
    }

    /// Radiation-pressure acceleration `ħ(g_H ΔN_H + g_V ΔN_V)/m`.
    pub fn acceleration(&self, p: &DrivenParams<T>) -> T {
        let b = &p.base;
        b.hbar * (b.g_h * self.delta_nh() + b.g_v * self.delta_nv()) / b.mass
    }
}

/// Time derivative in the frame rotating at the drive frequency:
///
/// `dL_p/dt = −i((g_p X − iκ)L_p + λ_p/2 R_p + ε_Lp)`,
/// `dR_p/dt = −i((−g_p X − iκ)R_p + λ_p/2 L_p + ε_Rp)`,
/// `Ẍ + κ_M Ẋ + ω_M² X = ħ(g_H ΔN_H + g_V ΔN_V)/m`,
///
/// with `κ` the amplitude damping of the chosen convention. With
/// `order0_photons` the `g_p X` detunings are dropped.
pub fn rhs<T: Real>(s: &MeanFieldState<T>, p: &DrivenParams<T>, order0_photons: bool) -> MeanFieldState<T> {
    let b = &p.base;
    let k = p.amplitude_damping();
    let [e_lv, e_lh, e_rv, e_rh] = p.drives();
    let (dv, dh) = if order0_photons {
        (T::zero(), T::zero())
    } else {
        (b.g_v * s.x, b.g_h * s.x)
    };
    let minus_i = Complex::new(T::zero(), -T::one());
    let half = T::lit(0.5);
    let c = |re: T, im: T| Complex::new(re, im);
    let left = |a: Complex<T>, other: Complex<T>, det: T, lam: T, e: T| {
        minus_i * (c(det, -k) * a + other * (half * lam) + c(e, T::zero()))
    };
    let right = |a: Complex<T>, other: Complex<T>, det: T, lam: T, e: T| {
        minus_i * (c(-det, -k) * a + other * (half * lam) + c(e, T::zero()))
    };
    MeanFieldState {
        a_lv: left(s.a_lv, s.a_rv, dv, b.lambda_v, e_lv),
        a_rv: right(s.a_rv, s.a_lv, dv, b.lambda_v, e_rv),
        a_lh: left(s.a_lh, s.a_rh, dh, b.lambda_h, e_lh),
        a_rh: right(s.a_rh, s.a_lh, dh, b.lambda_h, e_rh),
        x: s.v,
        v: s.acceleration(p) - p.kappa_m * s.v - b.omega_m * b.omega_m * s.x,
    }
}

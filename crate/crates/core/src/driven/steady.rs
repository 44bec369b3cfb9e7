//! Steady-state membrane displacement under continuous driving.

use super::integrate::{advance, default_step, DrivenOptions};
use super::params::{DrivenParams, KappaConvention};
use super::state::MeanFieldState;
use crate::error::{Error, Result};
use crate::scalar::Real;

const WINDOW_PERIODS: usize = 16;
const MAX_DOUBLINGS: usize = 6;
const TOLERANCE: f64 = 0.01;

/// `4 ε² ħ g_H sin²θ/(m κ² ω_M²)`.
pub fn steady_state_formula<T: Real>(p: &DrivenParams<T>) -> T {
    let b = &p.base;
    let s = p.theta.sin();
    T::lit(4.0) * p.epsilon * p.epsilon * b.hbar * b.g_h * s * s / (b.mass * p.kappa * p.kappa * b.omega_m * b.omega_m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState<T> {
    /// Time-averaged displacement in the length units of the parameters.
    pub displacement: T,
    pub formula: T,
    /// Start of the averaging window.
    pub settle_time: T,
    pub window: T,
    /// Relative change of the average when the window is doubled.
    pub relative_change: T,
}

/// Mean membrane positions over `WINDOW_PERIODS` and `2 WINDOW_PERIODS`
/// mechanical periods after `settle` periods, in natural units.
fn averaged_position<T: Real>(
    q: &DrivenParams<T>,
    opts: &DrivenOptions,
    settle: usize,
    per_period: usize,
) -> Result<(T, T)> {
    let two_pi = T::lit(2.0) * T::PI();
    let h = two_pi / T::from_usize(per_period).unwrap();
    let mut s = MeanFieldState::default();
    let n = WINDOW_PERIODS * per_period;
    let half = T::lit(0.5);
    let mut acc = T::zero();
    let mut short = T::zero();
    for step in 1..=(settle * per_period + 2 * n) {
        let before = s.x;
        s = advance(&s, q, opts, h);
        if !s.is_finite() {
            return Err(Error::Integration {
                time: (h * T::from_usize(step).unwrap()).to_f64_lossy(),
                reason: "mean-field state became non-finite".into(),
            });
        }
        if step > settle * per_period {
            acc = acc + half * (before + s.x);
            if step == settle * per_period + n {
                short = acc / T::from_usize(n).unwrap();
            }
        }
    }
    Ok((short, acc / T::from_usize(2 * n).unwrap()))
}

/// [`steady_state_numeric_with`] with the photons at zeroth order in the
/// coupling.
pub fn steady_state_numeric<T: Real>(p: &DrivenParams<T>) -> Result<SteadyState<T>> {
    steady_state_numeric_with(p, true)
}

/// Integrates with the membrane damping switched off and averages the
/// position over whole mechanical periods. The window starts after twenty
/// photon lifetimes; when doubling the window moves the average by more
/// than 1% the start is pushed back and the comparison repeated.
pub fn steady_state_numeric_with<T: Real>(p: &DrivenParams<T>, order0_photons: bool) -> Result<SteadyState<T>> {
    p.validate()?;
    let mut q = p.to_natural();
    q.kappa_m = T::zero();
    let opts = DrivenOptions {
        order0_photons,
        ..Default::default()
    };
    let two_pi = T::lit(2.0) * T::PI();
    let per_period = (two_pi / default_step(&q, opts.scheme)).ceil().to_f64_lossy() as usize;
    let lifetime = T::lit(20.0) / q.amplitude_damping().min(q.kappa);
    let mut settle = ((lifetime / two_pi).ceil().to_f64_lossy() as usize).max(1);
    // scale for comparing near-zero averages: the θ = π/2 prediction
    let floor = steady_state_formula(&q.with_theta(T::FRAC_PI_2())) * T::lit(1e-6);
    for _ in 0..=MAX_DOUBLINGS {
        let (short, long) = averaged_position(&q, &opts, settle, per_period)?;
        let change = (long - short).abs() / long.abs().max(floor);
        if change <= T::lit(TOLERANCE) {
            let l0 = p.base.natural_length();
            let w = p.base.omega_m;
            return Ok(SteadyState {
                displacement: long * l0,
                formula: steady_state_formula(p),
                settle_time: T::from_usize(settle).unwrap() * two_pi / w,
                window: T::from_usize(2 * WINDOW_PERIODS).unwrap() * two_pi / w,
                relative_change: change,
            });
        }
        settle *= 2;
    }
    Err(Error::NonConvergence(format!(
        "window average still changing after {MAX_DOUBLINGS} doublings of the settling time"
    )))
}

/// Numerical steady state at θ = π/2 against the closed form, for one
/// damping convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaCalibration<T> {
    pub convention: KappaConvention,
    pub numeric: T,
    pub formula: T,
    pub ratio: T,
}

pub fn kappa_calibration<T: Real>(p: &DrivenParams<T>, convention: KappaConvention) -> Result<KappaCalibration<T>> {
    let q = DrivenParams {
        convention,
        ..p.with_theta(T::FRAC_PI_2())
    };
    let s = steady_state_numeric(&q)?;
    Ok(KappaCalibration {
        convention,
        numeric: s.displacement,
        formula: s.formula,
        ratio: s.displacement / s.formula,
    })
}

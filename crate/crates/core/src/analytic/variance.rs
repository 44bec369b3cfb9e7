//! Cycle-averaged fluctuations of the membrane position.

use super::response::{covariances, LinearResponse, N_OPS};
use crate::error::Result;
use crate::moments::InitialMoments;
use crate::params::SystemParams;
use crate::scalar::Real;

/// Which variance is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceKind {
    /// `(1/τ)∫ Var X_M(t) dt`.
    #[default]
    Instantaneous,
    /// `Var((1/τ)∫ X_M(t) dt)`.
    OfTimeAverage,
}

/// Average over `[0, τ]` of the instantaneous variance of `X_M(t)`.
/// With `τ` a common period of all frequencies involved, this is the exact
/// cycle average.
pub fn displacement_variance_cycle<T: Real>(m: &InitialMoments<T>, p: &SystemParams<T>, tau: T) -> Result<T> {
    let r = LinearResponse::new(p, T::zero())?;
    let cov = covariances(m);
    let mut acc = T::zero();
    for i in 0..N_OPS {
        for j in 0..N_OPS {
            if cov[i][j] != T::zero() {
                acc = acc + cov[i][j] * r.coeffs[i].window_mean_product(&r.coeffs[j], tau);
            }
        }
    }
    Ok(acc.max(T::zero()))
}

/// Variance of the time-averaged position operator over `[0, τ]`.
pub fn displacement_variance_of_average<T: Real>(m: &InitialMoments<T>, p: &SystemParams<T>, tau: T) -> Result<T> {
    let r = LinearResponse::new(p, T::zero())?;
    let cov = covariances(m);
    let bar: [T; N_OPS] = std::array::from_fn(|i| r.coeffs[i].window_mean(tau));
    let mut acc = T::zero();
    for i in 0..N_OPS {
        for j in 0..N_OPS {
            acc = acc + cov[i][j] * bar[i] * bar[j];
        }
    }
    Ok(acc.max(T::zero()))
}

pub fn displacement_variance<T: Real>(
    m: &InitialMoments<T>,
    p: &SystemParams<T>,
    kind: VarianceKind,
    tau: T,
) -> Result<T> {
    match kind {
        VarianceKind::Instantaneous => displacement_variance_cycle(m, p, tau),
        VarianceKind::OfTimeAverage => displacement_variance_of_average(m, p, tau),
    }
}

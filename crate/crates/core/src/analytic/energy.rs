//! Cycle-averaged energy transferred to the membrane.

use super::response::{check_resonance, second_moments, LinearResponse, N_OPS, P0, X0};
use crate::error::Result;
use crate::moments::InitialMoments;
use crate::params::SystemParams;
use crate::scalar::Real;

/// Coefficients of the four photon moments in the energy transfer of an
/// ideal PBS membrane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPrefactors<T> {
    pub alpha: T,
    pub beta: T,
    pub eta: T,
    pub mu: T,
}

impl<T: Real> EnergyPrefactors<T> {
    pub fn new(p: &SystemParams<T>) -> Result<Self> {
        check_resonance(p.lambda_v, p.omega_m)?;
        let (h, m, w, l) = (p.hbar, p.mass, p.omega_m, p.lambda_v);
        let (w2, l2) = (w * w, l * l);
        let d2 = (l2 - w2) * (l2 - w2);
        let four = T::lit(4.0);
        let three = T::lit(3.0);
        Ok(Self {
            alpha: h * h * p.g_h * p.g_h / (m * w2),
            beta: h * h * p.g_h * p.g_v / (m * (w2 - l2)),
            eta: h * h * p.g_v * p.g_v * (l2 + three * w2) / (four * m * d2),
            mu: h * h * p.g_v * p.g_v * (three * l2 + w2) / (four * m * d2),
        })
    }

    pub fn contract(&self, m: &InitialMoments<T>) -> T {
        self.alpha * m.sec_dnh + self.beta * m.cross_dnh_dnv + self.eta * m.sec_dnv + self.mu * m.sec_dkv
    }
}

/// `ΔH̄_M = α⟨ΔN_H²⟩ + β⟨ΔN_H ΔN_V⟩ + η⟨ΔN_V²⟩ + μ⟨ΔK_V²⟩` for the ideal
/// PBS (`λ_H = 0`), relative to the membrane's initial energy.
pub fn energy_transfer<T: Real>(m: &InitialMoments<T>, p: &SystemParams<T>) -> Result<T> {
    Ok(EnergyPrefactors::new(p)?.contract(m))
}

/// Energy transfer for a polarisation-dependent beamsplitter with both
/// `λ_H` and `λ_V` non-zero.
///
/// The membrane energy `m ω_M² X²/2 + P²/2m` is a quadratic form in the
/// initial operators; its cycle average contracts
/// `m(ω_M² ⟨c_i c_j⟩ + ⟨ċ_i ċ_j⟩)/2` with the symmetrised second moments.
/// The free membrane contribution equals `⟨H_M(0)⟩` and is dropped.
pub fn energy_transfer_general<T: Real>(m: &InitialMoments<T>, p: &SystemParams<T>) -> Result<T> {
    let r = LinearResponse::new(p, p.lambda_h)?;
    let v = r.velocity();
    let s = second_moments(m);
    let w2 = p.omega_m * p.omega_m;
    let mut acc = T::zero();
    for i in 0..N_OPS {
        for j in 0..N_OPS {
            if i >= X0 || j >= X0 || s[i][j] == T::zero() {
                continue;
            }
            let k = w2 * r.coeffs[i].mean_product(&r.coeffs[j]) + v[i].mean_product(&v[j]);
            acc = acc + s[i][j] * k;
        }
    }
    debug_assert!(P0 == N_OPS - 1);
    Ok(T::lit(0.5) * p.mass * acc)
}

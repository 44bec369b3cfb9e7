//! Expectation values on number-basis vectors.

use num_complex::Complex;

use super::basis::FockBasis;
use super::ensemble::EnsembleState;
use super::hamiltonian::{hop_right_to_left, Polarisation};
use crate::params::SystemParams;
use crate::scalar::Real;

/// Ensemble expectations at one instant. `h_m` is `ħω_M⟨M†M⟩`, the membrane
/// energy above its ground state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Observables<T> {
    pub x: T,
    pub x2: T,
    pub h_m: T,
    pub dnv: T,
    pub dnh: T,
    pub dkv: T,
}

impl<T: Real> Observables<T> {
    pub(crate) fn accumulate(&mut self, o: &Observables<T>, w: T) {
        self.x = self.x + w * o.x;
        self.x2 = self.x2 + w * o.x2;
        self.h_m = self.h_m + w * o.h_m;
        self.dnv = self.dnv + w * o.dnv;
        self.dnh = self.dnh + w * o.dnh;
        self.dkv = self.dkv + w * o.dkv;
    }

    pub(crate) fn scaled(&self, s: T) -> Self {
        Self {
            x: self.x * s,
            x2: self.x2 * s,
            h_m: self.h_m * s,
            dnv: self.dnv * s,
            dnh: self.dnh * s,
            dkv: self.dkv * s,
        }
    }
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(zero(), |s, (x, y)| s + x.conj() * y)
}

pub(crate) fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `(M + M†) ψ` on the truncated membrane space.
pub(crate) fn apply_quadrature<T: Real>(basis: &FockBasis, psi: &[Complex<T>], momentum: bool) -> Vec<Complex<T>> {
    let d = basis.d_m();
    let mut out = vec![zero(); psi.len()];
    for block in 0..psi.len() / d {
        let base = block * d;
        for n in 0..d {
            let v = psi[base + n];
            if n + 1 < d {
                // M† |n⟩ = √(n+1) |n+1⟩
                let a = T::lit(((n + 1) as f64).sqrt());
                out[base + n + 1] = out[base + n + 1]
                    + if momentum {
                        v * Complex::new(T::zero(), a)
                    } else {
                        v * a
                    };
            }
            if n > 0 {
                let a = T::lit((n as f64).sqrt());
                out[base + n - 1] = out[base + n - 1]
                    + if momentum {
                        v * Complex::new(T::zero(), -a)
                    } else {
                        v * a
                    };
            }
        }
    }
    out
}

/// `ΔK_p ψ` with `ΔK_p = i(L_p†R_p − R_p†L_p)`. Components leaving the
/// basis are dropped, so the basis must allow the hop.
pub(crate) fn apply_current<T: Real>(basis: &FockBasis, psi: &[Complex<T>], pol: Polarisation) -> Vec<Complex<T>> {
    let mut out = vec![zero(); psi.len()];
    for (j, o) in basis.occupations().iter().enumerate() {
        if psi[j] == zero() {
            continue;
        }
        if let Some((t, a)) = hop_right_to_left(o, pol) {
            if let Some(i) = basis.index(&t) {
                out[i] = out[i] + psi[j] * Complex::new(T::zero(), T::lit(a));
            }
        }
        if let Some((t, a)) = super::hamiltonian::hop_left_to_right(o, pol) {
            if let Some(i) = basis.index(&t) {
                out[i] = out[i] + psi[j] * Complex::new(T::zero(), -T::lit(a));
            }
        }
    }
    out
}

/// Observables of one (not renormalised) vector.
pub fn vector_observables<T: Real>(psi: &[Complex<T>], basis: &FockBasis, p: &SystemParams<T>) -> Observables<T> {
    let x_zpf = p.x_zpf();
    let mut obs = Observables::default();
    for (j, o) in basis.occupations().iter().enumerate() {
        let w = psi[j].norm_sqr();
        if w == T::zero() {
            continue;
        }
        obs.dnv = obs.dnv + w * T::lit(o.delta_nv() as f64);
        obs.dnh = obs.dnh + w * T::lit(o.delta_nh() as f64);
        obs.h_m = obs.h_m + w * T::from_u32(o.n_m).unwrap();
    }
    obs.h_m = obs.h_m * p.hbar * p.omega_m;
    let q = apply_quadrature(basis, psi, false);
    obs.x = dot(psi, &q).re * x_zpf;
    obs.x2 = norm_sqr(&q) * x_zpf * x_zpf;
    // photon hops stay inside the V sector, so ΔK_V is always representable
    obs.dkv = dot(psi, &apply_current(basis, psi, Polarisation::V)).re;
    obs
}

/// Weighted ensemble average, normalised by the retained weight.
pub fn observables<T: Real>(state: &EnsembleState<T>, p: &SystemParams<T>) -> Observables<T> {
    let mut acc = Observables::default();
    for m in &state.members {
        acc.accumulate(&vector_observables(&m.state, state.basis(&m.sector), p), m.weight);
    }
    acc.scaled(T::one() / state.total_weight())
}

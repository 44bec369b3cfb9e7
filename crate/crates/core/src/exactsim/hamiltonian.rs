//! Full Hamiltonian restricted to one sector:
//! `H = ħω(N_V + N_H) + ħω_M M†M + Σ_p ħλ_p/2 (R_p†L_p + L_p†R_p) − F X_M`
//! with `F = ħ g_H ΔN_H + ħ g_V ΔN_V` and `X_M = x_zpf (M + M†)`.

use num_complex::Complex;

use super::basis::{FockBasis, Occupation};
use super::sparse::SparseOperator;
use crate::error::Result;
use crate::params::SystemParams;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Polarisation {
    V,
    H,
}

/// Target and amplitude of `R_p† L_p` acting on `o` (one photon moves from
/// left to right).
pub(crate) fn hop_left_to_right(o: &Occupation, p: Polarisation) -> Option<(Occupation, f64)> {
    let mut t = *o;
    let amp = match p {
        Polarisation::V if o.n_lv > 0 => {
            t.n_lv -= 1;
            t.n_rv += 1;
            ((o.n_lv as f64) * (o.n_rv as f64 + 1.0)).sqrt()
        }
        Polarisation::H if o.n_lh > 0 => {
            t.n_lh -= 1;
            t.n_rh += 1;
            ((o.n_lh as f64) * (o.n_rh as f64 + 1.0)).sqrt()
        }
        _ => return None,
    };
    Some((t, amp))
}

/// Target and amplitude of `L_p† R_p` acting on `o`.
pub(crate) fn hop_right_to_left(o: &Occupation, p: Polarisation) -> Option<(Occupation, f64)> {
    let mut t = *o;
    let amp = match p {
        Polarisation::V if o.n_rv > 0 => {
            t.n_rv -= 1;
            t.n_lv += 1;
            ((o.n_rv as f64) * (o.n_lv as f64 + 1.0)).sqrt()
        }
        Polarisation::H if o.n_rh > 0 => {
            t.n_rh -= 1;
            t.n_lh += 1;
            ((o.n_rh as f64) * (o.n_lh as f64 + 1.0)).sqrt()
        }
        _ => return None,
    };
    Some((t, amp))
}

pub fn build_hamiltonian<T: Real>(p: &SystemParams<T>, basis: &FockBasis) -> Result<SparseOperator<T>> {
    if p.lambda_h != T::zero() && basis.sector().n_lh.is_some() {
        return Err(crate::Error::param(
            "lambda_h",
            "H tunnelling requires a basis that does not fix the left H count",
        ));
    }
    let dim = basis.dimension();
    let x_zpf = p.x_zpf();
    let s = basis.sector();
    let optical = p.hbar * p.omega * T::from_u32(s.n_v + s.n_h).unwrap();
    let half = T::lit(0.5);
    let z = |re: T| Complex::new(re, T::zero());
    let mut trip = Vec::with_capacity(dim * 6);
    for (j, o) in basis.occupations().iter().enumerate() {
        trip.push((j, j, z(optical + p.hbar * p.omega_m * T::from_u32(o.n_m).unwrap())));
        for (pol, lambda) in [(Polarisation::V, p.lambda_v), (Polarisation::H, p.lambda_h)] {
            if lambda == T::zero() {
                continue;
            }
            for hop in [hop_left_to_right(o, pol), hop_right_to_left(o, pol)]
                .into_iter()
                .flatten()
            {
                if let Some(i) = basis.index(&hop.0) {
                    trip.push((i, j, z(half * p.hbar * lambda * T::lit(hop.1))));
                }
            }
        }
        let force = p.hbar * (p.g_h * T::lit(o.delta_nh() as f64) + p.g_v * T::lit(o.delta_nv() as f64));
        if force != T::zero() {
            let mut up = *o;
            up.n_m += 1;
            if let Some(i) = basis.index(&up) {
                let amp = -force * x_zpf * T::lit((o.n_m as f64 + 1.0).sqrt());
                trip.push((i, j, z(amp)));
                trip.push((j, i, z(amp)));
            }
        }
    }
    SparseOperator::from_triplets(dim, trip)
}

//! Initial states as weighted mixtures of pure number-basis vectors.
//!
//! Thermal gases and membranes are diagonal in the number basis, so the
//! initial density matrix is a mixture of product states
//! `|ψ_L^{n_L}(θ_L)⟩ ⊗ |ψ_R^{n_R}(θ_R)⟩ ⊗ |m₀⟩`. Each product state is split
//! further into its conserved-charge sectors; every observable of interest
//! is block diagonal, so the sector pieces can be evolved independently.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::basis::{FockBasis, Occupation, Sector};
use crate::error::{Error, Result};
use crate::gas::{boltzmann_ratio, GasKind, GasSpec, MembraneSpec};
use crate::params::SystemParams;
use crate::scalar::{binomial, Real};

/// Components lighter than this are dropped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-28;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Probability mass allowed to be discarded.
    pub delta: f64,
    /// Membrane Fock-space dimension.
    pub d_m: usize,
    pub max_photons: u32,
    pub max_members: usize,
    pub dimension_cap: usize,
    /// Keep sectors coarse even when `λ_H = 0`.
    pub coarse: bool,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            d_m: 16,
            max_photons: 64,
            max_members: 200_000,
            dimension_cap: super::basis::DEFAULT_DIMENSION_CAP,
            coarse: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember<T> {
    pub weight: T,
    pub sector: Sector,
    pub state: Vec<Complex<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState<T> {
    pub members: Vec<EnsembleMember<T>>,
    pub bases: BTreeMap<Sector, FockBasis>,
}

impl<T: Real> EnsembleState<T> {
    pub fn total_weight(&self) -> T {
        self.members.iter().map(|m| m.weight).sum()
    }

    pub fn basis(&self, sector: &Sector) -> &FockBasis {
        &self.bases[sector]
    }

    pub fn max_dimension(&self) -> usize {
        self.bases.values().map(FockBasis::dimension).max().unwrap_or(0)
    }
}

/// Marginal distribution `(n, p_n)` in decreasing order of `p_n`.
fn geometric_marginal(ratio: f64, limit: usize, delta: f64) -> Vec<(u32, f64)> {
    if ratio <= 0.0 {
        return vec![(0, 1.0)];
    }
    let mut out = Vec::new();
    let mut cumulative = 0.0;
    for n in 0..limit {
        let p = (1.0 - ratio) * ratio.powi(n as i32);
        out.push((n as u32, p));
        cumulative += p;
        if cumulative >= 1.0 - delta * 1e-3 {
            break;
        }
    }
    out
}

fn photon_marginal<T: Real>(gas: &GasSpec<T>, p: &SystemParams<T>, cfg: &TruncationConfig) -> Vec<(u32, f64)> {
    match gas.kind {
        GasKind::Fock { n } => vec![(n, 1.0)],
        GasKind::Thermal { temperature } => {
            let ratio = boltzmann_ratio(p.hbar * p.omega, p.k_b * temperature).to_f64_lossy();
            geometric_marginal(ratio, cfg.max_photons as usize + 1, cfg.delta)
        }
    }
}

fn membrane_marginal<T: Real>(m: &MembraneSpec<T>, p: &SystemParams<T>, cfg: &TruncationConfig) -> Vec<(u32, f64)> {
    let ratio = boltzmann_ratio(p.hbar * p.omega_m, p.k_b * m.temperature).to_f64_lossy();
    geometric_marginal(ratio, cfg.d_m, cfg.delta)
}

/// `(k, amplitude)` for `k` H photons out of `n` at polarisation angle θ.
fn polarisation_amplitudes(n: u32, theta: f64) -> Vec<(u32, f64)> {
    let (c, s) = (theta.cos(), theta.sin());
    (0..=n)
        .map(|k| {
            (
                k,
                (binomial(n, k) as f64).sqrt() * c.powi((n - k) as i32) * s.powi(k as i32),
            )
        })
        .collect()
}

/// Builds the truncated initial ensemble.
pub fn initial_state<T: Real>(
    left: &GasSpec<T>,
    right: &GasSpec<T>,
    membrane: &MembraneSpec<T>,
    params: &SystemParams<T>,
    cfg: &TruncationConfig,
) -> Result<EnsembleState<T>> {
    left.validate()?;
    right.validate()?;
    membrane.validate()?;
    let fine = params.lambda_h == T::zero() && !cfg.coarse;
    let ml = photon_marginal(left, params, cfg);
    let mr = photon_marginal(right, params, cfg);
    let mm = membrane_marginal(membrane, params, cfg);
    let combos = ml.len() * mr.len() * mm.len();
    if combos > cfg.max_members.saturating_mul(16) {
        return Err(Error::Truncation(format!(
            "{combos} candidate product states exceed the member cap {}",
            cfg.max_members
        )));
    }
    let mut joint = Vec::with_capacity(combos);
    for &(nl, pl) in &ml {
        for &(nr, pr) in &mr {
            for &(m0, pm) in &mm {
                joint.push((pl * pr * pm, nl, nr, m0));
            }
        }
    }
    joint.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2, a.3).cmp(&(b.1, b.2, b.3))));
    let mut kept = Vec::new();
    let mut cumulative = 0.0;
    for entry in joint {
        if cumulative >= 1.0 - cfg.delta {
            break;
        }
        cumulative += entry.0;
        kept.push(entry);
    }
    if cumulative < 1.0 - cfg.delta {
        return Err(Error::Truncation(format!(
            "retained probability {cumulative:.3e} short of 1 − {:e}; raise max_photons or d_m",
            cfg.delta
        )));
    }
    if kept.len() > cfg.max_members {
        return Err(Error::Truncation(format!(
            "{} product states needed, cap is {}",
            kept.len(),
            cfg.max_members
        )));
    }

    let (tl, tr) = (left.theta.to_f64_lossy(), right.theta.to_f64_lossy());
    let mut bases = BTreeMap::new();
    let mut members = Vec::new();
    for (w, nl, nr, m0) in kept {
        let mut pieces: BTreeMap<Sector, Vec<(Occupation, f64)>> = BTreeMap::new();
        for (kl, al) in polarisation_amplitudes(nl, tl) {
            for (kr, ar) in polarisation_amplitudes(nr, tr) {
                let amp = al * ar;
                if amp * amp < NEGLIGIBLE_WEIGHT {
                    continue;
                }
                let (n_v, n_h) = (nl - kl + nr - kr, kl + kr);
                let sector = if fine {
                    Sector::fine(n_v, n_h, kl)
                } else {
                    Sector::coarse(n_v, n_h)
                };
                let occ = Occupation {
                    n_lv: nl - kl,
                    n_rv: nr - kr,
                    n_lh: kl,
                    n_rh: kr,
                    n_m: m0,
                };
                pieces.entry(sector).or_default().push((occ, amp));
            }
        }
        for (sector, amps) in pieces {
            let sub: f64 = amps.iter().map(|(_, a)| a * a).sum();
            if w * sub < NEGLIGIBLE_WEIGHT {
                continue;
            }
            if !bases.contains_key(&sector) {
                bases.insert(sector, FockBasis::new(sector, cfg.d_m, cfg.dimension_cap)?);
            }
            let basis = &bases[&sector];
            let mut state = vec![Complex::new(T::zero(), T::zero()); basis.dimension()];
            let inv = 1.0 / sub.sqrt();
            for (occ, a) in amps {
                let i = basis
                    .index(&occ)
                    .ok_or_else(|| Error::Truncation("occupation outside its sector".into()))?;
                state[i] = Complex::new(T::lit(a * inv), T::zero());
            }
            members.push(EnsembleMember {
                weight: T::lit(w * sub),
                sector,
                state,
            });
        }
    }
    log::debug!(
        "initial ensemble: {} members in {} sectors, retained weight {:.9}",
        members.len(),
        bases.len(),
        cumulative
    );
    Ok(EnsembleState { members, bases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn params() -> SystemParams<f64> {
        SystemParams::fig3()
    }

    fn single(e: &EnsembleState<f64>) -> (&EnsembleMember<f64>, &FockBasis) {
        assert_eq!(e.members.len(), 1);
        let m = &e.members[0];
        (m, e.basis(&m.sector))
    }

    #[test]
    fn single_h_photon() {
        let cfg = TruncationConfig::default();
        let e = initial_state(
            &GasSpec::vacuum(),
            &GasSpec::fock(1, FRAC_PI_2),
            &MembraneSpec::ground(),
            &params(),
            &cfg,
        )
        .unwrap();
        let (m, b) = single(&e);
        let i = b
            .index(&Occupation {
                n_lv: 0,
                n_rv: 0,
                n_lh: 0,
                n_rh: 1,
                n_m: 0,
            })
            .unwrap();
        assert_abs_diff_eq!(m.state[i].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.weight, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_photon_splits_into_sectors() {
        let cfg = TruncationConfig {
            coarse: true,
            ..Default::default()
        };
        let mut p = params();
        p.lambda_h = 0.5;
        let e = initial_state(
            &GasSpec::vacuum(),
            &GasSpec::fock(1, FRAC_PI_4),
            &MembraneSpec::ground(),
            &p,
            &cfg,
        )
        .unwrap();
        assert_eq!(e.members.len(), 2);
        for m in &e.members {
            assert_abs_diff_eq!(m.weight, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn two_photon_amplitudes() {
        let theta: f64 = 0.7;
        let amps = polarisation_amplitudes(2, theta);
        assert_abs_diff_eq!(amps[1].1, 2f64.sqrt() * theta.cos() * theta.sin(), epsilon = 1e-15);
        let total: f64 = amps.iter().map(|(_, a)| a * a).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-15);
        // coarse: one (N_V, N_H) sector per H count, amplitudes keep their ratio
        let cfg = TruncationConfig {
            coarse: true,
            ..Default::default()
        };
        let e = initial_state(
            &GasSpec::fock(1, 0.0),
            &GasSpec::fock(2, theta),
            &MembraneSpec::ground(),
            &params(),
            &cfg,
        )
        .unwrap();
        assert_eq!(e.members.len(), 3);
        let w: f64 = e.total_weight();
        assert_abs_diff_eq!(w, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn thermal_truncation_is_deterministic_and_complete() {
        let cfg = TruncationConfig {
            d_m: 24,
            ..Default::default()
        };
        let gas = GasSpec::thermal(1.0, 0.0);
        let right = GasSpec::thermal(1.0, 1.1);
        let e = initial_state(&gas, &right, &MembraneSpec::thermal(0.5), &params(), &cfg).unwrap();
        let w = e.total_weight();
        assert!(w >= 1.0 - 1e-6 && w <= 1.0 + 1e-12);
        for m in &e.members {
            assert!(m.weight >= 0.0);
            let norm: f64 = m.state.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
        }
        let again = initial_state(&gas, &right, &MembraneSpec::thermal(0.5), &params(), &cfg).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn infeasible_truncation_is_reported() {
        let cfg = TruncationConfig {
            d_m: 4,
            ..Default::default()
        };
        let r = initial_state(
            &GasSpec::vacuum(),
            &GasSpec::vacuum(),
            &MembraneSpec::thermal(5.0),
            &params(),
            &cfg,
        );
        assert!(matches!(r, Err(Error::Truncation(_))));
    }
}

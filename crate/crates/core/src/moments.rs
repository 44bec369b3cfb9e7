//! Initial first and second moments of the photon-imbalance observables and
//! membrane quadratures. These are the only state data the closed forms in
//! [`crate::analytic`] consume.
//!
//! Sign convention: `ΔN_p = N_Rp − N_Lp` and `ΔK_p = i(L_p†R_p − R_p†L_p)`,
//! so an excess of photons on the right pushes the membrane to positive
//! `X_M` and `dΔN_V/dt = λ ΔK_V` for the bare beamsplitter.

use crate::error::Result;
use crate::gas::{mean_photon_number, second_moment_photon_number, GasSpec, MembraneSpec};
use crate::params::SystemParams;
use crate::scalar::{Field, Real};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InitialMoments<T> {
    pub mean_dnh: T,
    pub mean_dnv: T,
    pub mean_dkv: T,
    pub mean_dkh: T,
    pub sec_dnh: T,
    pub sec_dnv: T,
    pub sec_dkv: T,
    pub sec_dkh: T,
    /// `⟨ΔN_H ΔN_V⟩` (the two commute).
    pub cross_dnh_dnv: T,
    /// `⟨ΔK_H ΔK_V⟩` (the two commute).
    pub cross_dkh_dkv: T,
    pub mean_n_left: T,
    pub mean_n_right: T,
    pub sec_n_left: T,
    pub sec_n_right: T,
    pub var_x0: T,
    pub var_p0: T,
}

impl<T: Real> InitialMoments<T> {
    /// Photon number per gas, averaged over the two gases.
    pub fn mean_n(&self) -> T {
        (self.mean_n_left + self.mean_n_right) / T::lit(2.0)
    }

    pub fn sec_n(&self) -> T {
        (self.sec_n_left + self.sec_n_right) / T::lit(2.0)
    }

    pub fn var_dnh(&self) -> T {
        self.sec_dnh - self.mean_dnh * self.mean_dnh
    }

    pub fn var_dnv(&self) -> T {
        self.sec_dnv - self.mean_dnv * self.mean_dnv
    }

    pub fn var_dkv(&self) -> T {
        self.sec_dkv - self.mean_dkv * self.mean_dkv
    }

    pub fn var_dkh(&self) -> T {
        self.sec_dkh - self.mean_dkh * self.mean_dkh
    }

    pub fn cov_dnh_dnv(&self) -> T {
        self.cross_dnh_dnv - self.mean_dnh * self.mean_dnv
    }

    pub fn cov_dkh_dkv(&self) -> T {
        self.cross_dkh_dkv - self.mean_dkh * self.mean_dkv
    }
}

/// Number statistics of one gas: `⟨N⟩`, `⟨N²⟩` and the H fraction `sin²θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GasNumberStats<Q> {
    pub mean_n: Q,
    pub sec_n: Q,
    pub sin2: Q,
}

/// Number-basis moments of the pair of gases. All of these are
/// polynomials in `⟨N⟩`, `⟨N²⟩`, `sin²θ`, so they are exact in any field.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberMoments<Q> {
    pub mean_dnh: Q,
    pub mean_dnv: Q,
    pub sec_dnh: Q,
    pub sec_dnv: Q,
    pub sec_dkv: Q,
    pub sec_dkh: Q,
    pub cross_dnh_dnv: Q,
}

struct PolarizedCounts<Q> {
    nh: Q,
    nv: Q,
    nh2: Q,
    nv2: Q,
    nhnv: Q,
}

/// Given the total count of a gas, its H count is binomial with success
/// probability `sin²θ`.
fn polarized_counts<Q: Field>(g: &GasNumberStats<Q>) -> PolarizedCounts<Q> {
    let s2 = g.sin2.clone();
    let c2 = Q::one() - s2.clone();
    let binom_var = g.mean_n.clone() * s2.clone() * c2.clone();
    PolarizedCounts {
        nh: g.mean_n.clone() * s2.clone(),
        nv: g.mean_n.clone() * c2.clone(),
        nh2: g.sec_n.clone() * s2.clone() * s2.clone() + binom_var.clone(),
        nv2: g.sec_n.clone() * c2.clone() * c2.clone() + binom_var,
        nhnv: s2 * c2 * (g.sec_n.clone() - g.mean_n.clone()),
    }
}

/// Closed-form number moments for independent left and right gases.
///
/// `⟨ΔK_p²⟩` keeps only `N_Lp(N_Rp+1) + N_Rp(N_Lp+1)`; the two-photon
/// hopping part has zero mean because each gas has a definite (or
/// diagonally mixed) total photon number.
pub fn number_moments<Q: Field>(left: &GasNumberStats<Q>, right: &GasNumberStats<Q>) -> NumberMoments<Q> {
    let l = polarized_counts(left);
    let r = polarized_counts(right);
    let two = Q::one() + Q::one();
    NumberMoments {
        mean_dnh: r.nh.clone() - l.nh.clone(),
        mean_dnv: r.nv.clone() - l.nv.clone(),
        sec_dnh: r.nh2.clone() + l.nh2.clone() - two.clone() * r.nh.clone() * l.nh.clone(),
        sec_dnv: r.nv2.clone() + l.nv2.clone() - two.clone() * r.nv.clone() * l.nv.clone(),
        sec_dkv: two.clone() * l.nv.clone() * r.nv.clone() + l.nv.clone() + r.nv.clone(),
        sec_dkh: two * l.nh.clone() * r.nh.clone() + l.nh.clone() + r.nh.clone(),
        cross_dnh_dnv: r.nhnv + l.nhnv - r.nh * l.nv - l.nh * r.nv,
    }
}

/// Initial moments for left gas ⊗ right gas ⊗ thermal membrane.
pub fn initial_moments<T: Real>(
    left: &GasSpec<T>,
    right: &GasSpec<T>,
    membrane: &MembraneSpec<T>,
    params: &SystemParams<T>,
) -> Result<InitialMoments<T>> {
    left.validate()?;
    right.validate()?;
    membrane.validate()?;
    let stats = |g: &GasSpec<T>| GasNumberStats {
        mean_n: mean_photon_number(g, params),
        sec_n: second_moment_photon_number(g, params),
        sin2: g.h_fraction(),
    };
    let (ls, rs) = (stats(left), stats(right));
    let nm = number_moments(&ls, &rs);

    // ⟨ΔK_H ΔK_V⟩ = 2 Re⟨L_H†L_V⟩⟨R_V†R_H⟩, with ⟨C_H†C_V⟩ = ⟨N⟩ sinθ cosθ.
    let coherence = |g: &GasSpec<T>, n: T| n * g.theta.sin() * g.theta.cos();
    let cross_dkh_dkv = T::lit(2.0) * coherence(left, ls.mean_n) * coherence(right, rs.mean_n);

    let nbar = membrane.mean_occupation(params);
    let spread = T::lit(2.0) * nbar + T::one();
    let x_zpf = params.x_zpf();
    let p_zpf = params.hbar / (T::lit(2.0) * x_zpf);

    Ok(InitialMoments {
        mean_dnh: nm.mean_dnh,
        mean_dnv: nm.mean_dnv,
        mean_dkv: T::zero(),
        mean_dkh: T::zero(),
        sec_dnh: nm.sec_dnh,
        sec_dnv: nm.sec_dnv,
        sec_dkv: nm.sec_dkv,
        sec_dkh: nm.sec_dkh,
        cross_dnh_dnv: nm.cross_dnh_dnv,
        cross_dkh_dkv,
        mean_n_left: ls.mean_n,
        mean_n_right: rs.mean_n,
        sec_n_left: ls.sec_n,
        sec_n_right: rs.sec_n,
        var_x0: x_zpf * x_zpf * spread,
        var_p0: p_zpf * p_zpf * spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn p() -> SystemParams<f64> {
        SystemParams::fig3()
    }

    fn fock_moments(gas_n: u32, theta: f64) -> InitialMoments<f64> {
        initial_moments(
            &GasSpec::fock(gas_n, 0.0),
            &GasSpec::fock(gas_n, theta),
            &MembraneSpec::ground(),
            &p(),
        )
        .unwrap()
    }

    #[test]
    fn indistinguishable_single_photons() {
        let m = fock_moments(1, 0.0);
        assert_eq!(m.mean_dnh, 0.0);
        assert_eq!(m.sec_dnh, 0.0);
        assert_eq!(m.mean_dkv, 0.0);
        // both photons V, one per side: 2·1·1 + 1 + 1
        assert_abs_diff_eq!(m.sec_dkv, 4.0, epsilon = 1e-15);
    }

    #[test]
    fn distinguishable_single_photons() {
        let m = fock_moments(1, FRAC_PI_2);
        assert_abs_diff_eq!(m.mean_dnh, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mean_dnv, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn bernoulli_second_moment_at_quarter_pi() {
        let m = fock_moments(1, FRAC_PI_4);
        assert_abs_diff_eq!(m.sec_dnh, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn covariance_structure_is_valid() {
        for n in 0..6 {
            for k in 0..=20 {
                let m = fock_moments(n, FRAC_PI_2 * k as f64 / 20.0);
                assert!(m.var_dnh() >= -1e-12);
                assert!(m.var_dnv() >= -1e-12);
                assert!(m.var_dkv() >= -1e-12);
                assert!(m.mean_dnh >= 0.0);
            }
        }
    }

    #[test]
    fn membrane_quadratures() {
        let params = p();
        let m = initial_moments(
            &GasSpec::vacuum(),
            &GasSpec::vacuum(),
            &MembraneSpec::thermal(1.0),
            &params,
        )
        .unwrap();
        let nbar = 1.0 / (std::f64::consts::E - 1.0);
        assert_abs_diff_eq!(m.var_x0, 0.5 * (2.0 * nbar + 1.0), epsilon = 1e-14);
        assert_abs_diff_eq!(m.var_p0, 0.5 * (2.0 * nbar + 1.0), epsilon = 1e-14);
        assert_eq!(m.sec_dkv, 0.0);
    }

    #[test]
    fn rejects_negative_temperature() {
        let r = initial_moments(
            &GasSpec::thermal(-1.0, 0.0),
            &GasSpec::thermal(1.0, 0.2),
            &MembraneSpec::ground(),
            &p(),
        );
        assert!(r.is_err());
        let r = initial_moments(
            &GasSpec::fock(1, 0.0),
            &GasSpec::fock(1, 0.2),
            &MembraneSpec::thermal(-0.5),
            &p(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn monotone_in_theta() {
        let params = p();
        for gas in [GasSpec::fock(1, 0.0), GasSpec::fock(7, 0.0), GasSpec::thermal(3.0, 0.0)] {
            let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for k in 0..50 {
                let theta = FRAC_PI_2 * k as f64 / 49.0;
                let right = GasSpec { theta, ..gas };
                let m = initial_moments(&gas, &right, &MembraneSpec::ground(), &params).unwrap();
                assert!(m.mean_dnh >= prev.0 - 1e-14);
                assert!(m.sec_dnh >= prev.1 - 1e-14);
                prev = (m.mean_dnh, m.sec_dnh);
            }
        }
    }
}

//! Time-step propagators for `i ħ dψ/dt = H ψ` with time-independent `H`.

use num_complex::Complex;

use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropagatorKind {
    /// Chebyshev expansion of `exp(−iHτ/ħ)`, accurate to round-off.
    #[default]
    Chebyshev,
    /// Classical fourth-order Runge–Kutta with substeps of at most
    /// `2π/(64 ω_max)`.
    Rk4,
}

/// Bessel functions `J_0(x) … J_n(x)` for `x ≥ 0` by Miller's downward
/// recurrence normalised with `J_0 + 2ΣJ_2k = 1`.
pub fn bessel_j_sequence<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = vec![T::zero(); n + 1];
    if x == T::zero() {
        out[0] = T::one();
        return out;
    }
    let xf = x.to_f64_lossy();
    let mut start = n.max(xf.ceil() as usize) + 20 + (xf.sqrt() * 6.0) as usize;
    start += start % 2;
    let big = T::max_value().sqrt();
    let two = T::lit(2.0);
    let (mut jp1, mut j) = (T::zero(), T::min_positive_value().sqrt());
    let mut norm = T::zero();
    for k in (0..=start).rev() {
        if k <= n {
            out[k] = j;
        }
        if k % 2 == 0 {
            norm = norm + if k == 0 { j } else { two * j };
        }
        if k == 0 {
            break;
        }
        let jm1 = two * T::from_usize(k).unwrap() / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > big {
            let s = T::one() / big;
            j = j * s;
            jp1 = jp1 * s;
            norm = norm * s;
            for v in out.iter_mut() {
                *v = *v * s;
            }
        }
    }
    for v in out.iter_mut() {
        *v = *v / norm;
    }
    out
}

/// Propagator for one Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator<'a, T> {
    h: &'a SparseOperator<T>,
    hbar: T,
    kind: PropagatorKind,
    centre: T,
    radius: T,
    rk4_max_step: T,
}

const MAX_CHEBYSHEV_ARGUMENT: f64 = 40.0;

impl<'a, T: Real> Propagator<'a, T> {
    /// `omega_max` is the fastest physical frequency, used for the RK4 step
    /// rule.
    pub fn new(h: &'a SparseOperator<T>, hbar: T, omega_max: T, kind: PropagatorKind) -> Self {
        let (lo, hi) = h.gershgorin_bounds();
        let centre = (hi + lo) / T::lit(2.0);
        let radius = (hi - lo) / T::lit(2.0) * T::lit(1.01) + T::lit(1e-12) * (T::one() + centre.abs());
        Self {
            h,
            hbar,
            kind,
            centre,
            radius,
            rk4_max_step: T::lit(2.0) * T::PI() / (T::lit(64.0) * omega_max),
        }
    }

    /// Advances `psi` by `tau` in place. `time` is only used to label
    /// failures.
    pub fn step(&self, psi: &mut Vec<Complex<T>>, tau: T, time: T) -> Result<()> {
        match self.kind {
            PropagatorKind::Chebyshev => {
                let arg = (self.radius * tau / self.hbar).to_f64_lossy();
                let pieces = (arg / MAX_CHEBYSHEV_ARGUMENT).ceil().max(1.0) as usize;
                let sub = tau / T::from_usize(pieces).unwrap();
                for _ in 0..pieces {
                    self.chebyshev(psi, sub);
                }
            }
            PropagatorKind::Rk4 => {
                let n = (tau / self.rk4_max_step).to_f64_lossy().ceil().max(1.0) as usize;
                let h = tau / T::from_usize(n).unwrap();
                for _ in 0..n {
                    self.rk4(psi, h);
                }
            }
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Integration {
                time: time.to_f64_lossy(),
                reason: "state vector became non-finite".into(),
            });
        }
        Ok(())
    }

    fn chebyshev(&self, psi: &mut Vec<Complex<T>>, tau: T) {
        let dim = psi.len();
        let zero = Complex::new(T::zero(), T::zero());
        let x = self.radius * tau / self.hbar;
        let xf = x.to_f64_lossy();
        let kmax = (xf + 10.0 * xf.cbrt() + 25.0).ceil() as usize;
        let j = bessel_j_sequence(kmax, x);
        let eps = T::epsilon() * T::lit(1e-2);
        let terms = (1..=kmax)
            .rev()
            .find(|&k| j[k].abs() > eps && (k as f64) > xf * 0.5)
            .map_or(kmax, |k| (k + 2).min(kmax));
        let inv_r = T::one() / self.radius;
        // φ ↦ (H − c)/r φ
        let scaled = |src: &[Complex<T>], out: &mut [Complex<T>]| {
            self.h.apply_into(src, out);
            for (o, s) in out.iter_mut().zip(src) {
                *o = (*o - *s * self.centre) * inv_r;
            }
        };
        let coeff = |k: usize| {
            let mag = if k == 0 { j[0] } else { T::lit(2.0) * j[k] };
            // (−i)^k
            match k % 4 {
                0 => Complex::new(mag, T::zero()),
                1 => Complex::new(T::zero(), -mag),
                2 => Complex::new(-mag, T::zero()),
                _ => Complex::new(T::zero(), mag),
            }
        };
        let mut prev = psi.clone();
        let mut cur = vec![zero; dim];
        scaled(&prev, &mut cur);
        let mut acc: Vec<Complex<T>> = prev.iter().map(|v| *v * coeff(0)).collect();
        if terms >= 1 {
            let c1 = coeff(1);
            for (a, v) in acc.iter_mut().zip(&cur) {
                *a = *a + *v * c1;
            }
        }
        let mut next = vec![zero; dim];
        let two = T::lit(2.0);
        for k in 2..=terms {
            scaled(&cur, &mut next);
            let ck = coeff(k);
            for i in 0..dim {
                next[i] = next[i] * two - prev[i];
                acc[i] = acc[i] + next[i] * ck;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        let phase = Complex::new(T::zero(), -self.centre * tau / self.hbar).exp();
        for (p, a) in psi.iter_mut().zip(acc) {
            *p = a * phase;
        }
    }

    fn rk4(&self, psi: &mut Vec<Complex<T>>, h: T) {
        let f = |v: &[Complex<T>]| -> Vec<Complex<T>> {
            let minus_i_over_hbar = Complex::new(T::zero(), -T::one() / self.hbar);
            self.h.apply(v).into_iter().map(|z| z * minus_i_over_hbar).collect()
        };
        let add = |a: &[Complex<T>], b: &[Complex<T>], s: T| -> Vec<Complex<T>> {
            a.iter().zip(b).map(|(x, y)| *x + *y * s).collect()
        };
        let half = T::lit(0.5);
        let k1 = f(psi);
        let k2 = f(&add(psi, &k1, half * h));
        let k3 = f(&add(psi, &k2, half * h));
        let k4 = f(&add(psi, &k3, h));
        let sixth = h / T::lit(6.0);
        for i in 0..psi.len() {
            psi[i] = psi[i] + (k1[i] + k2[i] * T::lit(2.0) + k3[i] * T::lit(2.0) + k4[i]) * sixth;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bessel_values() {
        let j = bessel_j_sequence(5, 1.0f64);
        assert_abs_diff_eq!(j[0], 0.7651976865579666, epsilon = 1e-15);
        assert_abs_diff_eq!(j[1], 0.4400505857449335, epsilon = 1e-15);
        assert_abs_diff_eq!(j[5], 2.4975773021123443e-4, epsilon = 1e-17);
        let j = bessel_j_sequence(60, 30.0f64);
        assert_abs_diff_eq!(j[0], -0.086367983581040225, epsilon = 1e-14);
        assert_abs_diff_eq!(j[30], 0.14393585001030677, epsilon = 1e-14);
        let j = bessel_j_sequence(3, 1e-3f64);
        assert_abs_diff_eq!(j[1], 4.99999937500003e-4, epsilon = 1e-15);
        let j32 = bessel_j_sequence(4, 2.0f32);
        assert!((j32[0] - 0.22389078f32).abs() < 1e-6);
    }

    fn two_level(delta: f64, coupling: f64) -> SparseOperator<f64> {
        let c = |x| Complex::new(x, 0.0);
        SparseOperator::from_triplets(
            2,
            vec![
                (0, 0, c(delta)),
                (1, 1, c(-delta)),
                (0, 1, c(coupling)),
                (1, 0, c(coupling)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rabi_oscillation_both_schemes() {
        let h = two_level(0.0, 1.5);
        for kind in [PropagatorKind::Chebyshev, PropagatorKind::Rk4] {
            let prop = Propagator::new(&h, 1.0, 50.0, kind);
            let mut psi = vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
            let t = 0.9;
            prop.step(&mut psi, t, 0.0).unwrap();
            assert_abs_diff_eq!(psi[0].re, (1.5f64 * t).cos(), epsilon = 1e-9);
            assert_abs_diff_eq!(psi[1].im, -(1.5f64 * t).sin(), epsilon = 1e-9);
        }
    }

    #[test]
    fn chebyshev_preserves_norm_over_long_times() {
        let h = two_level(3.0, 0.7);
        let prop = Propagator::new(&h, 1.0, 10.0, PropagatorKind::Chebyshev);
        let mut psi = vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)];
        for k in 0..2000 {
            prop.step(&mut psi, 0.37, k as f64).unwrap();
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-11);
        // a single long step equals many short ones
        let mut a = vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)];
        let mut b = a.clone();
        prop.step(&mut a, 50.0, 0.0).unwrap();
        for _ in 0..100 {
            prop.step(&mut b, 0.5, 0.0).unwrap();
        }
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-11);
        }
    }
}

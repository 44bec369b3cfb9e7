//! Finite trigonometric sums and their exact cycle averages.
//!
//! To first order in the couplings the membrane position is a linear
//! combination of initial-time operators whose coefficients are sums of
//! `cos(νt)` and `sin(νt)`. Averaging a product of two such sums over a
//! common period keeps only matching frequencies, which is what
//! [`Harmonics::mean_product`] evaluates.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Term<T> {
    freq: T,
    cos: T,
    sin: T,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Harmonics<T> {
    terms: Vec<Term<T>>,
}

fn same_freq<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(1e-12) * (T::one() + a.abs().max(b.abs()))
}

impl<T: Real> Harmonics<T> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Adds `c cos(νt) + s sin(νt)`, merging with an existing frequency.
    /// Frequencies are taken as `|ν|` with the sine coefficient flipped.
    pub fn add(&mut self, freq: T, cos: T, sin: T) -> &mut Self {
        let (freq, sin) = if freq < T::zero() { (-freq, -sin) } else { (freq, sin) };
        let sin = if freq == T::zero() { T::zero() } else { sin };
        match self.terms.iter_mut().find(|t| same_freq(t.freq, freq)) {
            Some(t) => {
                t.cos = t.cos + cos;
                t.sin = t.sin + sin;
            }
            None => self.terms.push(Term { freq, cos, sin }),
        }
        self
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    freq: t.freq,
                    cos: t.cos * k,
                    sin: t.sin * k,
                })
                .collect(),
        }
    }

    pub fn eval(&self, t: T) -> T {
        self.terms
            .iter()
            .map(|h| h.cos * (h.freq * t).cos() + h.sin * (h.freq * t).sin())
            .sum()
    }

    pub fn derivative(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|h| Term {
                    freq: h.freq,
                    cos: h.sin * h.freq,
                    sin: -h.cos * h.freq,
                })
                .collect(),
        }
    }

    /// Time average (the zero-frequency component).
    pub fn mean(&self) -> T {
        self.terms
            .iter()
            .filter(|h| h.freq == T::zero() || same_freq(h.freq, T::zero()))
            .map(|h| h.cos)
            .sum()
    }

    /// Cycle average of `self(t) · other(t)` over a common period.
    pub fn mean_product(&self, other: &Self) -> T {
        let half = T::lit(0.5);
        let mut acc = T::zero();
        for a in &self.terms {
            for b in &other.terms {
                if !same_freq(a.freq, b.freq) {
                    continue;
                }
                if same_freq(a.freq, T::zero()) {
                    acc = acc + a.cos * b.cos;
                } else {
                    acc = acc + half * (a.cos * b.cos + a.sin * b.sin);
                }
            }
        }
        acc
    }

    /// Average of `self(t) · other(t)` over the finite window `[0, τ]`,
    /// integrated in closed form.
    pub fn window_mean_product(&self, other: &Self, tau: T) -> T {
        let half = T::lit(0.5);
        let mean_cos = |w: T| {
            let x = w * tau;
            if x.abs() < T::lit(1e-12) {
                T::one()
            } else {
                x.sin() / x
            }
        };
        let mean_sin = |w: T| {
            let x = w * tau;
            if x.abs() < T::lit(1e-12) {
                half * x
            } else {
                (T::one() - x.cos()) / x
            }
        };
        let mut acc = T::zero();
        for a in &self.terms {
            for b in &other.terms {
                let (dm, sp) = (a.freq - b.freq, a.freq + b.freq);
                let cc = half * (mean_cos(dm) + mean_cos(sp));
                let ss = half * (mean_cos(dm) - mean_cos(sp));
                let cs = half * (mean_sin(sp) - mean_sin(dm));
                let sc = half * (mean_sin(sp) + mean_sin(dm));
                acc = acc + a.cos * b.cos * cc + a.sin * b.sin * ss + a.cos * b.sin * cs + a.sin * b.cos * sc;
            }
        }
        acc
    }

    /// Average of `self(t)` over `[0, τ]`.
    pub fn window_mean(&self, tau: T) -> T {
        let mut one = Harmonics::zero();
        one.add(T::zero(), T::one(), T::zero());
        self.window_mean_product(&one, tau)
    }
}

/// Zero-initial-condition response of `ẍ + ω_M² x = cos(νt)`:
/// `(cos νt − cos ω_M t)/(ω_M² − ν²)`; continuous at `ν = 0`.
pub fn cos_drive_response<T: Real>(nu: T, omega_m: T) -> Harmonics<T> {
    let d = omega_m * omega_m - nu * nu;
    let mut h = Harmonics::zero();
    h.add(nu, T::one() / d, T::zero());
    h.add(omega_m, -T::one() / d, T::zero());
    h
}

/// Zero-initial-condition response of `ẍ + ω_M² x = sin(νt)`:
/// `(sin νt − (ν/ω_M) sin ω_M t)/(ω_M² − ν²)`; identically zero at `ν = 0`.
pub fn sin_drive_response<T: Real>(nu: T, omega_m: T) -> Harmonics<T> {
    let d = omega_m * omega_m - nu * nu;
    let mut h = Harmonics::zero();
    h.add(nu, T::zero(), T::one() / d);
    h.add(omega_m, T::zero(), -nu / (omega_m * d));
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    /// Trapezoid average over `periods` common periods of length 2π.
    fn brute_mean<F: Fn(f64) -> f64>(f: F, periods: usize) -> f64 {
        let n = 4096 * periods;
        let tau = 2.0 * PI * periods as f64;
        (0..n).map(|k| f(tau * k as f64 / n as f64)).sum::<f64>() / n as f64
    }

    #[test]
    fn responses_solve_the_oscillator() {
        for nu in [0.0f64, 0.5, 2.0, 3.7] {
            for h in [cos_drive_response(nu, 1.0), sin_drive_response(nu, 1.0)] {
                assert_abs_diff_eq!(h.eval(0.0), 0.0, epsilon = 1e-14);
                assert_abs_diff_eq!(h.derivative().eval(0.0), 0.0, epsilon = 1e-14);
            }
            // finite-difference check of ẍ + x = cos νt
            let h = cos_drive_response(nu, 1.0);
            let dt = 1e-4;
            for t in [0.3, 1.7, 4.2] {
                let xdd = (h.eval(t + dt) - 2.0 * h.eval(t) + h.eval(t - dt)) / (dt * dt);
                assert_abs_diff_eq!(xdd + h.eval(t), (nu * t).cos(), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn mean_product_matches_quadrature() {
        // λ = 2, ω_M = 1: common period 2π
        let a = cos_drive_response(2.0, 1.0);
        let b = sin_drive_response(2.0, 1.0);
        let mut c = cos_drive_response(0.0, 1.0);
        c.add(3.0, 0.2, -0.7);
        for (x, y) in [(&a, &a), (&a, &b), (&b, &b), (&a, &c), (&c, &c), (&b, &c)] {
            let exact = x.mean_product(y);
            let brute = brute_mean(|t| x.eval(t) * y.eval(t), 1);
            assert_abs_diff_eq!(exact, brute, epsilon = 1e-12);
            let dx = x.derivative();
            let dy = y.derivative();
            assert_abs_diff_eq!(
                dx.mean_product(&dy),
                brute_mean(|t| dx.eval(t) * dy.eval(t), 1),
                epsilon = 1e-12
            );
        }
        assert_abs_diff_eq!(c.mean(), brute_mean(|t| c.eval(t), 1), epsilon = 1e-12);
    }

    #[test]
    fn window_average_is_exact_and_converges() {
        let a = cos_drive_response(std::f64::consts::E, 1.0);
        let mut b = sin_drive_response(std::f64::consts::E, 1.0);
        b.add(0.0, 0.3, 0.0);
        let tau = 7.3;
        let n = 200_000;
        let h = tau / n as f64;
        // composite Simpson on [0, τ]
        let f = |t: f64| a.eval(t) * b.eval(t);
        let mut s = f(0.0) + f(tau);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        let simpson = s * h / 3.0 / tau;
        assert_abs_diff_eq!(a.window_mean_product(&b, tau), simpson, epsilon = 1e-10);
        // commensurate window reproduces the exact cycle average
        let c = cos_drive_response(2.0, 1.0);
        let d = sin_drive_response(2.0, 1.0).derivative();
        assert_abs_diff_eq!(c.window_mean_product(&d, 2.0 * PI), c.mean_product(&d), epsilon = 1e-13);
        assert_abs_diff_eq!(c.window_mean(4.0 * PI), c.mean(), epsilon = 1e-14);
        // long windows approach it for incommensurate frequencies
        let err = (a.window_mean_product(&a, 2000.0 * PI) - a.mean_product(&a)).abs();
        assert!(err < 1e-3 * a.mean_product(&a).abs());
    }

    #[test]
    fn merges_equal_frequencies() {
        let mut h = Harmonics::zero();
        h.add(2.0, 1.0, 0.0).add(2.0, 0.5, 1.0).add(-2.0, 0.0, 1.0);
        assert_eq!(h.terms.len(), 1);
        assert_abs_diff_eq!(h.eval(0.4), 1.5 * 0.8f64.cos(), epsilon = 1e-15);
    }
}

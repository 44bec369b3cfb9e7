//! Choice of the averaging window τ.
//!
//! When λ/ω_M = p/q with q ≤ 32 every oscillatory term shares the period
//! `q·2π/ω_M` and averaging over it removes them exactly. Otherwise a long
//! window of 200 mechanical periods is used.

use crate::scalar::Real;

pub const MAX_DENOMINATOR: u64 = 32;
pub const FALLBACK_PERIODS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingWindow<T> {
    pub tau: T,
    /// Number of mechanical periods in `tau`.
    pub periods: u32,
    /// True when `tau` is an exact common period.
    pub commensurate: bool,
}

/// Best rational approximation `p/q` with `q ≤ max_q` via continued
/// fractions; `None` when no such fraction is within `rel_tol`.
pub fn rational_approximation(x: f64, max_q: u64, rel_tol: f64) -> Option<(u64, u64)> {
    if !(x >= 0.0) || !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_q {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= rel_tol * x.max(1.0) {
            return Some((h1, k1));
        }
        let frac = r - a as f64;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Averaging window for the drive frequencies `lambdas` (zero entries are
/// ignored) against the membrane frequency.
pub fn averaging_window_for<T: Real>(lambdas: &[T], omega_m: T) -> AveragingWindow<T> {
    let two_pi = T::lit(2.0) * T::PI();
    let mut periods = 1u64;
    for &l in lambdas {
        if l == T::zero() {
            continue;
        }
        match rational_approximation((l / omega_m).to_f64_lossy(), MAX_DENOMINATOR, 1e-9) {
            Some((_, q)) => periods = periods / gcd(periods, q) * q,
            None => {
                return AveragingWindow {
                    tau: T::lit(FALLBACK_PERIODS as f64) * two_pi / omega_m,
                    periods: FALLBACK_PERIODS,
                    commensurate: false,
                }
            }
        }
    }
    AveragingWindow {
        tau: T::from_u64(periods).unwrap() * two_pi / omega_m,
        periods: periods as u32,
        commensurate: true,
    }
}

pub fn averaging_window<T: Real>(lambda: T, omega_m: T) -> AveragingWindow<T> {
    averaging_window_for(&[lambda], omega_m)
}

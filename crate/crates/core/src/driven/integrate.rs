//! Time stepping of the mean-field equations.
//!
//! The default scheme is a Strang splitting: the membrane is advanced by
//! half a step as a damped oscillator under the current radiation force,
//! the photons by a full step with the membrane frozen, and the membrane by
//! another half step. Both sub-flows are solved exactly, so the fast
//! tunnelling and drive frequencies never limit the step size.

use std::io::Write;

use num_complex::Complex;

use super::params::DrivenParams;
use super::state::{rhs, MeanFieldState};
use crate::csv::{fmt15, write_header, write_row};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Split,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenOptions {
    /// Drop the `g X` detunings of the photon equations.
    pub order0_photons: bool,
    pub scheme: Scheme,
    /// Keep every `stride`-th step in the returned trajectory.
    pub stride: usize,
}

impl Default for DrivenOptions {
    fn default() -> Self {
        Self {
            order0_photons: false,
            scheme: Scheme::Split,
            stride: 1,
        }
    }
}

/// Trajectory in the units of the parameters it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivenTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<MeanFieldState<T>>,
}

impl<T: Real> DrivenTrajectory<T> {
    pub fn positions(&self) -> Vec<T> {
        self.states.iter().map(|s| s.x).collect()
    }

    /// Columns `t`, real and imaginary parts of the four amplitudes, `x`, `v`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        write_header(
            w,
            &[
                "t", "re_LV", "im_LV", "re_RV", "im_RV", "re_LH", "im_LH", "re_RH", "im_RH", "x", "v",
            ],
        )?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let cells = [
                *t, s.a_lv.re, s.a_lv.im, s.a_rv.re, s.a_rv.im, s.a_lh.re, s.a_lh.im, s.a_rh.re, s.a_rh.im, s.x, s.v,
            ]
            .map(|v| fmt15(v.to_f64_lossy()));
            write_row(w, &cells)?;
        }
        Ok(())
    }
}

/// Exact flow of `ẍ + γẋ + ω²x = f` over `h` for constant `f` (γ < 2ω).
fn oscillator_step<T: Real>(x: T, v: T, f: T, omega: T, gamma: T, h: T) -> (T, T) {
    let half = T::lit(0.5);
    let w2 = omega * omega;
    let y0 = x - f / w2;
    let wd = (w2 - gamma * gamma / T::lit(4.0)).sqrt();
    let decay = (-gamma * half * h).exp();
    let (s, c) = (wd * h).sin_cos();
    let y = decay * (y0 * c + (v + gamma * half * y0) / wd * s);
    let vv = decay * (v * c - (w2 * y0 + gamma * half * v) / wd * s);
    (y + f / w2, vv)
}

/// Exact flow over `h` of `u̇ = −i[(N − iκ)u + e]` for the pair
/// `u = (L, R)`, `N = [[δ, λ/2], [λ/2, −δ]]`.
fn photon_pair_step<T: Real>(
    l: Complex<T>,
    r: Complex<T>,
    delta: T,
    lambda: T,
    kappa: T,
    e: (T, T),
    h: T,
) -> (Complex<T>, Complex<T>) {
    let half_l = lambda * T::lit(0.5);
    let omega = (delta * delta + half_l * half_l).sqrt();
    let (sn, cs) = (omega * h).sin_cos();
    let sinc = if omega * h == T::zero() { h } else { sn / omega };
    let decay = (-kappa * h).exp();
    let i = Complex::new(T::zero(), T::one());
    // N v
    let nmul = |a: Complex<T>, b: Complex<T>| (a * delta + b * half_l, a * half_l - b * delta);
    // exp(Ah) v with A = −κ − iN
    let expm = |a: Complex<T>, b: Complex<T>| {
        let (na, nb) = nmul(a, b);
        ((a * cs - i * na * sinc) * decay, (b * cs - i * nb * sinc) * decay)
    };
    let (el, er) = expm(l, r);
    // particular part A⁻¹(exp(Ah) − 1) b with b = −i e
    let b = (-i * e.0, -i * e.1);
    let (pl, pr) = expm(b.0, b.1);
    let (dl, dr) = (pl - b.0, pr - b.1);
    let (ndl, ndr) = nmul(dl, dr);
    let denom = kappa * kappa + omega * omega;
    let ainv = |d: Complex<T>, nd: Complex<T>| (-d * kappa + i * nd) / denom;
    (el + ainv(dl, ndl), er + ainv(dr, ndr))
}

fn split_step<T: Real>(s: &MeanFieldState<T>, p: &DrivenParams<T>, order0: bool, h: T) -> MeanFieldState<T> {
    let b = &p.base;
    let half = h * T::lit(0.5);
    let (x1, v1) = oscillator_step(s.x, s.v, s.acceleration(p), b.omega_m, p.kappa_m, half);
    let k = p.amplitude_damping();
    let [e_lv, e_lh, e_rv, e_rh] = p.drives();
    let (dv, dh) = if order0 {
        (T::zero(), T::zero())
    } else {
        (b.g_v * x1, b.g_h * x1)
    };
    let (a_lv, a_rv) = photon_pair_step(s.a_lv, s.a_rv, dv, b.lambda_v, k, (e_lv, e_rv), h);
    let (a_lh, a_rh) = photon_pair_step(s.a_lh, s.a_rh, dh, b.lambda_h, k, (e_lh, e_rh), h);
    let mut out = MeanFieldState {
        a_lv,
        a_rv,
        a_lh,
        a_rh,
        x: x1,
        v: v1,
    };
    let (x2, v2) = oscillator_step(x1, v1, out.acceleration(p), b.omega_m, p.kappa_m, half);
    out.x = x2;
    out.v = v2;
    out
}

fn rk4_step<T: Real>(s: &MeanFieldState<T>, p: &DrivenParams<T>, order0: bool, h: T) -> MeanFieldState<T> {
    let half = h * T::lit(0.5);
    let k1 = rhs(s, p, order0);
    let k2 = rhs(&s.axpy(&k1, half), p, order0);
    let k3 = rhs(&s.axpy(&k2, half), p, order0);
    let k4 = rhs(&s.axpy(&k3, h), p, order0);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let sum = |a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>| (a + b * two + c * two + d) * sixth;
    MeanFieldState {
        a_lv: s.a_lv + sum(k1.a_lv, k2.a_lv, k3.a_lv, k4.a_lv),
        a_rv: s.a_rv + sum(k1.a_rv, k2.a_rv, k3.a_rv, k4.a_rv),
        a_lh: s.a_lh + sum(k1.a_lh, k2.a_lh, k3.a_lh, k4.a_lh),
        a_rh: s.a_rh + sum(k1.a_rh, k2.a_rh, k3.a_rh, k4.a_rh),
        x: s.x + (k1.x + k2.x * two + k3.x * two + k4.x) * sixth,
        v: s.v + (k1.v + k2.v * two + k3.v * two + k4.v) * sixth,
    }
}

/// One step of length `h` in natural units.
pub(crate) fn advance<T: Real>(
    s: &MeanFieldState<T>,
    q: &DrivenParams<T>,
    opts: &DrivenOptions,
    h: T,
) -> MeanFieldState<T> {
    match opts.scheme {
        Scheme::Split => split_step(s, q, opts.order0_photons, h),
        Scheme::Rk4 => rk4_step(s, q, opts.order0_photons, h),
    }
}

/// Default step: 64 steps per membrane period or per cavity decay time,
/// whichever is shorter. With [`Scheme::Rk4`] the tunnelling period is
/// resolved as well.
pub fn default_step<T: Real>(p: &DrivenParams<T>, scheme: Scheme) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut s = (two_pi / p.base.omega_m).min(T::one() / p.amplitude_damping());
    if scheme == Scheme::Rk4 {
        for f in [p.base.lambda_v, p.base.lambda_h, p.epsilon] {
            if f > T::zero() {
                s = s.min(two_pi / f);
            }
        }
    }
    s / T::lit(64.0)
}

/// Integrates from vacuum amplitudes and a membrane at rest, in natural
/// units internally. Times and lengths of the result are in the units of
/// `p`.
pub fn integrate_with<T: Real>(
    p: &DrivenParams<T>,
    t_end: T,
    dt: T,
    opts: DrivenOptions,
) -> Result<DrivenTrajectory<T>> {
    p.validate()?;
    if !(dt > T::zero()) || !(t_end >= T::zero()) {
        return Err(Error::Grid(
            "time step must be positive and end time non-negative".into(),
        ));
    }
    let w = p.base.omega_m;
    let l0 = p.base.natural_length();
    let q = p.to_natural();
    if opts.scheme == Scheme::Split && q.kappa_m >= T::lit(2.0) {
        return Err(Error::param(
            "kappa_m",
            "the split scheme needs an underdamped membrane (κ_M < 2ω_M)",
        ));
    }
    let h = dt * w;
    let steps = (t_end / dt).to_f64_lossy().round() as usize;
    let stride = opts.stride.max(1);
    let k = q.amplitude_damping();
    let photon_limit = T::lit(1e12) * (q.epsilon / k) * (q.epsilon / k) + T::lit(1e6);
    let mut s = MeanFieldState::default();
    let mut out = DrivenTrajectory {
        times: Vec::with_capacity(steps / stride + 2),
        states: Vec::with_capacity(steps / stride + 2),
    };
    let record = |out: &mut DrivenTrajectory<T>, n: usize, s: &MeanFieldState<T>| {
        out.times.push(dt * T::from_usize(n).unwrap());
        out.states.push(MeanFieldState {
            x: s.x * l0,
            v: s.v * l0 * w,
            ..*s
        });
    };
    record(&mut out, 0, &s);
    for n in 1..=steps {
        s = advance(&s, &q, &opts, h);
        if !s.is_finite() || s.photon_number() > photon_limit {
            return Err(Error::Integration {
                time: (dt * T::from_usize(n).unwrap()).to_f64_lossy(),
                reason: format!(
                    "mean-field energy blew up (photon number {:.3e}); reduce the step",
                    s.photon_number().to_f64_lossy()
                ),
            });
        }
        if n % stride == 0 || n == steps {
            record(&mut out, n, &s);
        }
    }
    Ok(out)
}

pub fn integrate<T: Real>(p: &DrivenParams<T>, t_end: T, dt: T) -> Result<DrivenTrajectory<T>> {
    integrate_with(p, t_end, dt, DrivenOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;
    use approx::assert_abs_diff_eq;

    fn toy(theta: f64) -> DrivenParams<f64> {
        DrivenParams {
            epsilon: 0.8,
            kappa: 0.6,
            kappa_m: 0.01,
            theta,
            base: SystemParams::natural(10.0, 3.0, 0.0, 0.12, 0.05),
            convention: Default::default(),
        }
    }

    #[test]
    fn exact_substeps_solve_their_equations() {
        let (x, v) = oscillator_step(0.3, -0.2, 0.7, 1.3, 0.1, 0.01);
        let acc = 0.7 - 0.1 * -0.2 - 1.3f64.powi(2) * 0.3;
        assert_abs_diff_eq!(x, 0.3 - 0.2 * 0.01 + 0.5 * acc * 1e-4, epsilon = 1e-7);
        let jerk = -0.1 * acc - 1.3f64.powi(2) * -0.2;
        assert_abs_diff_eq!(v, -0.2 + acc * 0.01 + 0.5 * jerk * 1e-4, epsilon = 1e-7);
        let l = Complex::new(0.2, -0.1);
        let r = Complex::new(-0.3, 0.4);
        let h = 1e-4;
        let (l1, r1) = photon_pair_step(l, r, 0.7, 3.0, 0.4, (0.5, 0.2), h);
        let i = Complex::new(0.0, 1.0);
        let dl = -i * (Complex::new(0.7, -0.4) * l + r * 1.5 + 0.5);
        let dr = -i * (Complex::new(-0.7, -0.4) * r + l * 1.5 + 0.2);
        assert_abs_diff_eq!(((l1 - l) / h - dl).norm(), 0.0, epsilon = 1e-3);
        assert_abs_diff_eq!(((r1 - r) / h - dr).norm(), 0.0, epsilon = 1e-3);
        // steady state of the exact step is a fixed point
        let (ls, rs) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
        let (mut a, mut b) = (ls, rs);
        for _ in 0..400 {
            (a, b) = photon_pair_step(a, b, 0.0, 0.0, 0.4, (0.0, 0.5), 0.1);
        }
        assert_abs_diff_eq!(b.norm(), 0.5 / 0.4, epsilon = 1e-6);
    }

    #[test]
    fn split_and_rk4_agree_on_mild_parameters() {
        let p = toy(1.0);
        let opts = |scheme| DrivenOptions {
            scheme,
            ..Default::default()
        };
        let a = integrate_with(&p, 30.0, 0.002, opts(Scheme::Split)).unwrap();
        let b = integrate_with(&p, 30.0, 0.002, opts(Scheme::Rk4)).unwrap();
        let scale = a.positions().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (x, y) in a.positions().iter().zip(b.positions()) {
            assert!((x - y).abs() < 1e-4 * scale, "{x} vs {y}");
        }
    }

    #[test]
    fn undriven_stays_at_rest_and_left_h_stays_empty() {
        let mut p = toy(0.7);
        p.epsilon = 0.0;
        let t = integrate(&p, 10.0, 0.01).unwrap();
        assert!(t.states.iter().all(|s| s.x == 0.0 && s.photon_number() == 0.0));
        let t = integrate(&toy(0.7), 20.0, 0.01).unwrap();
        assert!(t.states.iter().all(|s| s.a_lh.norm() < 1e-12));
        let t = integrate(&toy(0.0), 20.0, 0.01).unwrap();
        assert!(t.states.iter().all(|s| s.a_rh.norm() == 0.0));
    }

    #[test]
    fn h_mode_reaches_driven_steady_amplitude() {
        let mut p = toy(std::f64::consts::FRAC_PI_2);
        p.base.g_h = 0.0;
        p.base.g_v = 0.0;
        p.convention = super::super::params::KappaConvention::AmplitudeRate;
        let t = integrate(&p, 40.0, 0.01).unwrap();
        let last = t.states.last().unwrap();
        assert_abs_diff_eq!(last.a_rh.norm(), p.epsilon / p.kappa, epsilon = 1e-8);
    }

    #[test]
    fn csv_columns() {
        let t = integrate(&toy(0.5), 0.1, 0.01).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let head = String::from_utf8(buf).unwrap().lines().next().unwrap().to_string();
        assert_eq!(head, "t,re_LV,im_LV,re_RV,im_RV,re_LH,im_LH,re_RH,im_RH,x,v");
    }

    fn late_average(p: &DrivenParams<f64>) -> f64 {
        let t = integrate(p, 200.0 * std::f64::consts::PI, 0.01).unwrap();
        let x = t.positions();
        let tail = &x[x.len() / 2..];
        tail.iter().sum::<f64>() / tail.len() as f64
    }

    #[test]
    fn late_time_ordering_in_theta() {
        // weak coupling keeps g X well below the cavity linewidth
        let weak = |theta| {
            let mut p = toy(theta);
            p.base.g_h = 0.01;
            p.base.g_v = 0.004;
            p
        };
        let (a, b, c) = (
            late_average(&weak(0.0)),
            late_average(&weak(0.25 * std::f64::consts::PI)),
            late_average(&weak(std::f64::consts::FRAC_PI_2)),
        );
        assert!(c > b && b > a);
        assert!(a.abs() < 0.05 * c);
        let mut q = weak(std::f64::consts::FRAC_PI_2);
        q.epsilon *= 2.0;
        let ratio = late_average(&q) / c;
        assert!((ratio - 4.0).abs() < 0.4, "{ratio}");
    }

    #[test]
    fn blow_up_is_reported() {
        let p = toy(1.0);
        let opts = DrivenOptions {
            scheme: Scheme::Rk4,
            ..Default::default()
        };
        assert!(matches!(
            integrate_with(&p, 50.0, 2.0, opts),
            Err(Error::Integration { .. })
        ));
    }
}

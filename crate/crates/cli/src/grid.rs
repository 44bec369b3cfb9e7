//! Sampling grids and small numerical helpers shared by the commands.

use std::f64::consts::FRAC_PI_2;

/// `n` equally spaced angles from 0 to π/2 inclusive.
pub fn theta_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| FRAC_PI_2 * k as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Ordinary least squares `y ≈ a x + b`, returning `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let a = sxy / sxx;
    (a, my - a * mx)
}

/// Coefficient of determination of the one-parameter fit `y ≈ c·f`.
pub fn proportional_r2(f: &[f64], y: &[f64]) -> (f64, f64) {
    let c = f.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / f.iter().map(|a| a * a).sum::<f64>();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_res: f64 = f.iter().zip(y).map(|(a, b)| (b - c * a).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - mean).powi(2)).sum();
    (c, 1.0 - ss_res / ss_tot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_include_endpoints() {
        let t = theta_grid(5);
        assert_eq!(t.len(), 5);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[4], FRAC_PI_2);
        let g = log_grid(0.1, 100.0, 4);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[3] - 100.0).abs() < 1e-12);
        assert!((g[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fits() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((loglog_slope(&xs, &ys) - 1.5).abs() < 1e-12);
        let f = [0.0, 0.5, 1.0];
        let (c, r2) = proportional_r2(&f, &[0.0, 1.0, 2.0]);
        assert!((c - 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }
}

//! Quadrature rules: fixed Gauss-Legendre, adaptive Gauss-Legendre panels,
//! and the periodic trapezoid rule.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Roots come from Newton iteration on P_n started at the Chebyshev guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * z * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

fn panel_sum<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>() * half
}

/// Integral over [a, b] with 16-point Gauss-Legendre panels.
///
/// Starts from `initial_panels` equal panels and bisects every panel until two
/// successive totals agree to `rtol` (relative, with an absolute floor of
/// `rtol * 1e-3`) or `max_doublings` is exhausted.
pub fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    rtol: f64,
    max_doublings: usize,
) -> Result<f64> {
    let integrate = |panels: usize| {
        let h = (b - a) / panels as f64;
        (0..panels).map(|i| panel_sum(&f, a + h * i as f64, a + h * (i + 1) as f64)).sum::<f64>()
    };
    let mut panels = initial_panels.max(1);
    let mut prev = integrate(panels);
    for _ in 0..max_doublings {
        panels *= 2;
        let cur = integrate(panels);
        if (cur - prev).abs() <= rtol * cur.abs().max(1e-3) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NumericalFailure { reason: "Gauss-Legendre panels did not converge".into(), last_estimate: prev })
}

/// Mean of a 2pi-periodic function, (1/2pi) times its integral over one period.
///
/// Trapezoid rule with `n0` nodes, doubled until successive means differ by
/// less than `tol` (absolute).
pub fn periodic_mean<F: Fn(f64) -> f64>(f: F, n0: usize, tol: f64, max_doublings: usize) -> Result<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut n = n0.max(2);
    let mut sum: f64 = (0..n).map(|j| f(two_pi * j as f64 / n as f64)).sum();
    let mut prev = sum / n as f64;
    for _ in 0..max_doublings {
        // Reuse the old nodes; only the midpoints are new.
        let extra: f64 = (0..n).map(|j| f(two_pi * (j as f64 + 0.5) / n as f64)).sum();
        sum += extra;
        n *= 2;
        let cur = sum / n as f64;
        if (cur - prev).abs() < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NumericalFailure { reason: "periodic trapezoid did not converge".into(), last_estimate: prev })
}

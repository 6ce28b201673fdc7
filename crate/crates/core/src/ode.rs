//! Adaptive integrators.
//!
//! `dopri5` is the explicit Dormand-Prince 5(4) pair for small non-stiff
//! systems. `Sdirk4` is a five-stage L-stable singly diagonally implicit
//! Runge-Kutta method of order 4 with an embedded order-3 estimate, specialised
//! to linear autonomous systems y' = L y with tridiagonal complex L.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Integrates y' = f(t, y) from `t0`, returning the state at each time of
/// `t_out` (ascending, all >= t0). Steps are clipped to land on output times.
pub fn dopri5<F>(f: F, t0: f64, y0: &[f64], t_out: &[f64], rtol: f64, atol: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    // 5th-order weights minus 4th-order weights.
    const E: [f64; 7] =
        [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k = vec![vec![0.0; n]; 7];
    let mut ytmp = vec![0.0; n];
    let mut out = Vec::with_capacity(t_out.len());
    let span = t_out.last().map_or(0.0, |&tf| tf - t0);
    let mut h = (span * 1e-3).max(1e-6);
    let mut steps = 0usize;
    f(t, &y, &mut k[0]);

    for &target in t_out {
        while target - t > 1e-14 * target.abs().max(1.0) {
            let last = h >= target - t;
            let hs = if last { target - t } else { h };
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += hs * A[s][j] * kj[i];
                    }
                    ytmp[i] = acc;
                }
                f(t + C[s] * hs, &ytmp, &mut k[s]);
            }
            // ytmp now holds the 5th-order solution (stage 7 argument).
            let mut err = 0.0;
            for i in 0..n {
                let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * hs;
                let sc = atol + rtol * y[i].abs().max(ytmp[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / n.max(1) as f64).sqrt();
            if err <= 1.0 {
                t = if last { target } else { t + hs };
                y.copy_from_slice(&ytmp);
                k.swap(0, 6);
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !(last && err <= 1.0) {
                h = hs * fac;
            }
            steps += 1;
            if h < 1e-14 * t.abs().max(1.0) || steps > 10_000_000 {
                return Err(Error::Stiffness { t });
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// Tridiagonal matrix stored by diagonals. Row i reads
/// `lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1]`.
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub lower: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub upper: Vec<Complex64>,
}

impl Tridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.len();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.lower[i] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.upper[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }
}

// LU factors of I - s L for the Thomas algorithm.
struct Factored {
    lower: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    upper: Vec<Complex64>,
}

impl Factored {
    fn new(l: &Tridiag, s: f64) -> Self {
        let n = l.len();
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); n];
        let lower: Vec<Complex64> = l.lower.iter().map(|v| -s * v).collect();
        let upper: Vec<Complex64> = l.upper.iter().map(|v| -s * v).collect();
        let mut prev_ratio = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut piv = Complex64::new(1.0, 0.0) - s * l.diag[i];
            if i > 0 {
                piv -= lower[i] * prev_ratio;
            }
            inv_pivot[i] = piv.inv();
            prev_ratio = upper[i] * inv_pivot[i];
        }
        Factored { lower, inv_pivot, upper }
    }

    fn solve(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        for i in 0..n {
            if i > 0 {
                let l = self.lower[i] * rhs[i - 1];
                rhs[i] -= l;
            }
            rhs[i] *= self.inv_pivot[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            let u = self.upper[i] * self.inv_pivot[i] * rhs[i + 1];
            rhs[i] -= u;
        }
    }
}

/// Coefficients of the SDIRK4 method (diagonal 1/4).
pub mod sdirk4_tableau {
    pub const GAMMA: f64 = 0.25;
    pub const C: [f64; 5] = [0.25, 0.75, 11.0 / 20.0, 0.5, 1.0];
    pub const A: [[f64; 5]; 5] = [
        [0.25, 0.0, 0.0, 0.0, 0.0],
        [0.5, 0.25, 0.0, 0.0, 0.0],
        [17.0 / 50.0, -1.0 / 25.0, 0.25, 0.0, 0.0],
        [371.0 / 1360.0, -137.0 / 2720.0, 15.0 / 544.0, 0.25, 0.0],
        [25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0, 0.25],
    ];
    pub const B: [f64; 5] = A[4];
    pub const B_HAT: [f64; 5] = [59.0 / 48.0, -17.0 / 96.0, 225.0 / 32.0, -85.0 / 12.0, 0.0];
}

/// Adaptive SDIRK4 integrator for y' = L y with tridiagonal L.
pub struct Sdirk4 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
}

impl Default for Sdirk4 {
    fn default() -> Self {
        Sdirk4 { rtol: 1e-10, atol: 1e-13, h_init: 1e-4 }
    }
}

impl Sdirk4 {
    /// Advances `y` from time 0 through each of the ascending times in `t_out`,
    /// calling `visit(index, &y)` at each output.
    pub fn integrate<V>(&self, l: &Tridiag, y: &mut [Complex64], t_out: &[f64], mut visit: V) -> Result<()>
    where
        V: FnMut(usize, &[Complex64]),
    {
        use sdirk4_tableau::*;
        let n = y.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut k = vec![vec![zero; n]; 5];
        let mut arg = vec![zero; n];
        let mut ynew = vec![zero; n];
        let mut err = vec![zero; n];
        let mut t = 0.0;
        let mut h = self.h_init;
        let mut factored: Option<(f64, Factored)> = None;
        let mut steps = 0usize;

        for (idx, &target) in t_out.iter().enumerate() {
            while target - t > 1e-14 * target.abs().max(1.0) {
                let last = h >= target - t;
                let hs = if last { target - t } else { h };
                if factored.as_ref().is_none_or(|(hf, _)| *hf != hs) {
                    factored = Some((hs, Factored::new(l, hs * GAMMA)));
                }
                let fac = &factored.as_ref().unwrap().1;

                for s in 0..5 {
                    arg.copy_from_slice(y);
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let c = hs * A[s][j];
                        for i in 0..n {
                            arg[i] += c * kj[i];
                        }
                    }
                    l.apply(&arg, &mut k[s]);
                    fac.solve(&mut k[s]);
                }
                for i in 0..n {
                    let mut acc = y[i];
                    let mut e = zero;
                    for s in 0..5 {
                        acc += hs * B[s] * k[s][i];
                        e += hs * (B[s] - B_HAT[s]) * k[s][i];
                    }
                    ynew[i] = acc;
                    err[i] = e;
                }
                // Stiff filtering of the estimate.
                fac.solve(&mut err);
                let mut en = 0.0;
                for i in 0..n {
                    let sc = self.atol + self.rtol * y[i].norm().max(ynew[i].norm());
                    en += (err[i].norm() / sc).powi(2);
                }
                let en = (en / n.max(1) as f64).sqrt();
                let accepted = en <= 1.0;
                if accepted {
                    t = if last { target } else { t + hs };
                    y.copy_from_slice(&ynew);
                }
                let grow = if en == 0.0 { 4.0 } else { (0.9 * en.powf(-0.25)).clamp(0.2, 4.0) };
                if !(last && accepted) {
                    h = hs * grow;
                }
                steps += 1;
                if h < 1e-14 * t.abs().max(1.0) || steps > 10_000_000 {
                    return Err(Error::Stiffness { t });
                }
            }
            visit(idx, y);
        }
        Ok(())
    }
}

//! Phase-space dynamics of the damped oscillator.
//!
//! The Wigner function obeys a Fokker-Planck equation with linear drift
//! `A y + K` and constant diffusion `D`. Its propagator is a Gaussian in
//! y = (q, p) with mean `Phi(t) y' + k(t)` and covariance `M(t)`, where
//! dM/dt = A M + M A^T + 2 D and dy/dt = A y + K, M(0) = 0.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::model::{BathParams, GaussianState};
use crate::ode::dopri5;

pub type Mat2 = [[f64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

fn mat_vec(a: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Drift matrix, drift vector and diffusion matrix of a one-dimensional
/// Fokker-Planck equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FokkerPlanckModel {
    pub drift: Mat2,
    pub drift_vec: [f64; 2],
    pub diffusion: Mat2,
}

/// Outcome of the diffusion positivity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Positivity {
    pub holds: bool,
    /// det D - (Tr A)^2 / 16
    pub margin: f64,
}

impl FokkerPlanckModel {
    /// Builds a model, rejecting a diffusion matrix that is not symmetric or
    /// fails the positivity condition.
    pub fn new(drift: Mat2, drift_vec: [f64; 2], diffusion: Mat2) -> Result<Self> {
        let m = Self::unchecked(drift, drift_vec, diffusion);
        if diffusion[0][1] != diffusion[1][0] {
            return Err(domain("diffusion matrix must be symmetric"));
        }
        let pos = positivity_check(&m);
        if !pos.holds {
            return Err(domain(format!("diffusion positivity violated, margin {}", pos.margin)));
        }
        Ok(m)
    }

    pub fn unchecked(drift: Mat2, drift_vec: [f64; 2], diffusion: Mat2) -> Self {
        FokkerPlanckModel { drift, drift_vec, diffusion }
    }
}

pub fn oscillator_model(bath: &BathParams) -> FokkerPlanckModel {
    let g = bath.gamma;
    let dd = g * (bath.nu + 0.5);
    FokkerPlanckModel::new([[-g, 1.0], [-1.0, -g]], [0.0, 0.0], [[dd, 0.0], [0.0, dd]])
        .expect("oscillator diffusion always satisfies positivity")
}

/// D_qq >= 0, D_pp >= 0 and det D >= (Tr A)^2 / 16.
pub fn positivity_check(model: &FokkerPlanckModel) -> Positivity {
    let d = &model.diffusion;
    let tr = model.drift[0][0] + model.drift[1][1];
    let margin = det(d) - tr * tr / 16.0;
    Positivity { holds: d[0][0] >= 0.0 && d[1][1] >= 0.0 && margin >= 0.0, margin }
}

/// Closed-form moment evolution of a Gaussian state.
pub fn evolve_gaussian(g0: &GaussianState, t: f64, bath: &BathParams) -> GaussianState {
    let e1 = (-bath.gamma * t).exp();
    let e2 = e1 * e1;
    let (s, c) = t.sin_cos();
    let ss = bath.nu + 0.5;
    let (dq, dp) = (g0.sigma_q - ss, g0.sigma_p - ss);
    GaussianState {
        qbar: e1 * (g0.qbar * c + g0.pbar * s),
        pbar: e1 * (g0.pbar * c - g0.qbar * s),
        sigma_q: ss + e2 * (dq * c * c + dp * s * s + g0.sigma_qp * (2.0 * t).sin()),
        sigma_p: ss + e2 * (dp * c * c + dq * s * s - g0.sigma_qp * (2.0 * t).sin()),
        sigma_qp: e2 * (g0.sigma_qp * (2.0 * t).cos() + 0.5 * (g0.sigma_p - g0.sigma_q) * (2.0 * t).sin()),
    }
}

/// Gaussian transition density: mean `mean_map * y' + offset`, covariance `cov`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorKernel {
    pub mean_map: Mat2,
    pub offset: [f64; 2],
    pub cov: Mat2,
}

impl PropagatorKernel {
    /// Density in (q, p) given the start point (q', p'); integrates to 1 over dq dp.
    pub fn density(&self, q: f64, p: f64, q0: f64, p0: f64) -> f64 {
        let m = mat_vec(&self.mean_map, [q0, p0]);
        let dy = [q - m[0] - self.offset[0], p - m[1] - self.offset[1]];
        let dt = det(&self.cov);
        let inv = [[self.cov[1][1] / dt, -self.cov[0][1] / dt], [-self.cov[1][0] / dt, self.cov[0][0] / dt]];
        let quad = dy[0] * (inv[0][0] * dy[0] + inv[0][1] * dy[1]) + dy[1] * (inv[1][0] * dy[0] + inv[1][1] * dy[1]);
        (-0.5 * quad).exp() / (2.0 * std::f64::consts::PI * dt.sqrt())
    }

    /// Kernel of running `self` first and then `later`.
    pub fn then(&self, later: &PropagatorKernel) -> PropagatorKernel {
        let off = mat_vec(&later.mean_map, self.offset);
        let pc = mat_mul(&mat_mul(&later.mean_map, &self.cov), &transpose(&later.mean_map));
        PropagatorKernel {
            mean_map: mat_mul(&later.mean_map, &self.mean_map),
            offset: [off[0] + later.offset[0], off[1] + later.offset[1]],
            cov: [
                [pc[0][0] + later.cov[0][0], pc[0][1] + later.cov[0][1]],
                [pc[1][0] + later.cov[1][0], pc[1][1] + later.cov[1][1]],
            ],
        }
    }
}

/// Closed-form oscillator kernel: mean map e^{-gamma t} R(t), covariance
/// (nu + 1/2) u I.
pub fn kernel(t: f64, bath: &BathParams) -> Result<PropagatorKernel> {
    if !(t > 0.0) {
        return Err(domain(format!("kernel needs t > 0, got {t}")));
    }
    let e1 = (-bath.gamma * t).exp();
    let (s, c) = t.sin_cos();
    let var = (bath.nu + 0.5) * -(-2.0 * bath.gamma * t).exp_m1();
    Ok(PropagatorKernel {
        mean_map: [[e1 * c, e1 * s], [-e1 * s, e1 * c]],
        offset: [0.0, 0.0],
        cov: [[var, 0.0], [0.0, var]],
    })
}

/// Kernel of an arbitrary model from numerical integration of the moment
/// equations (relative tolerance 1e-11).
pub fn kernel_numeric(model: &FokkerPlanckModel, t: f64) -> Result<PropagatorKernel> {
    if !(t > 0.0) {
        return Err(domain(format!("kernel needs t > 0, got {t}")));
    }
    let a = model.drift;
    let k = model.drift_vec;
    let d = model.diffusion;
    // State: Phi (4), offset (2), M_qq, M_qp, M_pp (3).
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        let phi = [[y[0], y[1]], [y[2], y[3]]];
        let ap = mat_mul(&a, &phi);
        dy[0] = ap[0][0];
        dy[1] = ap[0][1];
        dy[2] = ap[1][0];
        dy[3] = ap[1][1];
        let o = mat_vec(&a, [y[4], y[5]]);
        dy[4] = o[0] + k[0];
        dy[5] = o[1] + k[1];
        let m = [[y[6], y[7]], [y[7], y[8]]];
        let am = mat_mul(&a, &m);
        let mat = transpose(&am);
        dy[6] = am[0][0] + mat[0][0] + 2.0 * d[0][0];
        dy[7] = am[0][1] + mat[0][1] + 2.0 * d[0][1];
        dy[8] = am[1][1] + mat[1][1] + 2.0 * d[1][1];
    };
    let y0 = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let y = dopri5(rhs, 0.0, &y0, &[t], 1e-11, 1e-14)?.pop().unwrap();
    Ok(PropagatorKernel {
        mean_map: [[y[0], y[1]], [y[2], y[3]]],
        offset: [y[4], y[5]],
        cov: [[y[6], y[7]], [y[7], y[8]]],
    })
}

/// Wigner function sampled on the square [-half_width, half_width]^2 with
/// `n` nodes per axis; `values[i * n + j]` sits at (q_i, p_j).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub half_width: f64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn sample<F: Fn(f64, f64) -> f64 + Sync>(half_width: f64, n: usize, f: F) -> Self {
        let h = 2.0 * half_width / (n - 1) as f64;
        let values = (0..n * n)
            .into_par_iter()
            .map(|idx| f(-half_width + h * (idx / n) as f64, -half_width + h * (idx % n) as f64))
            .collect();
        WignerGrid { half_width, n, values }
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + self.step() * i as f64
    }

    /// Trapezoid approximation of the integral of f(W) dq dp / 2pi.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let n = self.n;
        let h = self.step();
        let mut s = 0.0;
        for i in 0..n {
            let wi = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            for j in 0..n {
                let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                s += wi * wj * f(self.values[i * n + j]);
            }
        }
        s * h * h / (2.0 * std::f64::consts::PI)
    }

    /// Mass |W| dq dp / 2pi carried by the outermost ring of cells.
    pub fn boundary_mass(&self) -> f64 {
        let n = self.n;
        let h = self.step();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                    s += self.values[i * n + j].abs();
                }
            }
        }
        s * h * h / (2.0 * std::f64::consts::PI)
    }
}

/// Evolves a sampled Wigner function by direct convolution with the kernel.
///
/// Output points are evaluated in parallel; each costs O(n^2).
pub fn propagate_grid(w0: &WignerGrid, t: f64, bath: &BathParams) -> Result<WignerGrid> {
    let mass = w0.boundary_mass();
    if mass > 1e-8 {
        return Err(Error::GridTruncation { mass });
    }
    let k = kernel(t, bath)?;
    let n = w0.n;
    let h = w0.step();
    let var = k.cov[0][0];
    let shrink = (-bath.gamma * t).exp();
    let (s, c) = t.sin_cos();
    let nodes: Vec<f64> = (0..n).map(|i| w0.node(i)).collect();
    let wt: Vec<f64> = (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 } else { 1.0 }).collect();
    let norm = h * h / (2.0 * std::f64::consts::PI * var);
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map_init(
            || (vec![0.0; n], vec![0.0; n]),
            |(gq, gp), idx| {
                let (q, p) = (nodes[idx / n], nodes[idx % n]);
                // The kernel factorizes in the rotated output coordinates.
                let qt = q * c - p * s;
                let pt = p * c + q * s;
                for i in 0..n {
                    let dq = qt - shrink * nodes[i];
                    let dp = pt - shrink * nodes[i];
                    gq[i] = wt[i] * (-dq * dq / (2.0 * var)).exp();
                    gp[i] = wt[i] * (-dp * dp / (2.0 * var)).exp();
                }
                let mut acc = 0.0;
                for i in 0..n {
                    if gq[i] < 1e-300 {
                        continue;
                    }
                    let row = &w0.values[i * n..(i + 1) * n];
                    let inner: f64 = row.iter().zip(gp.iter()).map(|(w, g)| w * g).sum();
                    acc += gq[i] * inner;
                }
                acc * norm
            },
        )
        .collect();
    let out = WignerGrid { half_width: w0.half_width, n, values };
    let mass = out.boundary_mass();
    if mass > 1e-8 {
        return Err(Error::GridTruncation { mass });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positivity_margins() {
        let m0 = oscillator_model(&BathParams::new(1.0, 0.0).unwrap());
        let p = positivity_check(&m0);
        assert!(p.holds);
        assert_eq!(p.margin, 0.0);
        let m2 = oscillator_model(&BathParams::new(1.0, 2.0).unwrap());
        assert_eq!(det(&m2.diffusion), 25.0 / 4.0);
        let bad = FokkerPlanckModel::unchecked([[-1.0, 0.0], [0.0, -1.0]], [0.0; 2], [[0.0; 2]; 2]);
        assert!(!positivity_check(&bad).holds);
        assert!(FokkerPlanckModel::new(bad.drift, bad.drift_vec, bad.diffusion).is_err());
    }

    #[test]
    fn evolve_gaussian_limits() {
        let bath = BathParams::new(0.5, 1.3).unwrap();
        let g0 = GaussianState { qbar: 1.0, pbar: -2.0, sigma_q: 0.2, sigma_p: 1.25, sigma_qp: 0.0 };
        let z = evolve_gaussian(&g0, 0.0, &bath);
        let d = [z.qbar - g0.qbar, z.pbar - g0.pbar, z.sigma_q - g0.sigma_q, z.sigma_p - g0.sigma_p, z.sigma_qp];
        assert!(d.iter().all(|x| x.abs() < 1e-15));
        let g = evolve_gaussian(&g0, 200.0, &bath);
        assert!((g.sigma_q - 1.8).abs() < 1e-12 && (g.sigma_p - 1.8).abs() < 1e-12);
        assert!(g.sigma_qp.abs() < 1e-12 && g.qbar.abs() < 1e-12 && g.pbar.abs() < 1e-12);
    }

    #[test]
    fn kernel_rejects_zero_time() {
        assert!(kernel(0.0, &BathParams::new(1.0, 0.0).unwrap()).is_err());
    }
}

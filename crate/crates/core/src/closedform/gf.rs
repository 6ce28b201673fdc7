//! Diagonal generating functions G(z) = sum_n p_n z^n.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{CompactTime, GaussianState};
use crate::quad::periodic_mean;

/// Time evolution of a diagonal generating function under the master equation:
/// G(z, u) = G0((z + u(1+nu)(1-z)) / (1 + nu u (1-z))) / (1 + nu u (1-z)).
pub fn evolve_diag_gf<G>(g0: G, u: CompactTime, nu: f64, z: Complex64) -> Complex64
where
    G: Fn(Complex64) -> Complex64,
{
    let u = u.value();
    let one = Complex64::new(1.0, 0.0);
    let den = one + nu * u * (one - z);
    g0((z + u * (1.0 + nu) * (one - z)) / den) / den
}

/// Coefficients of the generic Gaussian diagonal generating function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDiagGFParams {
    pub d_norm: f64,
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    sigma_sum: f64,
    d: f64,
}

impl GaussianDiagGFParams {
    pub fn new(g: &GaussianState) -> Self {
        let GaussianState { qbar: q, pbar: p, sigma_q: sq, sigma_p: sp, sigma_qp: sqp } = *g;
        let d = g.d();
        let (p2, q2, pq) = (p * p, q * q, p * q);
        GaussianDiagGFParams {
            d_norm: 1.0 + 2.0 * (sp + sq) + 4.0 * d,
            g0: p2 * (2.0 * sq + 1.0) + q2 * (2.0 * sp + 1.0) - 4.0 * pq * sqp,
            g1: 2.0 * p2 * (sq * sq + sqp * sqp + sq + 0.25) + 2.0 * q2 * (sp * sp + sqp * sqp + sp + 0.25)
                - 4.0 * pq * sqp * (sq + sp + 1.0),
            g2: 2.0 * p2 * (sq * sq + sqp * sqp - 0.25) + 2.0 * q2 * (sp * sp + sqp * sqp - 0.25)
                - 4.0 * pq * sqp * (sq + sp),
            sigma_sum: sq + sp,
            d,
        }
    }

    /// The quadratic polynomial under the square root.
    pub fn big_g(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        0.25 * ((one + z) * (one + z) + 4.0 * self.d * (one - z) * (one - z) + 2.0 * self.sigma_sum * (one - z * z))
    }
}

/// Diagonal generating function of a Gaussian state from its moments.
pub fn gaussian_diag_gf(g: &GaussianState, z: Complex64) -> Result<Complex64> {
    let c = GaussianDiagGFParams::new(g);
    let gz = c.big_g(z);
    if z.im == 0.0 && (0.0..=1.0).contains(&z.re) && gz.re <= 0.0 {
        return Err(Error::Branch { z: z.re, value: gz.re });
    }
    let expo = ((z * c.g1 - z * z * c.g2) / gz - c.g0) / c.d_norm;
    Ok(gz.sqrt().inv() * expo.exp())
}

/// Diagonal purity sum_n p_n^2 as the mean of |G(e^{i theta})|^2 over the circle.
pub fn diagonal_purity_from_gf<G>(g: G) -> Result<f64>
where
    G: Fn(Complex64) -> Complex64,
{
    periodic_mean(|th| g(Complex64::from_polar(1.0, th)).norm_sqr(), 512, 1e-11, 10)
}

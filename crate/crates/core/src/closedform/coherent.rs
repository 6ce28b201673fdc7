//! Initial coherent state |alpha>, alpha = sqrt(a) e^{i phi}.

use crate::error::Result;
use crate::measures::MeasureRecord;
use crate::model::{xi_nu, BathParams, CompactTime};
use crate::specfun::bessel_i0_scaled;

pub fn mu(u: CompactTime, bath: &BathParams) -> f64 {
    xi_nu(u, bath.nu)
}

/// lambda = xi e^{-eta} I0(eta), eta = 2a(1-u) xi.
pub fn lambda(a: f64, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let xi = xi_nu(u, bath.nu);
    let eta = 2.0 * a * u.decay() * xi;
    Ok(xi * bessel_i0_scaled(eta)?)
}

pub fn p0(a: f64, u: CompactTime, bath: &BathParams) -> f64 {
    let unu = u.value() * bath.nu;
    (-a * u.decay() / (1.0 + unu)).exp() / (1.0 + unu)
}

/// Photon-number distribution p_n for n = 0..n_max.
///
/// Evaluated through M_k = s^k L_k(X) with s = u nu / (1 + u nu) and
/// X = -a(1-u) / (u nu (1 + u nu)); writing b = -s X gives
/// (k+1) M_{k+1} = ((2k+1) s + b) M_k - k s^2 M_{k-1}, which stays finite as
/// u nu -> 0. `a` may be negative (needed by the cat distribution).
pub fn pn(n_max: usize, a: f64, u: CompactTime, bath: &BathParams) -> Vec<f64> {
    let unu = u.value() * bath.nu;
    let b = a * u.decay() / ((1.0 + unu) * (1.0 + unu));
    let prefactor_ln = -a * u.decay() / (1.0 + unu) - (1.0 + unu).ln();
    let mut out = Vec::with_capacity(n_max + 1);
    if unu < 1e-12 {
        // Poisson limit with mean a(1-u).
        let m = a * u.decay();
        let mut term = (-m).exp();
        for k in 0..=n_max {
            out.push(term);
            term *= m / (k + 1) as f64;
        }
        return out;
    }
    let s = unu / (1.0 + unu);
    // Values are kept as mantissa * e^{scale} to survive large a.
    let mut scale = prefactor_ln;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..=n_max {
        out.push(cur * scale.exp());
        let kf = k as f64;
        let next = (((2.0 * kf + 1.0) * s + b) * cur - kf * s * s * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e100 || (mag < 1e-100 && mag > 0.0) {
            let l = mag.ln();
            cur /= mag;
            prev /= mag;
            scale += l;
        }
    }
    out
}

/// Initial diagonal purity e^{-2a} I0(2a).
pub fn lambda0(a: f64) -> Result<f64> {
    bessel_i0_scaled(2.0 * a)
}

pub fn measures(a: f64, u: CompactTime, bath: &BathParams) -> Result<MeasureRecord> {
    Ok(MeasureRecord::assemble(u, mu(u, bath), lambda(a, u, bath)?, (1.0, lambda0(a)?), p0(a, u, bath)))
}

/// Wigner function (normalized so that its integral over dq dp / 2pi is 1).
pub fn wigner(q: f64, p: f64, a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> f64 {
    let xi = xi_nu(u, bath.nu);
    let t = u.time(bath);
    let r = (2.0 * a * u.decay()).sqrt();
    let dq = q - r * (phi - t).cos();
    let dp = p - r * (phi - t).sin();
    2.0 * xi * (-xi * (dq * dq + dp * dp)).exp()
}

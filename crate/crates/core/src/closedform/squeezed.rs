//! Initial squeezed state: eigenstate of cosh(rho) a + sinh(rho) a^dag with
//! eigenvalue sqrt(a) e^{i phi}.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::measures::MeasureRecord;
use crate::model::{squeeze_factor, BathParams, CompactTime};
use crate::quad::adaptive_gauss_legendre;

pub fn mu(rho: f64, u: CompactTime, bath: &BathParams) -> f64 {
    let uv = u.value();
    let nu = bath.nu;
    let s2 = rho.sinh().powi(2);
    ((1.0 + 2.0 * uv * nu).powi(2) + 4.0 * uv * u.decay() * (1.0 + 2.0 * nu) * s2).sqrt().recip()
}

/// Coefficients of G(z) = (f - b z + c z^2)^{-1/2} exp[-a(1-u)(F - B z + C z^2)/(f - b z + c z^2)].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedGFCoefficients {
    pub f: f64,
    pub b: f64,
    pub c: f64,
    pub f_: f64,
    pub b_: f64,
    pub c_: f64,
    pub r: f64,
}

pub fn gf_coeffs(phi: f64, rho: f64, u: CompactTime, nu: f64) -> SqueezedGFCoefficients {
    let uv = u.value();
    let w = u.decay();
    let s2 = rho.sinh().powi(2);
    let r = squeeze_factor(phi, rho);
    let unu = uv * nu;
    SqueezedGFCoefficients {
        f: (1.0 + unu).powi(2) + w * (1.0 + uv + 2.0 * unu) * s2,
        b: 2.0 * unu * (1.0 + unu) + 2.0 * uv * (1.0 + 2.0 * nu) * w * s2,
        c: unu * unu - w * (w - 2.0 * unu) * s2,
        f_: 0.5 * (w + r * (1.0 + uv + 2.0 * unu)),
        b_: w + r * uv * (1.0 + 2.0 * nu),
        c_: 0.5 * (w - r * (w - 2.0 * unu)),
        r,
    }
}

pub fn diag_gf(a: f64, phi: f64, rho: f64, u: CompactTime, nu: f64, z: Complex64) -> Complex64 {
    let k = gf_coeffs(phi, rho, u, nu);
    let den = k.f - k.b * z + k.c * z * z;
    let num = k.f_ - k.b_ * z + k.c_ * z * z;
    den.sqrt().inv() * (-a * u.decay() * num / den).exp()
}

pub fn p0(a: f64, phi: f64, rho: f64, u: CompactTime, bath: &BathParams) -> f64 {
    let k = gf_coeffs(phi, rho, u, bath.nu);
    k.f.sqrt().recip() * (-a * u.decay() * k.f_ / k.f).exp()
}

/// Diagonal purity from its integral representation over a dummy angle on
/// [0, pi/2], evaluated with adaptive Gauss-Legendre panels.
pub fn lambda(a: f64, phi: f64, rho: f64, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let k = gf_coeffs(phi, rho, u, bath.nu);
    let uv = u.value();
    let w = u.decay();
    let nu = bath.nu;
    let s2 = rho.sinh().powi(2);
    let sh2r = (2.0 * rho).sinh();
    let r = k.r;
    let v = r * (1.0 + 2.0 * uv * nu) + w * (r - 1.0 + 4.0 * r * s2);
    let y = 4.0 * uv * k.b_ * (nu * (1.0 + uv * nu) + w * (1.0 + 2.0 * nu) * s2) + 2.0 * w * (1.0 - r - 2.0 * r * s2);
    let integrand = |x: f64| {
        let sn2 = x.sin().powi(2);
        let phi_x = (1.0 + 2.0 * k.b * sn2).powi(2) + (w * sh2r * (2.0 * x).sin()).powi(2);
        2.0 / std::f64::consts::PI / phi_x.sqrt() * (-4.0 * a * w * (v + y * sn2) * sn2 / phi_x).exp()
    };
    adaptive_gauss_legendre(integrand, 0.0, FRAC_PI_2, 4, 1e-10, 14)
}

pub fn measures(a: f64, phi: f64, rho: f64, u: CompactTime, bath: &BathParams) -> Result<MeasureRecord> {
    let zero = CompactTime::new(0.0)?;
    Ok(MeasureRecord::assemble(
        u,
        mu(rho, u, bath),
        lambda(a, phi, rho, u, bath)?,
        (1.0, lambda(a, phi, rho, zero, bath)?),
        p0(a, phi, rho, u, bath),
    ))
}

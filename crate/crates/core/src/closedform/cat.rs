//! Initial cat state N (|alpha> + e^{i phi} |-alpha>), alpha = sqrt(a) real.

use crate::closedform::coherent;
use crate::error::{domain, Result};
use crate::measures::MeasureRecord;
use crate::model::{xi_nu, BathParams, CompactTime, InitialState};
use crate::specfun::{bessel_i0_scaled, bessel_j0};

fn check(a: f64, phi: f64) -> Result<f64> {
    InitialState::Cat { a, phi_cat: phi }.validate()?;
    Ok(InitialState::cat_norm2(a, phi))
}

pub fn mu(a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let n2 = check(a, phi)?;
    let xi = xi_nu(u, bath.nu);
    let uv = u.value();
    let e2 = (-2.0 * a).exp();
    let bracket = 1.0
        + 4.0 * phi.cos() * e2
        + (2.0 * phi).cos() * e2 * e2
        + (-4.0 * a * u.decay() * xi).exp()
        + (-4.0 * a * uv * (1.0 + 2.0 * bath.nu) * xi).exp();
    Ok(2.0 * n2 * n2 * xi * bracket)
}

/// Diagonal purity; the I0 e^{eta - 4a} product is formed from the scaled I0.
pub fn lambda(a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let n2 = check(a, phi)?;
    let xi = xi_nu(u, bath.nu);
    let eta = 2.0 * a * u.decay() * xi;
    let i0e = bessel_i0_scaled(eta)?;
    let c = phi.cos();
    let bessel_part = i0e * (1.0 + c * c * (2.0 * eta - 4.0 * a).exp());
    let cross = 2.0 * c * (-2.0 * a).exp() * bessel_j0(eta)?;
    Ok(4.0 * n2 * n2 * xi * (bessel_part + cross))
}

pub fn p0(a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let n2 = check(a, phi)?;
    let unu = u.value() * bath.nu;
    let base = (-a * u.decay() / (1.0 + unu)).exp() / (1.0 + unu);
    let interference = 1.0 + phi.cos() * (-2.0 * a * u.value() * (1.0 + bath.nu) / (1.0 + unu)).exp();
    Ok(2.0 * n2 * base * interference)
}

/// p_n = 2 N^2 [p_n^coh(a) + cos phi e^{-2a} p_n^coh(-a)].
pub fn pn(n_max: usize, a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> Result<Vec<f64>> {
    let n2 = check(a, phi)?;
    let plus = coherent::pn(n_max, a, u, bath);
    let minus = coherent::pn(n_max, -a, u, bath);
    let w = phi.cos() * (-2.0 * a).exp();
    Ok(plus.iter().zip(&minus).map(|(x, y)| 2.0 * n2 * (x + w * y)).collect())
}

pub fn measures(a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> Result<MeasureRecord> {
    let zero = CompactTime::new(0.0)?;
    let initial = (mu(a, phi, zero, bath)?, lambda(a, phi, zero, bath)?);
    Ok(MeasureRecord::assemble(u, mu(a, phi, u, bath)?, lambda(a, phi, u, bath)?, initial, p0(a, phi, u, bath)?))
}

/// Wigner function of the evolved cat state.
pub fn wigner(q: f64, p: f64, a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let n2 = check(a, phi)?;
    let xi = xi_nu(u, bath.nu);
    let t = u.time(bath);
    let (s, c) = t.sin_cos();
    let qt = q * c - p * s;
    let pt = p * c + q * s;
    let k = xi * (8.0 * a * u.decay()).sqrt();
    let gauss = (-xi * (q * q + p * p)).exp();
    // cosh written as a sum of exponentials to keep the product finite.
    let arg = -2.0 * a * u.decay() * xi;
    let cosh_part = 0.5 * ((arg + k * qt).exp() + (arg - k * qt).exp());
    let interference = (-2.0 * a * (1.0 + 2.0 * bath.nu) * u.value() * xi).exp() * (k * pt + phi).cos();
    Ok(4.0 * n2 * xi * gauss * (cosh_part + interference))
}

/// Equal-weight mixture of the two coherent components.
pub fn mixture_wigner(q: f64, p: f64, a: f64, u: CompactTime, bath: &BathParams) -> f64 {
    let xi = xi_nu(u, bath.nu);
    let t = u.time(bath);
    let qt = q * t.cos() - p * t.sin();
    let k = xi * (8.0 * a * u.decay()).sqrt();
    let base = -xi * (q * q + p * p + 2.0 * a * u.decay());
    2.0 * xi * 0.5 * ((base + k * qt).exp() + (base - k * qt).exp())
}

/// Accompanying coherence: normalized squared distance between the cat Wigner
/// function and the coherent mixture.
pub fn accompanying_coherence(a: f64, phi: f64, u: CompactTime, bath: &BathParams) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain("accompanying coherence needs a > 0"));
    }
    check(a, phi)?;
    let xi = xi_nu(u, bath.nu);
    let c2 = phi.cos().powi(2);
    let e4 = (-4.0 * a).exp();
    let num = -(-4.0 * a * u.decay() * xi).exp_m1();
    let den = (1.0 - c2 * e4) * -(-4.0 * a).exp_m1();
    let tail = (-4.0 * a * u.value() * (1.0 + 2.0 * bath.nu) * xi).exp() - c2 * e4;
    Ok(xi * num / den * tail)
}

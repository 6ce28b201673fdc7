//! Initial Fock state |M>.

use crate::error::Result;
use crate::measures::MeasureRecord;
use crate::model::{BathParams, CompactTime};
use crate::quad::periodic_mean;
use crate::specfun::legendre;

pub fn p0(m: u32, u: CompactTime, bath: &BathParams) -> f64 {
    let uv = u.value();
    let nu = bath.nu;
    (uv * (1.0 + nu)).powi(m as i32) / (1.0 + nu * uv).powi(m as i32 + 1)
}

/// Diagonal purity (equal to the total purity, the state stays diagonal).
///
/// Legendre closed form; near u = 1/(2(1+nu)) the prefactor vanishes while the
/// argument diverges, so the angular integral is used there instead.
pub fn lambda(m: u32, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let uv = u.value();
    let nu = bath.nu;
    let w = (1.0 - 2.0 * uv * (1.0 + nu)).abs();
    if w < 1e-6 {
        return lambda_quadrature(m, u, bath);
    }
    let x = (u.decay().powi(2) + (uv * (1.0 + 2.0 * nu)).powi(2)) / ((1.0 + 2.0 * uv * nu) * w);
    Ok(w.powi(m as i32) / (1.0 + 2.0 * uv * nu).powi(m as i32 + 1) * legendre(m as usize, x)?)
}

/// Mean over phi of (A + b cos phi)^M / (c - d cos phi)^{M+1}.
pub fn lambda_quadrature(m: u32, u: CompactTime, bath: &BathParams) -> Result<f64> {
    let uv = u.value();
    let nu = bath.nu;
    let g = u.decay() - uv * nu;
    let big_a = (uv * (1.0 + nu)).powi(2) + g * g;
    let b = 2.0 * uv * (1.0 + nu) * g;
    let c = (nu * uv).powi(2) + (1.0 + uv * nu).powi(2);
    let d = 2.0 * uv * nu * (1.0 + uv * nu);
    let mi = m as i32;
    periodic_mean(|t| (big_a + b * t.cos()).powi(mi) / (c - d * t.cos()).powi(mi + 1), 512, 1e-13, 12)
}

pub fn measures(m: u32, u: CompactTime, bath: &BathParams) -> Result<MeasureRecord> {
    let lam = lambda(m, u, bath)?;
    Ok(MeasureRecord::assemble(u, lam, lam, (1.0, 1.0), p0(m, u, bath)))
}

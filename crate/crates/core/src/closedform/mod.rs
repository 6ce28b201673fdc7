//! Analytic results for the four state families.
//!
//! Each submodule exposes `mu`, `lambda`, `p0` and `measures` for its family;
//! the functions here dispatch on [`InitialState`].

pub mod cat;
pub mod coherent;
pub mod fock;
pub mod gf;
pub mod squeezed;

use num_complex::Complex64;

pub use gf::{diagonal_purity_from_gf, evolve_diag_gf, gaussian_diag_gf, GaussianDiagGFParams};
pub use squeezed::SqueezedGFCoefficients;

use crate::error::Result;
use crate::measures::MeasureRecord;
use crate::model::{BathParams, CompactTime, InitialState};

/// Full measure record of `state` at compact time `u`.
pub fn measures(state: &InitialState, u: CompactTime, bath: &BathParams) -> Result<MeasureRecord> {
    state.validate()?;
    match *state {
        InitialState::Coherent { a, .. } => coherent::measures(a, u, bath),
        InitialState::Cat { a, phi_cat } => cat::measures(a, phi_cat, u, bath),
        InitialState::Squeezed { a, phi, rho } => squeezed::measures(a, phi, rho, u, bath),
        InitialState::Fock { m } => fock::measures(m, u, bath),
    }
}

/// Total purity Tr rho^2.
pub fn mu(state: &InitialState, u: CompactTime, bath: &BathParams) -> Result<f64> {
    state.validate()?;
    match *state {
        InitialState::Coherent { .. } => Ok(coherent::mu(u, bath)),
        InitialState::Cat { a, phi_cat } => cat::mu(a, phi_cat, u, bath),
        InitialState::Squeezed { rho, .. } => Ok(squeezed::mu(rho, u, bath)),
        InitialState::Fock { m } => fock::lambda(m, u, bath),
    }
}

/// Diagonal purity sum_n p_n^2.
pub fn lambda(state: &InitialState, u: CompactTime, bath: &BathParams) -> Result<f64> {
    state.validate()?;
    match *state {
        InitialState::Coherent { a, .. } => coherent::lambda(a, u, bath),
        InitialState::Cat { a, phi_cat } => cat::lambda(a, phi_cat, u, bath),
        InitialState::Squeezed { a, phi, rho } => squeezed::lambda(a, phi, rho, u, bath),
        InitialState::Fock { m } => fock::lambda(m, u, bath),
    }
}

/// Evolved diagonal generating function G(z, u).
pub fn diag_gf(state: &InitialState, u: CompactTime, bath: &BathParams, z: Complex64) -> Result<Complex64> {
    state.validate()?;
    let one = Complex64::new(1.0, 0.0);
    Ok(match *state {
        InitialState::Coherent { a, .. } => evolve_diag_gf(|w| (a * (w - one)).exp(), u, bath.nu, z),
        InitialState::Cat { a, phi_cat } => {
            let n2 = InitialState::cat_norm2(a, phi_cat);
            let c = phi_cat.cos();
            evolve_diag_gf(|w| 2.0 * n2 * ((a * (w - one)).exp() + c * (-a * (w + one)).exp()), u, bath.nu, z)
        }
        InitialState::Squeezed { a, phi, rho } => squeezed::diag_gf(a, phi, rho, u, bath.nu, z),
        InitialState::Fock { m } => evolve_diag_gf(|w| w.powu(m), u, bath.nu, z),
    })
}

//! Coherence and thermalization measures for a damped harmonic oscillator.
//!
//! The oscillator obeys the standard Lindblad master equation with damping
//! rate `gamma` and thermal occupation `nu` (units with hbar = omega = 1).
//! [`closedform`] evaluates the analytic results for coherent, cat, squeezed
//! and Fock initial states; [`oracle`] integrates the master equation in a
//! truncated Fock basis so every closed form can be checked independently.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod error;
pub mod measures;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod propagator;
pub mod quad;
pub mod specfun;
pub mod timescales;

pub use error::{Error, Result};
pub use measures::MeasureRecord;
pub use model::{BathParams, CompactTime, GaussianState, InitialState};

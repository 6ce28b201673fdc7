//! State-independent measures built from purities and level populations.

use crate::error::{domain, Error, Result};
use crate::model::CompactTime;

/// One time point of a trajectory. `coherence` and `thermalization` are
/// `None` where the measure is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureRecord {
    pub u: f64,
    pub mu: f64,
    pub lambda: f64,
    pub coherence: Option<f64>,
    pub thermalization: Option<f64>,
    pub p0: f64,
    pub s: f64,
}

impl MeasureRecord {
    /// Assembles a record from the raw quantities. `initial` is (mu(0), lambda(0)).
    pub fn assemble(u: CompactTime, mu: f64, lambda: f64, initial: (f64, f64), p0: f64) -> Self {
        MeasureRecord {
            u: u.value(),
            mu,
            lambda,
            coherence: coherence(mu, lambda, initial.0, initial.1).ok(),
            thermalization: thermalization(mu, p0, 0.0).ok(),
            p0,
            s: linear_entropy(mu),
        }
    }
}

const UNDEFINED_TOL: f64 = 1e-14;

/// C = (mu - lambda) / (mu_0 - lambda_0).
pub fn coherence(mu_t: f64, lambda_t: f64, mu_0: f64, lambda_0: f64) -> Result<f64> {
    let den = mu_0 - lambda_0;
    if den <= UNDEFINED_TOL {
        return Err(Error::CoherenceUndefined);
    }
    Ok((mu_t - lambda_t) / den)
}

/// D = (1 - mu) / sqrt((1 + mu - 2 p0)(1 + mu - 2 pf)).
pub fn thermalization(mu: f64, p0: f64, pf: f64) -> Result<f64> {
    let x = 1.0 + mu - 2.0 * p0;
    let y = 1.0 + mu - 2.0 * pf;
    if x <= UNDEFINED_TOL || y <= UNDEFINED_TOL {
        return Err(Error::ThermalizationUndefined);
    }
    Ok((1.0 - mu) / (x * y).sqrt())
}

pub fn linear_entropy(mu: f64) -> f64 {
    1.0 - mu
}

/// M equally spaced levels at Boltzmann factor xi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquidistantSpectrum {
    pub levels: u32,
    pub xi: f64,
}

/// Equilibrium purity and ground/top populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquidistantEquilibrium {
    pub mu: f64,
    pub p0: f64,
    pub pf: f64,
}

pub fn equidistant_equilibrium(spec: EquidistantSpectrum) -> Result<EquidistantEquilibrium> {
    let EquidistantSpectrum { levels, xi } = spec;
    if !(xi > 0.0 && xi < 1.0) {
        return Err(domain(format!("Boltzmann factor must lie in (0, 1), got {xi}")));
    }
    if levels < 2 {
        return Err(domain("need at least two levels"));
    }
    let m = levels as f64;
    // 1 - xi^M without cancellation for xi close to 1.
    let one_minus_xm = -(m * xi.ln()).exp_m1();
    let xm = xi.powf(m);
    Ok(EquidistantEquilibrium {
        mu: (1.0 - xi) * (1.0 + xm) / ((1.0 + xi) * one_minus_xm),
        p0: (1.0 - xi) / one_minus_xm,
        pf: xi.powf(m - 1.0) * (1.0 - xi) / one_minus_xm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherence_basics() {
        assert_eq!(coherence(0.8, 0.3, 0.8, 0.3).unwrap(), 1.0);
        assert_eq!(coherence(0.4, 0.4, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(coherence(0.4, 0.4, 1.0, 1.0), Err(Error::CoherenceUndefined));
    }

    #[test]
    fn thermalization_basics() {
        assert_eq!(thermalization(1.0, 0.3, 0.0).unwrap(), 0.0);
        assert_eq!(thermalization(1.0, 1.0, 0.0), Err(Error::ThermalizationUndefined));
        let nu: f64 = 0.37;
        let d = thermalization(1.0 / (1.0 + 2.0 * nu), 1.0 / (1.0 + nu), 0.0).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_level_equilibrium() {
        let e = equidistant_equilibrium(EquidistantSpectrum { levels: 2, xi: 0.5 }).unwrap();
        assert!((e.p0 - 2.0 / 3.0).abs() < 1e-15);
        assert!((e.pf - 1.0 / 3.0).abs() < 1e-15);
        assert!((e.mu - 5.0 / 9.0).abs() < 1e-15);
        assert!(equidistant_equilibrium(EquidistantSpectrum { levels: 2, xi: 1.0 }).is_err());
    }
}

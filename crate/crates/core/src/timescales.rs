//! Characteristic times of decoherence and thermalization, and plateau
//! detection on sampled trajectories.

use crate::closedform;
use crate::error::{domain, Error, Result};
use crate::measures::MeasureRecord;
use crate::model::{classical_energy, fluctuation_energy, mean_photons, BathParams, CompactTime, InitialState};

/// Primary purity-loss time (4 gamma)^{-1} [nu + (1 + 2 nu) sigma_a]^{-1}.
/// Infinite when the purity does not decrease to first order.
pub fn t1(state: &InitialState, bath: &BathParams) -> Result<f64> {
    let sigma_a = fluctuation_energy(state)?.sigma_a;
    let rate = bath.nu + (1.0 + 2.0 * bath.nu) * sigma_a;
    if rate <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (4.0 * bath.gamma * rate))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TStar {
    pub time: f64,
    /// False when a <= 1 + 2 nu, where the estimate does not apply.
    pub in_regime: bool,
}

/// Horizon (2 gamma)^{-1} ln[(a + 2 nu) / (1 + 2 nu)] up to which the purity
/// tracks the coherence.
pub fn t_star(a: f64, bath: &BathParams) -> TStar {
    let nu = bath.nu;
    TStar { time: ((a + 2.0 * nu) / (1.0 + 2.0 * nu)).ln() / (2.0 * bath.gamma), in_regime: a > 1.0 + 2.0 * nu }
}

fn mu_eq(bath: &BathParams) -> f64 {
    1.0 / (1.0 + 2.0 * bath.nu)
}

/// Analytic estimate of the time at which C falls to beta mu_eq.
pub fn t_d_estimate(state: &InitialState, bath: &BathParams, beta: f64) -> Result<f64> {
    let inv = 0.5 / bath.gamma;
    let me = mu_eq(bath);
    match *state {
        InitialState::Coherent { a, .. } => Ok(inv * (2.0 * a * me / beta).ln()),
        InitialState::Cat { a, .. } => Ok(inv * (a * me * (2.0 / beta).sqrt()).ln()),
        InitialState::Squeezed { a, rho, .. } if a > 0.0 || rho == 0.0 => {
            Ok(inv * (2.0 * classical_energy(state)? / beta).ln())
        }
        InitialState::Squeezed { rho, .. } => Ok(inv * ((2.0 * rho).sinh() / (2.0 * beta.sqrt())).ln()),
        InitialState::Fock { .. } => Err(Error::CoherenceUndefined),
    }
}

/// Largest time at which C = beta mu_eq, from the closed-form coherence.
///
/// The curve is scanned in s = -ln(1 - u) = 2 gamma t (C need not be
/// monotone) and the last sign change is bisected to 1e-10 in u.
pub fn t_d_numeric(state: &InitialState, bath: &BathParams, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    let target = beta * mu_eq(bath);
    let f = |s: f64| -> Result<f64> {
        let u = CompactTime::from_decay((-s).exp())?;
        let c = closedform::measures(state, u, bath)?.coherence.ok_or(Error::CoherenceUndefined)?;
        Ok(c - target)
    };
    const S_MAX: f64 = 36.0;
    const STEPS: usize = 1440;
    let ds = S_MAX / STEPS as f64;
    if f(S_MAX)? > 0.0 {
        return Err(Error::NoRoot(format!("coherence still above {target} at 2 gamma t = {S_MAX}")));
    }
    let mut bracket = None;
    for i in (0..STEPS).rev() {
        let s = ds * i as f64;
        let v = f(s)?;
        if v > 0.0 {
            bracket = Some((s, s + ds));
            break;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| Error::NoRoot(format!("coherence never exceeds {target}")))?;
    while (hi - lo) * (-lo).exp() > 1e-10 && hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi) / (2.0 * bath.gamma))
}

/// Order-of-magnitude thermalization time, clamped at zero.
pub fn t_t_estimate(state: &InitialState, bath: &BathParams) -> Result<f64> {
    let nu = bath.nu;
    if !(nu > 0.0) {
        return Err(domain("thermalization time diverges at nu = 0"));
    }
    let inv2 = 0.5 / bath.gamma;
    let t = match *state {
        InitialState::Coherent { .. } | InitialState::Squeezed { .. } if classical_energy(state)? > 0.0 => {
            inv2 * (classical_energy(state)? / (nu * nu)).ln()
        }
        InitialState::Squeezed { rho, .. } => inv2 * ((rho.sinh().powi(2) + 0.5) / nu).ln(),
        InitialState::Coherent { .. } => inv2 * (0.5 / nu).ln(),
        InitialState::Cat { .. } => inv2 * ((mean_photons(state)? + 0.5) / nu).ln(),
        InitialState::Fock { m } => ((m as f64 + 0.5) / nu.sqrt()).ln() / bath.gamma,
    };
    Ok(t.max(0.0))
}

/// Which measure a plateau search looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Mu,
    Lambda,
    Coherence,
    Thermalization,
    P0,
    Entropy,
}

impl Field {
    pub fn get(self, r: &MeasureRecord) -> Option<f64> {
        match self {
            Field::Mu => Some(r.mu),
            Field::Lambda => Some(r.lambda),
            Field::Coherence => r.coherence,
            Field::Thermalization => r.thermalization,
            Field::P0 => Some(r.p0),
            Field::Entropy => Some(r.s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub u_start: f64,
    pub u_end: f64,
    pub level: f64,
}

const PLATEAU_TOL: f64 = 0.05;
const PLATEAU_SPAN: f64 = 0.2;

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Longest run of consecutive samples whose values all lie within 5% of the
/// run's median and whose u-span is at least 0.2. Undefined values break runs.
/// Returns `None` for fewer than 100 samples or when no run qualifies.
pub fn detect_plateau(series: &[MeasureRecord], field: Field) -> Option<Plateau> {
    if series.len() < 100 {
        return None;
    }
    let vals: Vec<Option<f64>> = series.iter().map(|r| field.get(r)).collect();
    let mut best: Option<Plateau> = None;
    for i in 0..series.len() {
        let mut sorted: Vec<f64> = Vec::new();
        let mut last_ok: Option<(usize, f64)> = None;
        for j in i..series.len() {
            let Some(v) = vals[j] else { break };
            let pos = sorted.partition_point(|&x| x < v);
            sorted.insert(pos, v);
            let med = median(&sorted);
            let lo = sorted[0];
            let hi = sorted[sorted.len() - 1];
            let band = PLATEAU_TOL * med.abs();
            if med.abs() > 0.0 && hi - med <= band && med - lo <= band {
                last_ok = Some((j, med));
            }
        }
        if let Some((j, level)) = last_ok {
            let span = series[j].u - series[i].u;
            let better = best.is_none_or(|b| span > b.u_end - b.u_start);
            if span >= PLATEAU_SPAN && better {
                best = Some(Plateau { u_start: series[i].u, u_end: series[j].u, level });
            }
        }
    }
    best
}

/// All characteristic times for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimescaleReport {
    pub t1: f64,
    pub t_star: Option<TStar>,
    pub t_d_estimate: Option<f64>,
    pub t_d_numeric: Option<f64>,
    pub t_t_estimate: Option<f64>,
    pub beta: f64,
    pub plateau: Option<Plateau>,
}

/// Assembles a report; undefined entries are left empty. The plateau is
/// searched in the coherence and then the thermalization of `series`.
pub fn report(state: &InitialState, bath: &BathParams, beta: f64, series: &[MeasureRecord]) -> Result<TimescaleReport> {
    let a = match *state {
        InitialState::Coherent { a, .. } | InitialState::Cat { a, .. } => Some(a),
        InitialState::Squeezed { .. } => mean_photons(state).ok(),
        InitialState::Fock { .. } => None,
    };
    Ok(TimescaleReport {
        t1: t1(state, bath)?,
        t_star: a.map(|a| t_star(a, bath)),
        t_d_estimate: t_d_estimate(state, bath, beta).ok(),
        t_d_numeric: t_d_numeric(state, bath, beta).ok(),
        t_t_estimate: t_t_estimate(state, bath).ok(),
        beta,
        plateau: detect_plateau(series, Field::Coherence).or_else(|| detect_plateau(series, Field::Thermalization)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t1_values() {
        let bath = BathParams::new(1.0, 1.0).unwrap();
        assert_eq!(t1(&InitialState::Coherent { a: 3.0, phi: 0.0 }, &bath).unwrap(), 0.25);
        let cold = BathParams::new(1.0, 0.0).unwrap();
        assert!(t1(&InitialState::Coherent { a: 3.0, phi: 0.0 }, &cold).unwrap().is_infinite());
        let rho: f64 = 1.3;
        let got = t1(&InitialState::Squeezed { a: 0.0, phi: 0.0, rho }, &cold).unwrap();
        assert!((got - 1.0 / (4.0 * rho.sinh().powi(2))).abs() < 1e-14);
    }

    #[test]
    fn t_star_values() {
        let bath = BathParams::new(1.0, 0.0).unwrap();
        let ts = t_star(100.0, &bath);
        assert!((ts.time - 0.5 * 100f64.ln()).abs() < 1e-14 && ts.in_regime);
        assert!(!t_star(0.5, &bath).in_regime);
    }

    #[test]
    fn t_t_needs_temperature() {
        let bath = BathParams::new(1.0, 0.0).unwrap();
        assert!(t_t_estimate(&InitialState::Fock { m: 3 }, &bath).is_err());
    }
}

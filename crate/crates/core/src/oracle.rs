//! Brute-force reference: the master equation integrated in a truncated Fock
//! basis.
//!
//! The generator couples rho_{m,n} only to rho_{m+1,n+1} and rho_{m-1,n-1}, so
//! each diagonal band k = n - m is an independent tridiagonal linear system.
//! Bands are integrated with the implicit [`Sdirk4`] scheme because the band
//! spectrum spreads over roughly 2 gamma (1 + 2 nu) dim.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{thermalization, MeasureRecord};
use crate::model::{BathParams, CompactTime, InitialState};
use crate::ode::{Sdirk4, Tridiag};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Truncated density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(dim: usize) -> Self {
        DensityMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    /// |psi><psi| from the first `dim` amplitudes.
    pub fn from_pure(amplitudes: &[Complex64], dim: usize) -> Self {
        let mut rho = Self::zeros(dim);
        let c: Vec<Complex64> = (0..dim).map(|i| amplitudes.get(i).copied().unwrap_or(ZERO)).collect();
        for m in 0..dim {
            for n in 0..dim {
                rho.data[m * dim + n] = c[m] * c[n].conj();
            }
        }
        rho
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.data[m * self.dim + n]
    }

    pub fn set(&mut self, m: usize, n: usize, v: Complex64) {
        self.data[m * self.dim + n] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// Tr rho^2 for Hermitian rho.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for m in 0..self.dim {
            for n in 0..self.dim {
                e = e.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        e
    }

    /// Entries of the band k = n - m, indexed by m.
    pub fn band(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim - k).map(|m| self.get(m, m + k)).collect()
    }

    fn set_band(&mut self, k: usize, x: &[Complex64]) {
        for (m, v) in x.iter().enumerate() {
            self.set(m, m + k, *v);
            if k > 0 {
                self.set(m + k, m, v.conj());
            }
        }
    }

    fn offdiagonal_weight(&self) -> f64 {
        let mut s = 0.0;
        for m in 0..self.dim {
            for n in 0..self.dim {
                if m != n {
                    s += self.get(m, n).norm_sqr();
                }
            }
        }
        s
    }
}

const TAIL_TOL: f64 = 1e-12;

/// Smallest dim whose discarded initial population is below 1e-12.
pub fn initial_dim(state: &InitialState) -> Result<usize> {
    let c = state.amplitudes()?;
    let mut tail = 0.0;
    for (n, z) in c.iter().enumerate().rev() {
        tail += z.norm_sqr();
        if tail >= TAIL_TOL {
            return Ok(n + 1);
        }
    }
    Ok(1)
}

/// Default truncation: initial tail plus the length over which the thermal
/// distribution nu^n / (1+nu)^{n+1} falls below 1e-12.
pub fn default_dim(state: &InitialState, bath: &BathParams) -> Result<usize> {
    let thermal = if bath.nu > 0.0 { (TAIL_TOL.ln() / (bath.nu / (1.0 + bath.nu)).ln()).ceil() as usize } else { 0 };
    Ok(initial_dim(state)? + thermal + 2)
}

/// Pure initial state truncated to `dim` levels.
pub fn build_state(state: &InitialState, dim: usize) -> Result<DensityMatrix> {
    let c = state.amplitudes()?;
    let kept: f64 = c.iter().take(dim).map(|z| z.norm_sqr()).sum();
    let tail = (1.0 - kept).max(0.0);
    if tail >= TAIL_TOL {
        return Err(Error::InsufficientTruncation { tail, suggested_dim: initial_dim(state)? });
    }
    Ok(DensityMatrix::from_pure(&c, dim))
}

/// Generator of band k in a space of `dim` levels, acting on x_m = rho_{m, m+k}.
pub fn band_generator(dim: usize, k: usize, bath: &BathParams, interaction_picture: bool) -> Tridiag {
    let len = dim - k;
    let g = bath.gamma;
    let nu = bath.nu;
    let rot = if interaction_picture { 0.0 } else { k as f64 };
    let mut lower = vec![ZERO; len];
    let mut diag = vec![ZERO; len];
    let mut upper = vec![ZERO; len];
    for m in 0..len {
        let mf = m as f64;
        let nf = (m + k) as f64;
        diag[m] = Complex64::new(-g * (1.0 + nu) * (mf + nf) - g * nu * (mf + nf + 2.0), rot);
        if m + 1 < len {
            upper[m] = Complex64::new(2.0 * g * (1.0 + nu) * ((mf + 1.0) * (nf + 1.0)).sqrt(), 0.0);
        }
        if m > 0 {
            lower[m] = Complex64::new(2.0 * g * nu * (mf * nf).sqrt(), 0.0);
        }
    }
    Tridiag { lower, diag, upper }
}

fn solver() -> Sdirk4 {
    Sdirk4 { rtol: 1e-10, atol: 1e-13, h_init: 1e-4 }
}

fn check_drift(before: f64, after: f64) -> Result<()> {
    let drift = (after - before).abs();
    if drift > 1e-8 {
        Err(Error::IntegrationQuality { drift })
    } else {
        Ok(())
    }
}

/// Integrates the master equation from `rho0` over time `t`. With
/// `interaction_picture` the free rotation is dropped (it leaves every
/// implemented measure unchanged).
pub fn evolve_master(
    rho0: &DensityMatrix,
    t: f64,
    bath: &BathParams,
    interaction_picture: bool,
) -> Result<DensityMatrix> {
    let dim = rho0.dim;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let bands: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|k| {
            let l = band_generator(dim, k, bath, interaction_picture);
            let mut x = rho0.band(k);
            solver().integrate(&l, &mut x, &[t], |_, _| {})?;
            Ok(x)
        })
        .collect::<Result<_>>()?;
    let mut rho = DensityMatrix::zeros(dim);
    for (k, x) in bands.iter().enumerate() {
        rho.set_band(k, x);
    }
    check_drift(rho0.trace(), rho.trace())?;
    Ok(rho)
}

/// Integrates the population equations
/// dp_n/dt = 2 gamma (1+nu) [(n+1) p_{n+1} - n p_n] + 2 gamma nu [n p_{n-1} - (n+1) p_n]
/// for each time in `ts` (ascending).
pub fn evolve_diagonal(p0: &[f64], ts: &[f64], bath: &BathParams) -> Result<Vec<Vec<f64>>> {
    let n = p0.len();
    let g2 = 2.0 * bath.gamma;
    let nu = bath.nu;
    let c = |v: f64| Complex64::new(v, 0.0);
    let mut lower = vec![ZERO; n];
    let mut diag = vec![ZERO; n];
    let mut upper = vec![ZERO; n];
    for i in 0..n {
        let nf = i as f64;
        diag[i] = c(-g2 * (1.0 + nu) * nf - g2 * nu * (nf + 1.0));
        if i + 1 < n {
            upper[i] = c(g2 * (1.0 + nu) * (nf + 1.0));
        }
        if i > 0 {
            lower[i] = c(g2 * nu * nf);
        }
    }
    let l = Tridiag { lower, diag, upper };
    let mut x: Vec<Complex64> = p0.iter().map(|&v| c(v)).collect();
    let mut out = Vec::with_capacity(ts.len());
    solver().integrate(&l, &mut x, ts, |_, y| out.push(y.iter().map(|z| z.re).collect::<Vec<f64>>()))?;
    let before: f64 = p0.iter().sum();
    for p in &out {
        check_drift(before, p.iter().sum())?;
    }
    Ok(out)
}

/// Measures of `rho` relative to the initial state `rho0`. The coherence uses
/// the off-diagonal weights directly.
pub fn measures_from_rho(rho: &DensityMatrix, rho0: &DensityMatrix, u: CompactTime) -> MeasureRecord {
    let mu = rho.purity();
    let lambda: f64 = rho.populations().iter().map(|p| p * p).sum();
    let w0 = rho0.offdiagonal_weight();
    let coherence = if w0 < 1e-14 { None } else { Some(rho.offdiagonal_weight() / w0) };
    let p0 = rho.get(0, 0).re;
    MeasureRecord {
        u: u.value(),
        mu,
        lambda,
        coherence,
        thermalization: thermalization(mu, p0, 0.0).ok(),
        p0,
        s: 1.0 - mu,
    }
}

/// Oracle measures along a trajectory without storing the density matrix.
///
/// Every band is integrated through all requested times and contributes its
/// squared norm; memory stays O(dim). Bands whose initial squared norm is
/// below 1e-28 are skipped.
pub fn trajectory_measures(
    state: &InitialState,
    bath: &BathParams,
    us: &[CompactTime],
    dim: Option<usize>,
    interaction_picture: bool,
) -> Result<Vec<MeasureRecord>> {
    let dim = match dim {
        Some(d) => d,
        None => default_dim(state, bath)?,
    };
    let c = state.amplitudes()?;
    let kept: f64 = c.iter().take(dim).map(|z| z.norm_sqr()).sum();
    if 1.0 - kept >= TAIL_TOL {
        return Err(Error::InsufficientTruncation { tail: 1.0 - kept, suggested_dim: initial_dim(state)? });
    }
    let amp: Vec<Complex64> = (0..dim).map(|i| c.get(i).copied().unwrap_or(ZERO)).collect();
    let ts: Vec<f64> = us.iter().map(|u| u.time(bath)).collect();
    let nt = ts.len();

    struct BandResult {
        weight0: f64,
        weights: Vec<f64>,
        pops: Option<Vec<Vec<f64>>>,
    }

    let results: Vec<BandResult> = (0..dim)
        .into_par_iter()
        .map(|k| {
            let mut x: Vec<Complex64> = (0..dim - k).map(|m| amp[m] * amp[m + k].conj()).collect();
            let weight0: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            if k > 0 && weight0 < 1e-28 {
                return Ok(BandResult { weight0, weights: vec![0.0; nt], pops: None });
            }
            let l = band_generator(dim, k, bath, interaction_picture);
            let mut weights = vec![0.0; nt];
            let mut pops = if k == 0 { Some(Vec::with_capacity(nt)) } else { None };
            solver().integrate(&l, &mut x, &ts, |i, y| {
                weights[i] = y.iter().map(|z| z.norm_sqr()).sum();
                if let Some(p) = pops.as_mut() {
                    p.push(y.iter().map(|z| z.re).collect());
                }
            })?;
            Ok(BandResult { weight0, weights, pops })
        })
        .collect::<Result<_>>()?;

    let off0: f64 = 2.0 * results[1..].iter().map(|r| r.weight0).sum::<f64>();
    let pops = results[0].pops.as_ref().expect("band 0 is always integrated");
    let mut records = Vec::with_capacity(nt);
    for (i, u) in us.iter().enumerate() {
        let p = &pops[i];
        check_drift(kept, p.iter().sum())?;
        let lambda: f64 = p.iter().map(|v| v * v).sum();
        let off: f64 = 2.0 * results[1..].iter().map(|r| r.weights[i]).sum::<f64>();
        let mu = lambda + off;
        records.push(MeasureRecord {
            u: u.value(),
            mu,
            lambda,
            coherence: if off0 < 1e-14 { None } else { Some(off / off0) },
            thermalization: thermalization(mu, p[0], 0.0).ok(),
            p0: p[0],
            s: 1.0 - mu,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_state_is_projector() {
        let rho = build_state(&InitialState::Fock { m: 3 }, 10).unwrap();
        for m in 0..10 {
            for n in 0..10 {
                let want = if m == 3 && n == 3 { 1.0 } else { 0.0 };
                assert_eq!(rho.get(m, n), Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn truncation_error_suggests_dim() {
        let s = InitialState::Coherent { a: 20.0, phi: 0.0 };
        match build_state(&s, 10) {
            Err(Error::InsufficientTruncation { suggested_dim, .. }) => assert!(suggested_dim > 20),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let rho0 = build_state(&InitialState::Coherent { a: 1.0, phi: 0.2 }, 30).unwrap();
        let bath = BathParams::new(1.0, 1.0).unwrap();
        assert_eq!(evolve_master(&rho0, 0.0, &bath, true).unwrap(), rho0);
    }
}

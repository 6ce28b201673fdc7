//! Domain types: bath parameters, initial-state families, compact time and
//! Gaussian moment sets.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Damping rate and mean thermal occupation of the reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub gamma: f64,
    pub nu: f64,
}

impl BathParams {
    pub fn new(gamma: f64, nu: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(domain(format!("gamma must be positive, got {gamma}")));
        }
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(domain(format!("nu must be non-negative, got {nu}")));
        }
        Ok(BathParams { gamma, nu })
    }
}

/// The four families of pure initial states.
///
/// `a` is always |alpha|^2. Cat states take alpha = sqrt(a) real and
/// superpose |alpha> + e^{i phi_cat} |-alpha>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Coherent { a: f64, phi: f64 },
    Cat { a: f64, phi_cat: f64 },
    Squeezed { a: f64, phi: f64, rho: f64 },
    Fock { m: u32 },
}

impl InitialState {
    pub fn family(&self) -> &'static str {
        match self {
            InitialState::Coherent { .. } => "coherent",
            InitialState::Cat { .. } => "cat",
            InitialState::Squeezed { .. } => "squeezed",
            InitialState::Fock { .. } => "fock",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_a = |a: f64| {
            if a >= 0.0 && a.is_finite() {
                Ok(())
            } else {
                Err(domain(format!("a must be non-negative, got {a}")))
            }
        };
        match *self {
            InitialState::Coherent { a, phi } => {
                check_a(a)?;
                crate::error::check_finite(phi, "phi")
            }
            InitialState::Cat { a, phi_cat } => {
                check_a(a)?;
                crate::error::check_finite(phi_cat, "phi_cat")?;
                if 1.0 + phi_cat.cos() * (-2.0 * a).exp() < 1e-12 {
                    return Err(domain("odd cat with a = 0 has no normalization"));
                }
                Ok(())
            }
            InitialState::Squeezed { a, phi, rho } => {
                check_a(a)?;
                crate::error::check_finite(phi, "phi")?;
                crate::error::check_finite(rho, "rho")
            }
            InitialState::Fock { .. } => Ok(()),
        }
    }

    /// Squared cat normalization N^2 = 1 / (2 (1 + cos phi_cat e^{-2a})).
    pub fn cat_norm2(a: f64, phi_cat: f64) -> f64 {
        0.5 / (1.0 + phi_cat.cos() * (-2.0 * a).exp())
    }

    /// Normalized Fock amplitudes, long enough that the discarded norm is
    /// below 1e-30.
    pub fn amplitudes(&self) -> Result<Vec<Complex64>> {
        self.validate()?;
        let mut n = 64usize;
        loop {
            let mut c = self.raw_amplitudes(n);
            let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            let tail: f64 = c[3 * n / 4..].iter().map(|z| z.norm_sqr()).sum();
            if tail <= 1e-30 * total {
                let s = total.sqrt().recip();
                c.iter_mut().for_each(|z| *z *= s);
                let last = c.iter().rposition(|z| z.norm_sqr() > 1e-34).unwrap_or(0);
                c.truncate(last + 1);
                return Ok(c);
            }
            n *= 2;
            if n > 1 << 22 {
                return Err(Error::InsufficientTruncation { tail: tail / total, suggested_dim: n });
            }
        }
    }

    // Amplitudes up to a common factor, first n entries.
    fn raw_amplitudes(&self, n: usize) -> Vec<Complex64> {
        match *self {
            InitialState::Fock { m } => {
                let mut c = vec![Complex64::new(0.0, 0.0); n.max(m as usize + 1)];
                c[m as usize] = Complex64::new(1.0, 0.0);
                c
            }
            InitialState::Coherent { a, phi } => coherent_amplitudes(a, phi, n),
            InitialState::Cat { a, phi_cat } => {
                let plus = coherent_amplitudes(a, 0.0, n);
                let rel = Complex64::from_polar(1.0, phi_cat);
                plus.iter()
                    .enumerate()
                    .map(|(k, z)| if k % 2 == 0 { z * (1.0 + rel) } else { z * (1.0 - rel) })
                    .collect()
            }
            InitialState::Squeezed { a, phi, rho } => {
                // cosh(rho) sqrt(k+1) c_{k+1} + sinh(rho) sqrt(k) c_{k-1} = alpha c_k
                let alpha = Complex64::from_polar(a.sqrt(), phi);
                let (ch, sh) = (rho.cosh(), rho.sinh());
                let mut c = vec![Complex64::new(0.0, 0.0); n];
                c[0] = Complex64::new(1.0, 0.0);
                for k in 0..n - 1 {
                    let prev = if k > 0 { c[k - 1] } else { Complex64::new(0.0, 0.0) };
                    let kf = k as f64;
                    c[k + 1] = (alpha * c[k] - sh * kf.sqrt() * prev) / (ch * (kf + 1.0).sqrt());
                    if c[k + 1].norm() > 1e200 {
                        for z in c[..=k + 1].iter_mut() {
                            *z *= 1e-200;
                        }
                    }
                }
                c
            }
        }
    }
}

// e^{-a/2} alpha^k / sqrt(k!) in log space.
fn coherent_amplitudes(a: f64, phi: f64, n: usize) -> Vec<Complex64> {
    if a == 0.0 {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[0] = Complex64::new(1.0, 0.0);
        return c;
    }
    let half_ln_a = 0.5 * a.ln();
    let mut ln_fact = 0.0;
    (0..n)
        .map(|k| {
            if k > 0 {
                ln_fact += (k as f64).ln();
            }
            let mag = (-0.5 * a + k as f64 * half_ln_a - 0.5 * ln_fact).exp();
            Complex64::from_polar(mag, k as f64 * phi)
        })
        .collect()
}

/// Compact time u = 1 - e^{-2 gamma t} in [0, 1).
///
/// The complement 1 - u is stored separately so that it keeps full relative
/// precision when u is close to 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CompactTime {
    u: f64,
    w: f64,
}

impl CompactTime {
    pub fn new(u: f64) -> Result<Self> {
        if (0.0..1.0).contains(&u) {
            Ok(CompactTime { u, w: 1.0 - u })
        } else {
            Err(domain(format!("compact time must lie in [0, 1), got {u}")))
        }
    }

    /// From the complement w = 1 - u = e^{-2 gamma t} in (0, 1].
    pub fn from_decay(w: f64) -> Result<Self> {
        if w > 0.0 && w <= 1.0 {
            Ok(CompactTime { u: 1.0 - w, w })
        } else {
            Err(domain(format!("1 - u must lie in (0, 1], got {w}")))
        }
    }

    pub fn value(self) -> f64 {
        self.u
    }

    /// Physical time t = -ln(1 - u) / (2 gamma).
    pub fn time(self, bath: &BathParams) -> f64 {
        if self.w == 1.0 {
            0.0
        } else {
            -self.w.ln() / (2.0 * bath.gamma)
        }
    }

    /// e^{-2 gamma t} = 1 - u.
    pub fn decay(self) -> f64 {
        self.w
    }
}

pub fn compact_time(t: f64, bath: &BathParams) -> Result<CompactTime> {
    if !(t >= 0.0) {
        return Err(domain(format!("time must be non-negative, got {t}")));
    }
    let x = -2.0 * bath.gamma * t;
    let w = x.exp();
    if w == 0.0 {
        return Err(domain(format!("time {t} too large to represent 1 - u")));
    }
    Ok(CompactTime { u: -x.exp_m1(), w })
}

/// xi_nu(u) = 1 / (1 + 2 u nu).
pub fn xi_nu(u: CompactTime, nu: f64) -> f64 {
    1.0 / (1.0 + 2.0 * u.u * nu)
}

/// Fluctuation energy of the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fluctuation {
    /// sigma_a = <a^dag a> - |<a>|^2
    pub sigma_a: f64,
    /// E_0 = sigma_a + 1/2
    pub energy: f64,
}

pub fn fluctuation_energy(state: &InitialState) -> Result<Fluctuation> {
    state.validate()?;
    let sigma_a = match *state {
        InitialState::Coherent { .. } => 0.0,
        InitialState::Squeezed { rho, .. } => rho.sinh().powi(2),
        InitialState::Fock { m } => m as f64,
        InitialState::Cat { .. } => {
            let c = state.amplitudes()?;
            let n_mean: f64 = c.iter().enumerate().map(|(k, z)| k as f64 * z.norm_sqr()).sum();
            let a_mean: Complex64 =
                c.windows(2).enumerate().map(|(k, w)| w[0].conj() * w[1] * ((k + 1) as f64).sqrt()).sum();
            n_mean - a_mean.norm_sqr()
        }
    };
    Ok(Fluctuation { sigma_a, energy: sigma_a + 0.5 })
}

/// Mean photon number <a^dag a> of the initial state.
pub fn mean_photons(state: &InitialState) -> Result<f64> {
    state.validate()?;
    Ok(match *state {
        InitialState::Coherent { a, .. } => a,
        InitialState::Squeezed { rho, .. } => rho.sinh().powi(2) + classical_energy(state)?,
        InitialState::Fock { m } => m as f64,
        InitialState::Cat { .. } => {
            let c = state.amplitudes()?;
            c.iter().enumerate().map(|(k, z)| k as f64 * z.norm_sqr()).sum()
        }
    })
}

/// R = cosh 2rho - sinh 2rho cos 2phi.
pub fn squeeze_factor(phi: f64, rho: f64) -> f64 {
    (2.0 * rho).cosh() - (2.0 * rho).sinh() * (2.0 * phi).cos()
}

/// Initial classical energy (q0^2 + p0^2) / 2 = a R.
pub fn classical_energy(state: &InitialState) -> Result<f64> {
    match *state {
        InitialState::Coherent { a, .. } => Ok(a),
        InitialState::Squeezed { a, phi, rho } => Ok(a * squeeze_factor(phi, rho)),
        InitialState::Cat { .. } => Err(Error::UnsupportedState("cat")),
        InitialState::Fock { .. } => Err(Error::UnsupportedState("fock")),
    }
}

/// First and second moments of a Gaussian Wigner function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub qbar: f64,
    pub pbar: f64,
    pub sigma_q: f64,
    pub sigma_p: f64,
    pub sigma_qp: f64,
}

impl GaussianState {
    /// Invariant d = sigma_q sigma_p - sigma_qp^2 (>= 1/4).
    pub fn d(&self) -> f64 {
        self.sigma_q * self.sigma_p - self.sigma_qp * self.sigma_qp
    }

    /// Purity (4d)^{-1/2}.
    pub fn purity(&self) -> f64 {
        (4.0 * self.d()).sqrt().recip()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_q > 0.0 && self.sigma_p > 0.0) {
            return Err(domain("variances must be positive"));
        }
        if self.d() < 0.25 - 1e-12 {
            return Err(domain(format!("uncertainty bound violated: d = {}", self.d())));
        }
        Ok(())
    }
}

pub fn initial_gaussian(state: &InitialState) -> Result<GaussianState> {
    let (a, phi, rho) = match *state {
        InitialState::Coherent { a, phi } => (a, phi, 0.0),
        InitialState::Squeezed { a, phi, rho } => (a, phi, rho),
        InitialState::Cat { .. } => return Err(Error::UnsupportedState("cat")),
        InitialState::Fock { .. } => return Err(Error::UnsupportedState("fock")),
    };
    let r = (2.0 * a).sqrt();
    Ok(GaussianState {
        qbar: r * (-rho).exp() * phi.cos(),
        pbar: r * rho.exp() * phi.sin(),
        sigma_q: 0.5 * (-2.0 * rho).exp(),
        sigma_p: 0.5 * (2.0 * rho).exp(),
        sigma_qp: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_time_values() {
        let bath = BathParams::new(0.7, 1.0).unwrap();
        assert_eq!(compact_time(0.0, &bath).unwrap().value(), 0.0);
        let t = 2f64.ln() / (2.0 * bath.gamma);
        assert!((compact_time(t, &bath).unwrap().value() - 0.5).abs() < 1e-15);
        assert!(compact_time(-1.0, &bath).is_err());
        assert!(compact_time(30.0, &bath).unwrap().value() <= 1.0);
        assert!(compact_time(1e6, &bath).is_err());
        let u = CompactTime::new(0.3).unwrap();
        let back = compact_time(u.time(&bath), &bath).unwrap().value();
        assert!((back - 0.3).abs() < 1e-15);
    }

    #[test]
    fn xi_values() {
        assert_eq!(xi_nu(CompactTime::new(0.0).unwrap(), 10.0), 1.0);
        assert_eq!(xi_nu(CompactTime::new(0.5).unwrap(), 1.0), 0.5);
    }

    #[test]
    fn degenerate_odd_cat_rejected() {
        let s = InitialState::Cat { a: 0.0, phi_cat: std::f64::consts::PI };
        assert!(s.validate().is_err());
        assert!(InitialState::Cat { a: 0.0, phi_cat: 0.0 }.validate().is_ok());
    }

    #[test]
    fn energies() {
        let coh = InitialState::Coherent { a: 5.0, phi: 0.3 };
        let f = fluctuation_energy(&coh).unwrap();
        assert_eq!((f.sigma_a, f.energy), (0.0, 0.5));
        assert_eq!(classical_energy(&InitialState::Coherent { a: 10.0, phi: 1.2 }).unwrap(), 10.0);
        let sq = InitialState::Squeezed { a: 1.0, phi: std::f64::consts::FRAC_PI_2, rho: 3.0 };
        assert!((classical_energy(&sq).unwrap() - (6f64.cosh() + 6f64.sinh())).abs() < 1e-10);
        assert!(classical_energy(&InitialState::Fock { m: 2 }).is_err());
    }

    #[test]
    fn gaussian_initial_values() {
        let g = initial_gaussian(&InitialState::Squeezed { a: 2.0, phi: 0.0, rho: 0.5 }).unwrap();
        assert!((g.qbar - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(g.pbar, 0.0);
        let v = initial_gaussian(&InitialState::Squeezed { a: 0.0, phi: 0.0, rho: 1.0 }).unwrap();
        assert!((v.d() - 0.25).abs() < 1e-15);
    }
}

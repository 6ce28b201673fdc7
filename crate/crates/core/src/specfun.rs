//! Special functions used by the closed forms.
//!
//! Everything here works on real arguments only. Orthogonal polynomials use
//! their upward three-term recurrences; the Bessel functions switch between a
//! power series and asymptotic or recurrence-based evaluation.

use crate::error::{check_finite, Result};

/// Laguerre polynomial L_n(x).
///
/// (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}, with L_0 = 1 and L_1 = 1 - x.
pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    check_finite(x, "x")?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Legendre polynomial P_n(x).
///
/// (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}. Arguments outside [-1, 1] are
/// allowed; the recurrence follows the dominant solution there.
pub fn legendre(n: usize, x: f64) -> Result<f64> {
    check_finite(x, "x")?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

const I0_SERIES_MAX: f64 = 15.0;

/// e^{-|x|} I_0(x). Bounded by 1 for every finite x.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    check_finite(x, "x")?;
    let ax = x.abs();
    if ax <= I0_SERIES_MAX {
        Ok(i0_series(ax) * (-ax).exp())
    } else {
        Ok(i0e_asymptotic(ax))
    }
}

// Sum of (x/2)^{2k}/(k!)^2; all terms positive.
fn i0_series(ax: f64) -> f64 {
    let q = 0.25 * ax * ax;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

// e^{-x} I_0(x) ~ (2 pi x)^{-1/2} sum_k [(2k-1)!!]^2 / (k! (8x)^k), truncated
// at its smallest term.
fn i0e_asymptotic(ax: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (kf * 8.0 * ax);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * ax).sqrt()
}

const J0_SERIES_MAX: f64 = 8.0;
const J0_MILLER_MAX: f64 = 25.0;

/// Bessel function of the first kind J_0(x).
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_finite(x, "x")?;
    let ax = x.abs();
    Ok(if ax <= J0_SERIES_MAX {
        j0_series(ax)
    } else if ax <= J0_MILLER_MAX {
        j0_miller(ax)
    } else {
        j0_hankel(ax)
    })
}

fn j0_series(ax: f64) -> f64 {
    let q = 0.25 * ax * ax;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= -q / (k * k);
        sum += term;
        if term.abs() < 1e-18 {
            return sum;
        }
        k += 1.0;
    }
}

// Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from a start index well
// above x, normalized with J_0 + 2 sum J_{2k} = 1.
fn j0_miller(ax: f64) -> f64 {
    let start = (ax + 40.0 + 8.0 * ax.sqrt()) as usize;
    let start = start + (start & 1);
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut norm = 0.0;
    let mut j0 = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / ax * j - jp1;
        jp1 = j;
        j = jm1;
        if (k - 1) % 2 == 0 {
            norm += if k == 1 { j } else { 2.0 * j };
        }
        if k == 1 {
            j0 = j;
        }
        if j.abs() > 1e250 {
            jp1 *= 1e-250;
            j *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 / norm
}

// Hankel expansion J_0 = sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)]
// with m_k = [(2k-1)!!]^2 / (k! 8^k), P = 1 - m_2/x^2 + ..., Q = -m_1/x + m_3/x^3 - ...
fn j0_hankel(ax: f64) -> f64 {
    let z8 = 8.0 * ax;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    for k in 1..120 {
        let m = (2 * k - 1) as f64;
        let next = term * m * m / (k as f64 * z8);
        if next >= term {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q -= sign * term;
        } else {
            p += sign * term;
        }
        if term < 1e-18 {
            break;
        }
    }
    let chi = ax - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
}

//! Curve lists of the eight figures, evaluated on a u-grid.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use decoh_core::closedform::{self, cat};
use decoh_core::{BathParams, CompactTime, InitialState};

use crate::csv::{num, opt, tag, Table};
use crate::error::{usage, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Mu,
    Coherence,
    Thermalization,
    Accompanying,
}

impl Measure {
    pub fn label(self) -> &'static str {
        match self {
            Measure::Mu => "mu",
            Measure::Coherence => "C",
            Measure::Thermalization => "D",
            Measure::Accompanying => "F",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub column: String,
    pub state: InitialState,
    pub nu: f64,
    pub measure: Measure,
}

fn curve(measure: Measure, state: InitialState, nu: f64, tag_: String) -> Curve {
    Curve { column: format!("{}_{tag_}", measure.label()), state, nu, measure }
}

fn mu_c_pairs(state: impl Fn() -> InitialState, nus: &[f64], tagger: impl Fn(f64) -> String) -> Vec<Curve> {
    nus.iter().flat_map(|&nu| [Measure::Mu, Measure::Coherence].map(|m| curve(m, state(), nu, tagger(nu)))).collect()
}

fn nu_tag(nu: f64) -> String {
    format!("nu{}", tag(nu))
}

/// Curves of figure `n`, in caption order.
pub fn curves(n: u8) -> Result<Vec<Curve>> {
    use Measure::*;
    let odd_cat = |a: f64| InitialState::Cat { a, phi_cat: PI };
    let squeezed = || InitialState::Squeezed { a: 1.0, phi: FRAC_PI_2, rho: 3.0 };
    let a_nu = |a: f64, nu: f64| format!("a{}_nu{}", tag(a), tag(nu));
    Ok(match n {
        1 => mu_c_pairs(|| InitialState::Coherent { a: 1.0, phi: 0.0 }, &[0.0, 1.0, 10.0], nu_tag),
        2 => mu_c_pairs(|| InitialState::Coherent { a: 10.0, phi: 0.0 }, &[0.0, 1.0, 10.0], nu_tag),
        3 => vec![
            curve(Mu, odd_cat(1.0), 0.0, a_nu(1.0, 0.0)),
            curve(Mu, odd_cat(10.0), 0.0, a_nu(10.0, 0.0)),
            curve(Coherence, odd_cat(10.0), 0.0, a_nu(10.0, 0.0)),
            curve(Coherence, odd_cat(1.0), 0.0, a_nu(1.0, 0.0)),
            curve(Mu, odd_cat(2.0), 5.0, a_nu(2.0, 5.0)),
            curve(Coherence, odd_cat(2.0), 5.0, a_nu(2.0, 5.0)),
        ],
        4 => [0.0, 1.0, 10.0]
            .iter()
            .map(|&nu| curve(Accompanying, InitialState::Cat { a: 10.0, phi_cat: 0.0 }, nu, nu_tag(nu)))
            .collect(),
        5 => mu_c_pairs(squeezed, &[0.0, 2.0], nu_tag),
        6 => [(1.0, 0.01), (1.0, 10.0), (20.0, 0.01), (20.0, 10.0)]
            .iter()
            .map(|&(a, nu)| curve(Thermalization, odd_cat(a), nu, a_nu(a, nu)))
            .collect(),
        7 => [0.01, 2.0].iter().map(|&nu| curve(Thermalization, squeezed(), nu, nu_tag(nu))).collect(),
        8 => {
            let fock = |m: u32, nu: f64| {
                curve(Thermalization, InitialState::Fock { m }, nu, format!("fock_M{m}_nu{}", tag(nu)))
            };
            let coh = |a: f64, nu: f64| {
                let s = InitialState::Coherent { a, phi: 0.0 };
                curve(Thermalization, s, nu, format!("coherent_a{}_nu{}", tag(a), tag(nu)))
            };
            vec![
                fock(1, 10.0),
                fock(20, 10.0),
                fock(20, 0.01),
                coh(20.0, 10.0),
                fock(1, 0.01),
                coh(1.0, 0.01),
                coh(20.0, 0.01),
            ]
        }
        _ => return Err(usage(format!("no figure {n}; figures run from fig1 to fig8"))),
    })
}

fn value(c: &Curve, u: CompactTime) -> Result<Option<f64>> {
    let bath = BathParams::new(1.0, c.nu)?;
    if c.measure == Measure::Accompanying {
        let InitialState::Cat { a, phi_cat } = c.state else { unreachable!("accompanying coherence curves are cats") };
        return Ok(Some(cat::accompanying_coherence(a, phi_cat, u, &bath)?));
    }
    let r = closedform::measures(&c.state, u, &bath)?;
    Ok(match c.measure {
        Measure::Mu => Some(r.mu),
        Measure::Coherence => r.coherence,
        Measure::Thermalization => r.thermalization,
        Measure::Accompanying => unreachable!(),
    })
}

/// Figure data: `u`, optionally `tau = 2 gamma t`, then one column per curve.
pub fn figure_table(n: u8, us: &[f64], with_tau: bool) -> Result<Table> {
    let curves = curves(n)?;
    let mut header = vec!["u".to_string()];
    if with_tau {
        header.push("tau".to_string());
    }
    header.extend(curves.iter().map(|c| c.column.clone()));
    let mut table = Table::new(header);
    table.rows = us
        .par_iter()
        .map(|&u| {
            let ct = CompactTime::new(u)?;
            let mut row = vec![num(u)];
            if with_tau {
                row.push(num(0.0 - ct.decay().ln()));
            }
            for c in &curves {
                row.push(opt(value(c, ct)?));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| curves(n).unwrap().len()).collect();
        assert_eq!(counts, vec![6, 6, 6, 3, 4, 4, 2, 7]);
        assert!(curves(9).is_err());
    }

    #[test]
    fn fig1_starts_at_one() {
        let t = figure_table(1, &[0.0, 0.5], false).unwrap();
        let c = t.column("C_nu0").unwrap();
        assert_eq!(t.rows[0][c].parse::<f64>().unwrap(), 1.0);
        let m = t.column("mu_nu0").unwrap();
        assert!(t.rows.iter().all(|r| (r[m].parse::<f64>().unwrap() - 1.0).abs() < 1e-15));
    }
}

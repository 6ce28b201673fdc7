use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use rayon::prelude::*;

use decoh_core::timescales;
use decoh_core::{closedform, oracle, BathParams, CompactTime, InitialState, MeasureRecord};

use crate::config::{Family, RunConfig};
use crate::csv::{num, opt, state_cells, Table, NA, STATE_COLUMNS};
use crate::error::{CliError, Result};

/// Oracle truncations above this need an explicit `--dim`.
pub const MAX_AUTO_DIM: usize = 2048;

/// Closed form and oracle must agree to this in `verify`.
pub const VERIFY_TOL: f64 = 1e-7;

const MEASURES: [&str; 5] = ["mu", "lambda", "C", "D", "p0"];

fn fields(r: &MeasureRecord) -> [Option<f64>; 5] {
    [Some(r.mu), Some(r.lambda), r.coherence, r.thermalization, Some(r.p0)]
}

fn oracle_dim(cfg: &RunConfig, state: &InitialState, bath: &BathParams) -> Result<usize> {
    if let Some(d) = cfg.dim {
        return Ok(d);
    }
    let d = oracle::default_dim(state, bath)?;
    if d > MAX_AUTO_DIM {
        return Err(CliError::Resource(format!(
            "{} needs a Fock truncation of {d} (limit {MAX_AUTO_DIM}); lower a, rho or nu, or pass --dim",
            point_label(state, bath, None)
        )));
    }
    Ok(d)
}

fn point_label(state: &InitialState, bath: &BathParams, u: Option<f64>) -> String {
    let params = match *state {
        InitialState::Coherent { a, phi } => format!("a={a},phi={phi}"),
        InitialState::Cat { a, phi_cat } => format!("a={a},cat_phase={phi_cat}"),
        InitialState::Squeezed { a, phi, rho } => format!("a={a},phi={phi},rho={rho}"),
        InitialState::Fock { m } => format!("fock_m={m}"),
    };
    let mut s = format!("{}:{params},gamma={},nu={}", state.family(), bath.gamma, bath.nu);
    if let Some(u) = u {
        let _ = write!(s, ",u={u}");
    }
    s
}

fn compact(us: &[f64]) -> Result<Vec<CompactTime>> {
    us.iter().map(|&u| Ok(CompactTime::new(u)?)).collect()
}

/// Long-format table over the (state, bath, u) product, in that order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Table> {
    let states = cfg.states();
    let baths = cfg.baths();
    let us = compact(&cfg.u_grid())?;

    let mut header: Vec<String> = STATE_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(["gamma", "nu", "u"].map(String::from));
    if cfg.tau {
        header.push("tau".into());
    }
    header.extend(["mu", "lambda", "C", "D", "p0", "S"].map(String::from));
    if cfg.oracle {
        header.extend(MEASURES.iter().map(|m| format!("{m}_oracle")));
    }

    let cases: Vec<(InitialState, BathParams)> =
        states.iter().flat_map(|s| baths.iter().map(move |b| (*s, *b))).collect();
    let oracle_rows: Vec<Option<Vec<MeasureRecord>>> = if cfg.oracle {
        cases
            .iter()
            .map(|(s, b)| Ok(Some(oracle::trajectory_measures(s, b, &us, Some(oracle_dim(cfg, s, b)?), true)?)))
            .collect::<Result<_>>()?
    } else {
        vec![None; cases.len()]
    };

    let flat: Vec<(usize, usize)> = (0..cases.len()).flat_map(|c| (0..us.len()).map(move |i| (c, i))).collect();
    let rows = flat
        .par_iter()
        .map(|&(c, i)| {
            let (state, bath) = &cases[c];
            let u = us[i];
            let r = closedform::measures(state, u, bath)?;
            let mut row = state_cells(state);
            row.extend([num(bath.gamma), num(bath.nu), num(u.value())]);
            if cfg.tau {
                row.push(num(0.0 - u.decay().ln()));
            }
            row.extend([num(r.mu), num(r.lambda), opt(r.coherence), opt(r.thermalization), num(r.p0), num(r.s)]);
            if let Some(orc) = &oracle_rows[c] {
                row.extend(fields(&orc[i]).map(opt));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

/// Parameter grid used by `verify` when a key is not given explicitly.
fn verify_defaults(fam: Family) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<u32>, Vec<f64>) {
    // (a, phase, rho, fock_m, nu); phase is phi or the cat phase.
    match fam {
        Family::Coherent => (vec![0.5, 1.0, 10.0], vec![0.0], vec![], vec![], vec![0.0, 1.0, 10.0]),
        Family::Cat => (vec![1.0, 2.0, 10.0], vec![0.0, FRAC_PI_2, PI], vec![], vec![], vec![0.0, 5.0]),
        Family::Squeezed => (vec![0.0, 1.0], vec![FRAC_PI_2], vec![0.5, 3.0], vec![], vec![0.0, 2.0]),
        Family::Fock => (vec![], vec![], vec![], vec![1, 5, 20], vec![0.01, 1.0, 10.0]),
    }
}

fn verify_cases(cfg: &RunConfig) -> Vec<(InitialState, BathParams)> {
    let mut out = Vec::new();
    for &fam in &cfg.families {
        let (da, dphase, drho, dm, dnu) = verify_defaults(fam);
        let pick = |key: &str, given: &Vec<f64>, default: Vec<f64>| {
            if cfg.explicit.contains(key) {
                given.clone()
            } else {
                default
            }
        };
        let mut sub = cfg.clone();
        sub.families = vec![fam];
        sub.a = pick("a", &cfg.a, da);
        sub.nu = pick("nu", &cfg.nu, dnu);
        match fam {
            Family::Cat => sub.cat_phase = pick("cat-phase", &cfg.cat_phase, dphase),
            Family::Coherent | Family::Squeezed => sub.phi = pick("phi", &cfg.phi, dphase),
            Family::Fock => {}
        }
        if fam == Family::Squeezed {
            sub.rho = pick("rho", &cfg.rho, drho);
        }
        if fam == Family::Fock && !cfg.explicit.contains("fock-m") {
            sub.fock_m = dm;
        }
        for s in sub.states() {
            out.extend(sub.baths().into_iter().map(|b| (s, b)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyLine {
    pub measure: &'static str,
    /// `None` when the measure is undefined at every point on both sides.
    pub max_diff: Option<f64>,
    pub grid_point: String,
}

/// Closed form against the oracle on `points` interior u-values per case.
pub fn run_verify(cfg: &RunConfig) -> Result<Vec<VerifyLine>> {
    let n = cfg.points;
    let us = compact(&(1..=n).map(|i| i as f64 / (n + 1) as f64).collect::<Vec<_>>())?;
    let mut lines: Vec<VerifyLine> =
        MEASURES.iter().map(|&m| VerifyLine { measure: m, max_diff: None, grid_point: String::new() }).collect();
    for (state, bath) in verify_cases(cfg) {
        let dim = oracle_dim(cfg, &state, &bath)?;
        let orc = oracle::trajectory_measures(&state, &bath, &us, Some(dim), true)?;
        for (u, o) in us.iter().zip(&orc) {
            let c = closedform::measures(&state, *u, &bath)?;
            for (line, (x, y)) in lines.iter_mut().zip(fields(&c).into_iter().zip(fields(o))) {
                let d = match (x, y) {
                    (None, None) => continue,
                    (Some(x), Some(y)) => (x - y).abs(),
                    _ => f64::INFINITY,
                };
                if line.max_diff.is_none_or(|m| d > m) {
                    line.max_diff = Some(d);
                    line.grid_point = point_label(&state, &bath, Some(u.value()));
                }
            }
        }
    }
    Ok(lines)
}

pub fn format_verify(lines: &[VerifyLine]) -> String {
    let mut s = String::new();
    for l in lines {
        match l.max_diff {
            Some(d) => writeln!(s, "{} {d:.3e} {}", l.measure, l.grid_point),
            None => writeln!(s, "{} {NA} undefined", l.measure),
        }
        .expect("writing to a String");
    }
    s
}

/// One row of characteristic times per (state, bath).
pub fn run_timescales(cfg: &RunConfig) -> Result<Table> {
    let us = compact(&cfg.u_grid())?;
    let mut header: Vec<String> = STATE_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(
        [
            "gamma",
            "nu",
            "beta",
            "t1",
            "t_star",
            "t_star_in_regime",
            "t_d_estimate",
            "t_d_numeric",
            "t_T_estimate",
            "plateau_u_start",
            "plateau_u_end",
            "plateau_level",
        ]
        .map(String::from),
    );
    let mut table = Table::new(header);
    for state in cfg.states() {
        for bath in cfg.baths() {
            let series = us
                .par_iter()
                .map(|u| closedform::measures(&state, *u, &bath))
                .collect::<decoh_core::Result<Vec<_>>>()?;
            let r = timescales::report(&state, &bath, cfg.beta, &series)?;
            let mut row = state_cells(&state);
            row.extend([num(bath.gamma), num(bath.nu), num(r.beta), num(r.t1)]);
            row.push(opt(r.t_star.map(|t| t.time)));
            row.push(r.t_star.map_or(NA.to_string(), |t| t.in_regime.to_string()));
            row.extend([opt(r.t_d_estimate), opt(r.t_d_numeric), opt(r.t_t_estimate)]);
            row.extend([
                opt(r.plateau.map(|p| p.u_start)),
                opt(r.plateau.map(|p| p.u_end)),
                opt(r.plateau.map(|p| p.level)),
            ]);
            table.rows.push(row);
        }
    }
    Ok(table)
}

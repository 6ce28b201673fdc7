//! Run configuration assembled from an optional `key=value` file and flags.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use decoh_core::{BathParams, InitialState};

use crate::error::{usage, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Figure(u8),
    Sweep,
    Verify,
    Timescales,
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sweep" => Ok(Command::Sweep),
            "verify" => Ok(Command::Verify),
            "timescales" => Ok(Command::Timescales),
            _ => {
                let n = s
                    .strip_prefix("fig")
                    .and_then(|d| d.parse::<u8>().ok())
                    .ok_or_else(|| usage(format!("unknown command `{s}`")))?;
                if (1..=8).contains(&n) {
                    Ok(Command::Figure(n))
                } else {
                    Err(usage(format!("no figure {n}; figures run from fig1 to fig8")))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Coherent,
    Cat,
    Squeezed,
    Fock,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(Family::Coherent),
            "cat" => Ok(Family::Cat),
            "squeezed" => Ok(Family::Squeezed),
            "fock" => Ok(Family::Fock),
            _ => Err(usage(format!("state: unknown family `{s}`"))),
        }
    }
}

pub const KEYS: &[&str] = &[
    "state",
    "a",
    "phi",
    "rho",
    "cat-phase",
    "fock-m",
    "gamma",
    "nu",
    "points",
    "beta",
    "oracle",
    "dim",
    "out",
    "tau",
    "threads",
];

fn canonical_key(key: &str) -> Result<String> {
    let k = key.trim().replace('_', "-");
    if KEYS.contains(&k.as_str()) {
        Ok(k)
    } else {
        Err(usage(format!("unknown setting `{}`", key.trim())))
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        map.insert(canonical_key(k)?, v.trim().to_string());
    }
    Ok(map)
}

/// Real number, also accepting `pi`, `pi/4`, `3pi/2`, `2*pi`.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return x.is_finite().then_some(x);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let coef = num.strip_suffix("pi")?.trim_end_matches('*').trim();
    let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().ok()? };
    Some(c * PI / den)
}

fn real_list(key: &str, s: &str) -> Result<Vec<f64>> {
    let mut v = s
        .split(',')
        .map(|x| parse_real(x).ok_or_else(|| usage(format!("{key}: cannot read `{}` as a number", x.trim()))))
        .collect::<Result<Vec<f64>>>()?;
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

fn parse_one<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| usage(format!("{key}: invalid value `{}`", s.trim())))
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(usage(format!("{key}: expected true or false, got `{other}`"))),
    }
}

/// Every setting of a run. List-valued parameters are sorted and deduplicated,
/// so sweeps enumerate them in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub families: Vec<Family>,
    pub a: Vec<f64>,
    pub phi: Vec<f64>,
    pub rho: Vec<f64>,
    pub cat_phase: Vec<f64>,
    pub fock_m: Vec<u32>,
    pub gamma: Vec<f64>,
    pub nu: Vec<f64>,
    pub points: usize,
    pub beta: f64,
    pub oracle: bool,
    pub dim: Option<usize>,
    pub out: Option<PathBuf>,
    pub tau: bool,
    pub threads: Option<usize>,
    /// Keys given explicitly (file or flag), as opposed to defaults.
    pub explicit: BTreeSet<String>,
}

impl RunConfig {
    pub fn from_settings(command: Command, settings: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| settings.get(k).map(String::as_str);
        let reals = |k: &str, default: f64| get(k).map_or(Ok(vec![default]), |s| real_list(k, s));

        let mut families = match get("state") {
            Some(s) => s.split(',').map(|f| f.trim().parse()).collect::<Result<Vec<Family>>>()?,
            None => vec![Family::Coherent],
        };
        families.sort();
        families.dedup();
        let mut fock_m = match get("fock-m") {
            Some(s) => s.split(',').map(|x| parse_one("fock-m", x)).collect::<Result<Vec<u32>>>()?,
            None => vec![1],
        };
        fock_m.sort();
        fock_m.dedup();
        let default_points = if command == Command::Verify { 12 } else { 400 };
        let points = get("points").map_or(Ok(default_points), |s| parse_one("points", s))?;
        let cfg = RunConfig {
            command,
            families,
            a: reals("a", 1.0)?,
            phi: reals("phi", 0.0)?,
            rho: reals("rho", 0.0)?,
            cat_phase: reals("cat-phase", 0.0)?,
            fock_m,
            gamma: reals("gamma", 1.0)?,
            nu: reals("nu", 0.0)?,
            points,
            beta: get("beta").map_or(Ok(0.1), |s| parse_real(s).ok_or_else(|| usage("beta: not a number")))?,
            oracle: get("oracle").map_or(Ok(false), |s| parse_bool("oracle", s))?,
            dim: get("dim").map(|s| parse_one("dim", s)).transpose()?,
            out: get("out").map(PathBuf::from),
            tau: get("tau").map_or(Ok(false), |s| parse_bool("tau", s))?,
            threads: get("threads").map(|s| parse_one("threads", s)).transpose()?,
            explicit: settings.keys().cloned().collect(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(usage("points: need at least 2 grid points"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(usage(format!("beta: must lie in (0, 1), got {}", self.beta)));
        }
        if self.threads == Some(0) {
            return Err(usage("threads: must be positive"));
        }
        for (g, n) in self.baths_raw() {
            BathParams::new(g, n).map_err(|e| usage(format!("gamma/nu: {e}")))?;
        }
        for s in self.states() {
            s.validate().map_err(|e| usage(format!("{}: {e}", s.family())))?;
        }
        Ok(())
    }

    fn baths_raw(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.gamma.iter().flat_map(move |&g| self.nu.iter().map(move |&n| (g, n)))
    }

    pub fn baths(&self) -> Vec<BathParams> {
        self.baths_raw().map(|(g, n)| BathParams::new(g, n).expect("validated")).collect()
    }

    /// Initial states in lexicographic order of (family, parameters). Only the
    /// parameters a family depends on are enumerated.
    pub fn states(&self) -> Vec<InitialState> {
        let mut out = Vec::new();
        for fam in &self.families {
            match fam {
                Family::Coherent => {
                    for &a in &self.a {
                        for &phi in &self.phi {
                            out.push(InitialState::Coherent { a, phi });
                        }
                    }
                }
                Family::Cat => {
                    for &a in &self.a {
                        for &phi_cat in &self.cat_phase {
                            out.push(InitialState::Cat { a, phi_cat });
                        }
                    }
                }
                Family::Squeezed => {
                    for &a in &self.a {
                        for &phi in &self.phi {
                            for &rho in &self.rho {
                                out.push(InitialState::Squeezed { a, phi, rho });
                            }
                        }
                    }
                }
                Family::Fock => out.extend(self.fock_m.iter().map(|&m| InitialState::Fock { m })),
            }
        }
        out
    }

    /// u_i = i / points, i = 0..points.
    pub fn u_grid(&self) -> Vec<f64> {
        (0..self.points).map(|i| i as f64 / self.points as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_forms() {
        assert_eq!(parse_real("pi"), Some(PI));
        assert_eq!(parse_real("pi/2"), Some(PI / 2.0));
        assert_eq!(parse_real("3pi/2"), Some(1.5 * PI));
        assert_eq!(parse_real("2*pi"), Some(2.0 * PI));
        assert_eq!(parse_real("0.25"), Some(0.25));
        assert_eq!(parse_real("pie"), None);
        assert_eq!(parse_real("inf"), None);
    }

    #[test]
    fn commands() {
        assert_eq!("fig8".parse::<Command>().unwrap(), Command::Figure(8));
        assert!("fig9".parse::<Command>().is_err());
        assert!("fig0".parse::<Command>().is_err());
        assert_eq!("verify".parse::<Command>().unwrap(), Command::Verify);
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# run\nnu = 0,1\ncat_phase=pi\n\n").unwrap();
        assert_eq!(m["nu"], "0,1");
        assert_eq!(m["cat-phase"], "pi");
        assert!(parse_config_text("bogus=1").is_err());
        assert!(parse_config_text("nu 1").is_err());
    }

    #[test]
    fn lists_are_sorted() {
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), "10,1,1,0.5".to_string());
        m.insert("state".to_string(), "fock,coherent".to_string());
        let c = RunConfig::from_settings(Command::Sweep, &m).unwrap();
        assert_eq!(c.a, vec![0.5, 1.0, 10.0]);
        assert_eq!(c.families, vec![Family::Coherent, Family::Fock]);
        assert_eq!(c.states().len(), 4);
    }

    #[test]
    fn rejects_bad_values() {
        let mut m = BTreeMap::new();
        m.insert("points".to_string(), "1".to_string());
        assert!(RunConfig::from_settings(Command::Sweep, &m).is_err());
        m.insert("points".to_string(), "10".to_string());
        m.insert("nu".to_string(), "-1".to_string());
        assert!(RunConfig::from_settings(Command::Sweep, &m).is_err());
    }
}

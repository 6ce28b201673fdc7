//! Front-end for the `decoh` binary: figure data, sweeps, oracle
//! verification and characteristic times, all written as CSV or plain text.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod figures;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;

pub use config::{Command, RunConfig};
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "decoh", version, about = "Decoherence and thermalization of a damped oscillator")]
pub struct Cli {
    /// fig1 .. fig8, sweep, verify or timescales
    pub command: String,
    /// File of key=value lines; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// coherent, cat, squeezed or fock (comma-separated list allowed)
    #[arg(long)]
    pub state: Option<String>,
    /// |alpha|^2; numeric flags below accept comma-separated lists and `pi` forms
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    #[arg(long = "cat-phase")]
    pub cat_phase: Option<String>,
    #[arg(long = "fock-m")]
    pub fock_m: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub nu: Option<String>,
    /// u-grid size (400 by default, 12 interior points for verify)
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// Append master-equation columns to a sweep
    #[arg(long)]
    pub oracle: bool,
    /// Fock truncation for the oracle
    #[arg(long)]
    pub dim: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add a tau = 2 gamma t column
    #[arg(long)]
    pub tau: bool,
    /// Worker threads (rayon default when absent)
    #[arg(long)]
    pub threads: Option<String>,
}

impl Cli {
    /// Config file values overridden by flags.
    pub fn settings(&self) -> Result<BTreeMap<String, String>> {
        let mut map = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
                config::parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("state", &self.state),
            ("a", &self.a),
            ("phi", &self.phi),
            ("rho", &self.rho),
            ("cat-phase", &self.cat_phase),
            ("fock-m", &self.fock_m),
            ("gamma", &self.gamma),
            ("nu", &self.nu),
            ("points", &self.points),
            ("beta", &self.beta),
            ("dim", &self.dim),
            ("threads", &self.threads),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v.clone());
            }
        }
        if let Some(p) = &self.out {
            map.insert("out".into(), p.display().to_string());
        }
        if self.oracle {
            map.insert("oracle".into(), "true".into());
        }
        if self.tau {
            map.insert("tau".into(), "true".into());
        }
        Ok(map)
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        RunConfig::from_settings(self.command.parse()?, &self.settings()?)
    }
}

fn emit(cfg: &RunConfig, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let (res, path) = match &cfg.out {
        Some(p) => {
            let io = |source| CliError::Io { path: p.display().to_string(), source };
            let f = File::create(p).map_err(io)?;
            (body(&mut BufWriter::new(f)), p.display().to_string())
        }
        None => (body(&mut std::io::stdout().lock()), "stdout".to_string()),
    };
    res.map_err(|source| CliError::Io { path, source })
}

fn execute(cfg: &RunConfig) -> Result<()> {
    match cfg.command {
        Command::Figure(n) => {
            let t = figures::figure_table(n, &cfg.u_grid(), cfg.tau)?;
            emit(cfg, |w| t.write(w))
        }
        Command::Sweep => {
            let t = commands::run_sweep(cfg)?;
            emit(cfg, |w| t.write(w))
        }
        Command::Timescales => {
            let t = commands::run_timescales(cfg)?;
            emit(cfg, |w| t.write(w))
        }
        Command::Verify => {
            let lines = commands::run_verify(cfg)?;
            emit(cfg, |w| w.write_all(commands::format_verify(&lines).as_bytes()))?;
            let failed = lines.iter().filter(|l| l.max_diff.is_some_and(|d| !(d < commands::VERIFY_TOL))).count();
            if failed > 0 {
                return Err(CliError::VerifyFailed(failed));
            }
            Ok(())
        }
    }
}

/// Runs one configured command, on a dedicated pool when `threads` is set.
pub fn run(cfg: &RunConfig) -> Result<()> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Resource(format!("thread pool: {e}")))?
            .install(|| execute(cfg)),
        None => execute(cfg),
    }
}

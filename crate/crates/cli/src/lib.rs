//! Command-line front end for `qw1d-core`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qw1d_core::canonical::{canonicalize, canonicalize_with_state, classify, require_class, WalkClass};
use qw1d_core::equivalence::{commutant, decide, enumerate_witnesses, is_degenerate, MAX_WITNESSES};
use qw1d_core::evolve::{distribution, evolve_trajectory, write_distribution_csv, Distribution};
use qw1d_core::{Tolerances, WalkError, WalkSpec};
use serde_json::json;
use thiserror::Error;

mod spec_file;

pub use spec_file::{parse_spec_file, parse_spec_str, parse_state, ParsedSpec};

/// Overrides the phase tolerance.
pub const TOLERANCE_ENV: &str = "QW1D_TOLERANCE_PHASE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },

    #[error("invalid {field}: {source}")]
    Validation { field: String, source: WalkError },

    #[error("bad state '{0}': {1}")]
    State(String, String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Walk(#[from] WalkError),

    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "qw1d", version, about = "One-dimensional two-state quantum walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of a walk (and of its initial state, if given).
    Canonicalize {
        #[arg(long = "in")]
        input: PathBuf,
        /// `auto`, or one of TI, OneDefect, CompleteTwoPhase, TwoPhaseDefect, General.
        #[arg(long, default_value = "auto")]
        class: String,
        /// Write the gauge transformation here as JSON.
        #[arg(long)]
        gauge: Option<PathBuf>,
        /// Window half-width for the general form.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Print the class tag of a walk.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide unitary equivalence. Exit 0 if equivalent, 1 if not, 2 on error.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Decide by direct gauge search instead of canonical parameters.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Write the site distributions for t = 0..=steps as CSV.
    Simulate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Initial state on site 0, e.g. "1,0" or "0.6,0.8i". Defaults to the file's state.
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        steps: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print all diagonal symmetries (λ, W) of a walk on a window.
    Commutant {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        window: Option<usize>,
        /// Sample the solution family of walks with r ∈ {0, 1}.
        #[arg(long)]
        allow_degenerate: bool,
    },
}

pub fn tolerances_from_env() -> Result<Tolerances, CliError> {
    let tol = Tolerances::default();
    match std::env::var(TOLERANCE_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(tol.with_phase(x)),
            _ => Err(CliError::Usage(format!("{TOLERANCE_ENV}={v} is not a positive number"))),
        },
        Err(_) => Ok(tol),
    }
}

fn default_window(specs: &[&WalkSpec]) -> usize {
    specs.iter().map(|s| s.extent() as usize + 3).fold(8, usize::max)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Runs one command, writing its primary output to `out`. Returns the exit
/// code for success paths; errors map to exit code 2 in `main`.
pub fn run<W: Write>(command: &Command, tol: &Tolerances, out: &mut W) -> Result<u8, CliError> {
    match command {
        Command::Canonicalize { input, class, gauge, window } => {
            let parsed = parse_spec_file(input, tol)?;
            let spec = &parsed.spec;
            let class = match class.as_str() {
                "auto" => classify(spec, tol),
                other => {
                    let c: WalkClass = other.parse().map_err(CliError::Usage)?;
                    require_class(spec, c, tol)?;
                    c
                }
            };
            let n = window.unwrap_or_else(|| default_window(&[spec]));
            let (form, state, g) = match parsed.state {
                Some(phi) => {
                    let (f, s, g) = canonicalize_with_state(spec, &parsed.standard_state(&phi), Some(class), n, tol)?;
                    (f, Some(s), g)
                }
                None => {
                    let (f, g) = canonicalize(spec, Some(class), n, tol)?;
                    (f, None, g)
                }
            };
            let mut doc = serde_json::to_value(&form).expect("serializable");
            if let Some(s) = state {
                doc["state"] = serde_json::to_value(s).expect("serializable");
            }
            writeln!(out, "{}", to_json(&doc))?;
            if let Some(path) = gauge {
                let g = match &parsed.frames {
                    Some(f) => g.with_frames(f.clone()),
                    None => g,
                };
                let text = to_json(&g.to_json_window(n as i64));
                std::fs::write(path, text + "\n")
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            }
            Ok(0)
        }
        Command::Classify { input } => {
            let parsed = parse_spec_file(input, tol)?;
            writeln!(out, "{}", classify(&parsed.spec, tol))?;
            Ok(0)
        }
        Command::Equiv { a, b, oracle, window } => {
            let pa = parse_spec_file(a, tol)?;
            let pb = parse_spec_file(b, tol)?;
            let n = window.unwrap_or_else(|| default_window(&[&pa.spec, &pb.spec]));
            let verdict = decide(&pa.spec, &pb.spec, n, *oracle, tol)?;
            writeln!(out, "{}", to_json(&verdict))?;
            Ok(if verdict.equivalent { 0 } else { 1 })
        }
        Command::Simulate { input, state, steps, out: path } => {
            let parsed = parse_spec_file(input, tol)?;
            let phi = match (state, parsed.state) {
                (Some(s), _) => parse_state(s)?,
                (None, Some(phi)) => phi,
                (None, None) => return Err(CliError::Usage("no initial state: pass --state or add \"state\" to the file".into())),
            };
            let traj = evolve_trajectory(&parsed.spec, &parsed.standard_state(&phi), *steps, tol)?;
            let dists: Vec<Distribution> = traj.iter().map(distribution).collect();
            match path {
                Some(p) => {
                    let mut file = std::fs::File::create(p)
                        .map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
                    write_distribution_csv(&mut file, &dists)?;
                }
                None => write_distribution_csv(out, &dists)?,
            }
            Ok(0)
        }
        Command::Commutant { input, window, allow_degenerate } => {
            let parsed = parse_spec_file(input, tol)?;
            let spec = &parsed.spec;
            let n = window.unwrap_or_else(|| default_window(&[spec]));
            let witnesses = if *allow_degenerate && is_degenerate(spec, n, tol) {
                let family = enumerate_witnesses(spec, spec, n, MAX_WITNESSES, tol)?;
                eprintln!(
                    "note: degenerate walk; {} sampled witnesses{}",
                    family.witnesses.len(),
                    if family.truncated { " (truncated)" } else { "" }
                );
                family.witnesses
            } else {
                commutant(spec, n, tol)?
            };
            writeln!(out, "{}", to_json(&json!(witnesses)))?;
            Ok(0)
        }
    }
}

//! Front end of the `mball` binary.
//!
//! [`run`] parses the arguments, executes one command and returns the exit
//! code together with everything that would go to stdout and stderr, so the
//! tests can drive it in-process as well as through the binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
mod report;

pub use report::{format_sig6, Format};

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit codes.
pub mod exit {
    /// Contractive, positive, or a certificate was found.
    pub const OK: i32 = 0;
    /// Malformed input or a failed evaluation.
    pub const INPUT: i32 = 2;
    pub const NOT_CONTRACTIVE: i32 = 10;
    /// The search pair is simultaneously diagonalizable; no counterexample exists.
    pub const DIAGONALIZABLE: i32 = 11;
    /// The λ scan ended without a certificate.
    pub const EXHAUSTED: i32 = 12;
    /// The pencils degenerate; the search reported a transpose gap instead.
    pub const TRANSPOSE_GAP: i32 = 13;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// serde_json reports the line and column in its message.
    #[error("{path}: invalid input: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Domain(#[from] domains::DomainError),
    #[error(transparent)]
    Contractivity(#[from] contractivity::ContractivityError),
    #[error(transparent)]
    Counterexample(#[from] counterexample::CounterexampleError),
    #[error(transparent)]
    Bergman(#[from] bergman::BergmanError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Numeric,
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "mball", version, about = "Contractivity and curvature checks for matrix-ball domains")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed of every sampled search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Verdict tolerance; must be positive.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tol: Option<f64>,
    /// Output format. Defaults to json, or csv for `thresholds`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Closed form or numeric evaluation, where a command offers both.
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contractivity of ρ_V and the P_A test for a domain and a tuple.
    Check { domain: PathBuf, tuple: PathBuf },
    /// Only the P_A test `‖Σ A_i ⊗ V_i‖ ≤ 1`.
    CheckComplete { domain: PathBuf, tuple: PathBuf },
    /// Dual norm at a point given as JSON, e.g. `[[1,0],[0.5,0]]`.
    DualNorm {
        domain: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Canonical form of a two-matrix domain.
    Canonicalize { domain: PathBuf },
    /// Counterexample search over λ.
    Search {
        domain: PathBuf,
        #[arg(long, value_parser = positive_f64)]
        lambda_min: Option<f64>,
        #[arg(long, value_parser = positive_f64)]
        lambda_max: Option<f64>,
        #[arg(long, default_value_t = 20)]
        per_decade: u32,
    },
    /// Curvature matrix and localization of `K^λ` at a point.
    BergmanCurvature {
        /// nil2, reinhardt3 or matrix_ball:R:S
        #[arg(long)]
        kernel: String,
        #[arg(long, value_parser = positive_f64)]
        lambda: f64,
        #[arg(long)]
        point: String,
    },
    /// Jet Gram matrix of `K^λ` at a point and its positivity.
    JetGram {
        #[arg(long)]
        kernel: String,
        #[arg(long, value_parser = positive_f64)]
        lambda: f64,
        #[arg(long)]
        point: String,
    },
    /// λ-threshold table of a kernel example.
    Thresholds {
        /// nil2, reinhardt3 or matrix_ball:R:S
        example: String,
        #[arg(long, default_value_t = 0.1, value_parser = positive_f64)]
        lambda_min: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
        lambda_max: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line, `args[0]` being the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: exit::INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: exit::OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match commands::execute(&cfg) {
        Ok(done) => Outcome {
            code: done.code,
            stdout: report::render(&cfg, &done),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit::INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

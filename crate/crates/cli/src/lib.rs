//! Command-line front end for `curvlab`: a JSON model format and
//! subcommands that turn each library check into a scriptable report.
//!
//! Exit codes: 0 when every requested check holds, 1 when a check fails,
//! 2 for input or usage errors.

pub mod commands;
pub mod model;
pub mod report;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::{BuildArgs, BuildKind, ReconstructMode, Settings};
use report::CheckReport;

/// Environment variable that overrides the default tolerance.
pub const TOL_ENV: &str = "CURVLAB_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    A0,
    FubiniStudy,
    Counterexample,
    Twistor,
    TwistorPullback,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Jacobi,
    ComplexJacobi,
}

#[derive(Debug, Parser)]
#[command(
    name = "curvlab",
    version,
    about = "Checks for algebraic curvature models on almost Hermitian vector spaces"
)]
pub struct Cli {
    /// Tolerance for identity checks (default 1e-10, or $CURVLAB_TOL).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for random constructions and extra samples.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Extra random spot checks beyond the certifying sets.
    #[arg(long, global = true, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a model file for one of the standard constructions.
    Build {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
        /// Store one entry per symmetry orbit.
        #[arg(long)]
        sparse: bool,
        /// For twistor models, also write Theta as a JSON matrix.
        #[arg(long)]
        theta_out: Option<PathBuf>,
    },
    /// Run identity checks on a model.
    Check {
        model: PathBuf,
        /// symmetries, compatibility, vanhecke, sato1, sato2, lemma23, gray-classify, gray-yano
        #[arg(required = true)]
        identities: Vec<String>,
    },
    /// Spectra of the Ricci, Jacobi and complex Jacobi operators.
    Spectra {
        model: PathBuf,
        /// Comma-separated vector; without it, sweep the spanning lines.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
    },
    /// Recover the tensor from Jacobi or complex Jacobi data.
    Reconstruct {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Jacobi)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two models through an optional complex isometry.
    Diff {
        a: PathBuf,
        b: PathBuf,
        /// JSON matrix commuting with both structures (default: identity).
        #[arg(long)]
        theta: Option<PathBuf>,
    },
    /// Dimension of the subspace cut out by linear constraints.
    SubspaceDim {
        #[arg(long)]
        m: usize,
        /// JSON matrix for J (default: the standard structure).
        #[arg(long)]
        j: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        constraints: Vec<String>,
    },
    /// Brute-force values for the explicit models next to the stated ones.
    Audit {
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        probes: usize,
    },
}

fn tolerance(flag: Option<f64>) -> Result<f64> {
    let tol = match (flag, std::env::var(TOL_ENV)) {
        (Some(t), _) => t,
        (None, Ok(v)) => match v.trim().parse() {
            Ok(t) => t,
            Err(_) => bail!("{TOL_ENV}={v} is not a number"),
        },
        (None, Err(_)) => curvlab::DEFAULT_TOL,
    };
    if !(tol.is_finite() && tol > 0.0) {
        bail!("tolerance must be positive, got {tol}");
    }
    Ok(tol)
}

pub fn execute(cli: &Cli, echo: &str) -> Result<CheckReport> {
    let s = Settings {
        tol: tolerance(cli.tol)?,
        seed: cli.seed,
        samples: cli.samples,
    };
    match &cli.command {
        Command::Build {
            kind,
            m,
            out,
            sparse,
            theta_out,
        } => {
            let kind = match kind {
                Kind::A0 => BuildKind::A0,
                Kind::FubiniStudy => BuildKind::FubiniStudy,
                Kind::Counterexample => BuildKind::Counterexample,
                Kind::Twistor => BuildKind::Twistor,
                Kind::TwistorPullback => BuildKind::TwistorPullback,
                Kind::Random => BuildKind::Random,
            };
            let args = BuildArgs {
                kind,
                m: *m,
                out,
                sparse: *sparse,
                theta_out: theta_out.as_deref(),
            };
            commands::build(echo, &args, &s)
        }
        Command::Check { model, identities } => commands::check(echo, model, identities, &s),
        Command::Spectra { model, at } => commands::spectra(echo, model, at.as_deref(), &s),
        Command::Reconstruct { model, mode, out } => {
            let mode = match mode {
                Mode::Jacobi => ReconstructMode::Jacobi,
                Mode::ComplexJacobi => ReconstructMode::ComplexJacobi,
            };
            commands::reconstruct(echo, model, mode, out.as_deref(), &s)
        }
        Command::Diff { a, b, theta } => commands::diff(echo, a, b, theta.as_deref(), &s),
        Command::SubspaceDim { m, j, constraints } => {
            commands::subspace_dim(echo, *m, j.as_deref(), constraints, &s)
        }
        Command::Audit { m, probes } => commands::audit(echo, *m, *probes, &s),
    }
}

/// Parses `args`, runs the command, prints the report, and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let report = match execute(&cli, &echo) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            CheckReport::usage_error(echo, &format!("{e:#}"))
        }
    };
    // A closed stdout (e.g. piping into `head`) must not turn into a panic.
    let mut out = io::stdout().lock();
    let _ = match cli.output {
        OutputFormat::Json => writeln!(out, "{}", report.to_json()),
        OutputFormat::Text if report.status != 2 => write!(out, "{}", report.to_text()),
        OutputFormat::Text => Ok(()),
    };
    report.status
}

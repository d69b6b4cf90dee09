//! Command-line front end: JSON problems in, JSON or text reports out.
//!
//! Exit codes: 0 when the verdict passes, 1 on a mathematical or
//! verification failure (the report carries the reason), 2 on malformed
//! input.

pub mod pipeline;
pub mod problem;
pub mod text;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::{FieldError, GroupError, InertialError, MonomializeError, TransformError};

pub use problem::{ProblemFile, ReportFile, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Math(String),
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::DimensionTooLarge(_) | TransformError::UnknownParam(_) => CliError::Input(e.to_string()),
            _ => CliError::Math(format!("{e:?}: {e}")),
        }
    }
}

impl From<MonomializeError> for CliError {
    fn from(e: MonomializeError) -> Self {
        CliError::Math(format!("{e:?}: {e}"))
    }
}

impl From<InertialError> for CliError {
    fn from(e: InertialError) -> Self {
        match e {
            InertialError::Field(f) => CliError::Input(f.to_string()),
            _ => CliError::Math(format!("{e:?}: {e}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, clap::Args)]
struct IoArgs {
    /// Problem file (a report file for `verify`).
    path: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the valued field (and the étale presentation, if any).
    Check(IoArgs),
    /// Run quadratic transforms on the base ring.
    Transform(IoArgs),
    /// Compute a chart monomializing Z.
    Monomialize(IoArgs),
    /// Lift a chart through the étale presentation.
    Ascend(IoArgs),
    /// Re-verify a report from its data.
    Verify(IoArgs),
}

#[derive(Debug, Parser)]
#[command(name = "valuniform", version, about = "Local uniformization of monomial Abhyankar places")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run_command<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (name, io) = match &cli.command {
        Command::Check(a) => ("check", a),
        Command::Transform(a) => ("transform", a),
        Command::Monomialize(a) => ("monomialize", a),
        Command::Ascend(a) => ("ascend", a),
        Command::Verify(a) => ("verify", a),
    };
    match run(name, io) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("valuniform: {e}");
            2
        }
    }
}

fn run(name: &str, io: &IoArgs) -> Result<i32, CliError> {
    let input = read(&io.path)?;
    let (body, ok) = if name == "verify" {
        let report: ReportFile =
            serde_json::from_str(&input).map_err(|e| CliError::Input(format!("{}: {e}", io.path.display())))?;
        let outcome = verify::verify_report(&report);
        let body = match io.format {
            Format::Json => to_json(&outcome)?,
            Format::Text => text::render_verify(&outcome),
        };
        (body, outcome.ok && outcome.agrees)
    } else {
        let problem: ProblemFile =
            serde_json::from_str(&input).map_err(|e| CliError::Input(format!("{}: {e}", io.path.display())))?;
        let report = pipeline::emit(name, &problem)?;
        let body = match io.format {
            Format::Json => to_json(&report)?,
            Format::Text => text::render_report(&report),
        };
        (body, report.verdict.ok)
    };
    match &io.out {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        None => print!("{body}"),
    }
    Ok(if ok { 0 } else { 1 })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

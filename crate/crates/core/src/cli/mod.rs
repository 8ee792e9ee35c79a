//! Command-line front end. [`run`] parses arguments, dispatches to a
//! command and returns the exit code with everything written to stdout and
//! stderr, so the binary is a thin wrapper and tests need no subprocess.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::io::round_floats;

/// Exit code when the analysis ran, whatever its verdict.
pub const EXIT_OK: i32 = 0;
/// Exit code for usage errors, including out-of-range exponents.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for malformed input files or sequences.
pub const EXIT_INPUT: i32 = 2;

/// Name of the environment variable forcing exact rational arithmetic.
pub const EXACT_ENV: &str = "BANDPOS_EXACT";

pub const CONVENTION_ZERO_POWER: &str = "0^0 := 1";
pub const CONVENTION_NATURALS: &str = "N excludes 0";

#[derive(Debug, Parser)]
#[command(
    name = "bandpos",
    version,
    about = "Positivity, Hadamard powers and infinite divisibility of symmetric band matrices"
)]
pub struct Cli {
    /// Positivity tolerance, relative to max(1, max-norm)
    #[arg(long, global = true, default_value_t = crate::DEFAULT_TOL)]
    pub tol: f64,
    /// Emit a JSON run report instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandFamily {
    Tridiagonal,
    Pentadiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeFamily {
    Tridiagonal,
    Pentadiagonal,
    /// Matrices supported on the edges of --graph
    Pattern,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a matrix as PD, PSD_BOUNDARY or INDEFINITE
    CheckPositivity {
        /// Matrix JSON file
        file: PathBuf,
    },
    /// Entrywise power of a matrix, with its positivity verdict
    Hadamard {
        file: PathBuf,
        /// Exponent (r >= 0)
        #[arg(short = 'r', allow_negative_numbers = true)]
        r: f64,
    },
    /// Chain-sequence test by minimal parameters
    Chain {
        /// Comma-separated decimals or fractions, e.g. "1/4,1/4,1/4"
        #[arg(allow_hyphen_values = true)]
        sequence: String,
    },
    /// Critical exponent of a chordal graph pattern
    CriticalExponent {
        /// Edge-list file: vertex count, then one "i j" pair per line
        graph: PathBuf,
    },
    /// Infinite-divisibility check for a nonnegative matrix
    IdCheck { file: PathBuf },
    /// Emit a PD matrix whose r-th Hadamard power is not PSD (0 < r < 1)
    Counterexample {
        #[arg(long, value_enum)]
        family: BandFamily,
        /// Exponent (0 < r < 1)
        #[arg(short = 'r', allow_negative_numbers = true)]
        r: f64,
    },
    /// Search random PD matrices for a power that breaks positivity
    Probe {
        #[arg(long, value_enum)]
        family: ProbeFamily,
        /// Exponent (r > 0)
        #[arg(short = 'r', allow_negative_numbers = true)]
        r: f64,
        /// Number of random samples
        #[arg(short = 'n', default_value_t = 100)]
        samples: usize,
        /// Seed for the sample generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph pattern for --family pattern
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Extra matrix files evaluated with the samples
        #[arg(long)]
        inject: Vec<PathBuf>,
    },
}

/// Structured record of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub verdicts: Value,
    pub conventions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
}

/// Result of [`run`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Settings that do not come from argv.
#[derive(Debug, Clone, Copy, Default)]
pub struct Env {
    /// Force exact rational arithmetic where a command supports it.
    pub exact: bool,
}

impl Env {
    pub fn from_process() -> Self {
        Self {
            exact: std::env::var(EXACT_ENV).is_ok_and(|v| v == "1"),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NegativeExponent(_)
        | Error::NonFiniteExponent(_)
        | Error::ExponentOutOfRange(_)
        | Error::InvalidTolerance(_)
        | Error::NoSamples
        | Error::Domain(_) => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

/// What a command produced before rendering.
pub(crate) struct CommandOutput {
    pub inputs: Value,
    pub verdicts: Value,
    pub conventions: Vec<String>,
    /// Text for stdout in non-JSON mode.
    pub text: String,
    /// Payload that always goes to stdout (JSON mode wraps the report around
    /// `verdicts` instead and sends annotations to stderr).
    pub primary_json: Option<Value>,
    /// Human annotations for stderr.
    pub notes: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, env: Env) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    execute(&cli, env)
}

pub fn execute(cli: &Cli, env: Env) -> Outcome {
    let name = command_name(&cli.command);
    match commands::dispatch(cli, env) {
        Ok(out) => render_success(cli, name, out),
        Err(e) => {
            let code = exit_code_for(&e);
            let mut outcome = Outcome {
                code,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            };
            if cli.json {
                let report = RunReport {
                    command: name.into(),
                    inputs: Value::Null,
                    verdicts: Value::Null,
                    conventions: vec![],
                    error: Some(e.to_string()),
                    exit_code: code,
                };
                outcome.stdout = to_json_text(&report);
            }
            outcome
        }
    }
}

fn render_success(cli: &Cli, name: &str, out: CommandOutput) -> Outcome {
    let report = RunReport {
        command: name.into(),
        inputs: out.inputs,
        verdicts: out.verdicts,
        conventions: out.conventions,
        error: None,
        exit_code: EXIT_OK,
    };
    let (stdout, stderr) = match (&out.primary_json, cli.json) {
        (Some(primary), true) => (to_json_text(primary), to_json_text(&report)),
        (Some(primary), false) => (to_json_text(primary), out.notes),
        (None, true) => (to_json_text(&report), out.notes),
        (None, false) => (out.text, out.notes),
    };
    Outcome {
        code: EXIT_OK,
        stdout,
        stderr,
    }
}

/// Pretty JSON with floats rounded to the output precision and a trailing
/// newline.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let v = round_floats(serde_json::to_value(value).expect("report serializes"));
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckPositivity { .. } => "check-positivity",
        Command::Hadamard { .. } => "hadamard",
        Command::Chain { .. } => "chain",
        Command::CriticalExponent { .. } => "critical-exponent",
        Command::IdCheck { .. } => "id-check",
        Command::Counterexample { .. } => "counterexample",
        Command::Probe { .. } => "probe",
    }
}

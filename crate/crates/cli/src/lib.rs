//! Command-line front end for the `auerbach` library.
//!
//! Every subcommand writes one report to stdout (JSON unless
//! `--format text`) and diagnostics to stderr. Exit codes: 0 success or a
//! true verdict, 1 a checked false verdict, 2 usage, parse or domain errors.

pub mod commands;
pub mod document;

use std::io::{Read, Write};
use std::path::PathBuf;

use auerbach::{AuerbachError, PExponent, ToleranceConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use document::MatrixDocument;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(AuerbachError),
}

impl From<AuerbachError> for CliError {
    fn from(e: AuerbachError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// A failed precondition on the input basis is a checked "no".
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(AuerbachError::Precondition(_)) => EXIT_FALSE,
            _ => EXIT_ERROR,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "auerbach", version, about = "Auerbach bases of l^n_p: verify, construct, enumerate, classify")]
pub struct Cli {
    /// Residual tolerance used by every check.
    #[arg(long, global = true, env = "AUERBACH_TOL")]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct MatrixInput {
    /// Matrix document, or `-` for stdin.
    pub file: PathBuf,
    /// Overrides the exponent stored in the document.
    #[arg(long)]
    pub p: Option<PExponent>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks whether the rows of a matrix form an Auerbach basis.
    Verify(MatrixInput),
    /// Emits one of the explicit constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Multistart census of basis classes.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: PExponent,
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        rng: u64,
    },
    /// Names the class of a basis.
    Classify(MatrixInput),
    /// The root `r_p` of `r^{p-1} + r - 1 = 0`.
    Rp {
        #[arg(long)]
        p: PExponent,
    },
    /// Checks whether every subset of rows spans an isometric copy of l^m_p.
    Strong(MatrixInput),
    /// Follows every class found at `p0` to `p1`.
    Continuation {
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        p1: f64,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        rng: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    Identity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: PExponent,
    },
    Hadamard2 {
        #[arg(long)]
        p: PExponent,
    },
    /// Block diagonal sum of the given documents, in order.
    Block {
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        p: Option<PExponent>,
    },
    Jp {
        #[arg(long)]
        p: PExponent,
    },
    /// `[[1, 1, 1], [-1, 1, 1], [t, 1, -1]]` in l^3_∞.
    Jinf {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    Sylvester {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: Option<PExponent>,
    },
}

/// What a command produced: a JSON value, a plain text rendering, and the
/// exit code.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub code: i32,
}

pub struct Context<'a> {
    pub tol: ToleranceConfig,
    pub stdin: &'a mut dyn Read,
}

impl Context<'_> {
    pub fn read_document(&mut self, path: &std::path::Path) -> Result<MatrixDocument, CliError> {
        let mut raw = String::new();
        if path.as_os_str() == "-" {
            self.stdin.read_to_string(&mut raw).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        } else {
            raw = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        MatrixDocument::parse(&raw)
    }
}

pub fn tolerance(cli_tol: Option<f64>) -> Result<ToleranceConfig, CliError> {
    let tol = match cli_tol {
        Some(t) => ToleranceConfig::default().with_residual_tol(t),
        None => ToleranceConfig::default(),
    };
    tol.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(tol)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = tolerance(cli.tol).and_then(|tol| {
        let mut ctx = Context { tol, stdin };
        commands::dispatch(&cli.command, &mut ctx)
    });
    match result {
        Ok(outcome) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&outcome.json).expect("reports always serialize") + "\n",
                Format::Text => outcome.text,
            };
            if stdout.write_all(body.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "auerbach: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs; clap's own usage errors
/// exit with 2 and `--help` with 0.
pub fn run_from<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdin, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            code
        }
    }
}

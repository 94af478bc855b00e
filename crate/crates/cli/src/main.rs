mod commands;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tetrablock::boundary::DEFAULT_MEMBERSHIP_TOL;
use tetrablock::fejriesz::DEFAULT_CIRCLE_TOL;
use tetrablock::polycx::DEFAULT_CLUSTER_TOL;
use tetrablock::ValidationMode;

/// Construct, validate and analyze rational tetra-inner functions.
#[derive(Debug, Parser)]
#[command(name = "tetrablock", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a point {"x1","x2","x3"} of C^3 or {"s","p"} of C^2.
    Classify(Input),
    /// Build a function from {"alpha1","alpha2","sigma","t_plus","t","omega"}.
    Construct(Input),
    /// Check the defining conditions and the invariant suite.
    Verify(Input),
    /// Degree, type and royal nodes.
    Analyze(Input),
    /// Sample the function on the unit circle.
    Trace(Input),
    /// Split a function as the midpoint of two others.
    Perturb(Input),
}

#[derive(Debug, Args)]
struct Input {
    /// Input JSON file; stdin when omitted.
    file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Membership tolerance for point classification.
    #[arg(long, global = true, default_value_t = DEFAULT_MEMBERSHIP_TOL)]
    tol: f64,
    /// Distance from the circle below which a root counts as lying on it.
    #[arg(long, global = true, default_value_t = DEFAULT_CIRCLE_TOL)]
    circle_tol: f64,
    /// Distance below which numerical roots are merged.
    #[arg(long, global = true, default_value_t = DEFAULT_CLUSTER_TOL)]
    cluster_tol: f64,
    /// Number of circle samples.
    #[arg(long, global = true, default_value_t = 256)]
    samples: usize,
    /// Seed for randomized sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Reject denominators vanishing on the circle (default).
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Allow denominators vanishing on the circle.
    #[arg(long, global = true)]
    lenient: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

pub struct RunConfig {
    pub membership_tol: f64,
    pub circle_tol: f64,
    pub cluster_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub mode: ValidationMode,
    pub format: Format,
}

/// Failure with its exit code: 2 parse/IO, 3 precondition, 4 numerical.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<tetrablock::Error> for CliError {
    fn from(e: tetrablock::Error) -> Self {
        CliError { code: if e.is_precondition() { 3 } else { 4 }, message: e.to_string() }
    }
}

fn read_input(input: &Input) -> Result<String, CliError> {
    match &input.file {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| CliError::usage(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let args = &cli.config;
    for (name, v) in [("tol", args.tol), ("circle-tol", args.circle_tol), ("cluster-tol", args.cluster_tol)] {
        if !(v > 0.0) {
            return Err(CliError::usage(format!("--{name} must be positive")));
        }
    }
    if args.samples < 16 {
        return Err(CliError::usage("--samples must be at least 16"));
    }
    let default_format = if matches!(cli.command, Command::Trace(_)) { Format::Csv } else { Format::Json };
    let config = RunConfig {
        membership_tol: args.tol,
        circle_tol: args.circle_tol,
        cluster_tol: args.cluster_tol,
        samples: args.samples,
        seed: args.seed,
        mode: if args.lenient { ValidationMode::Lenient } else { ValidationMode::Strict },
        format: args.format.unwrap_or(default_format),
    };

    let outcome = match &cli.command {
        Command::Classify(i) => commands::classify(&read_input(i)?, &config),
        Command::Construct(i) => commands::construct(&read_input(i)?, &config),
        Command::Verify(i) => commands::verify(&read_input(i)?, &config),
        Command::Analyze(i) => commands::analyze(&read_input(i)?, &config),
        Command::Trace(i) => commands::trace(&read_input(i)?, &config),
        Command::Perturb(i) => commands::perturb(&read_input(i)?, &config),
    }?;

    let write = |text: &str| -> Result<(), CliError> {
        match &args.out {
            Some(path) => fs::write(path, text).map_err(|e| CliError::usage(format!("{}: {e}", path.display()))),
            None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::usage(format!("stdout: {e}"))),
        }
    };
    write(&outcome.text)?;
    match outcome.failure {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

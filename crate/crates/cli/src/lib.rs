//! Command-line front end: argument definitions, document loading and the
//! commands themselves. Every command returns its exit code and report so
//! it can be driven from tests without a process boundary.

pub mod commands;
pub mod formats;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mucofix::verifier::{LatticeFamily, LemmaId, Question};
use mucofix::ContinuityMode;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
}

/// Exit status plus the text to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

impl Outcome {
    pub fn new(code: i32, report: impl Into<String>) -> Self {
        Outcome {
            code,
            report: report.into(),
        }
    }

    pub fn input_error(e: CliError) -> Self {
        Outcome::new(EXIT_INPUT, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "mucofix", version, about = "Simultaneous fixed points of generator pairs over finite lattices")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate lattice and pair documents.
    Check(CheckArgs),
    /// Least and/or greatest simultaneous fixed point of a pair.
    Solve(SolveArgs),
    /// Check the lemma suite on generated instances.
    Verify(VerifyArgs),
    /// Search for counterexamples to an open question.
    Mine(MineArgs),
    /// Run one of the demos.
    #[command(subcommand)]
    Demo(DemoCommand),
}

fn parse_mode(s: &str) -> Result<ContinuityMode, String> {
    s.parse().map_err(|e: mucofix::genfun::GenFunError| e.to_string())
}

fn parse_lemma(s: &str) -> Result<LemmaId, String> {
    s.parse().map_err(|e: mucofix::verifier::GenError| e.to_string())
}

fn parse_question(s: &str) -> Result<Question, String> {
    s.parse().map_err(|e: mucofix::verifier::GenError| e.to_string())
}

fn parse_family(s: &str) -> Result<LatticeFamily, String> {
    s.parse().map_err(|e: mucofix::verifier::GenError| e.to_string())
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Lattice or pair documents.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Continuity mode used for pairs.
    #[arg(long, default_value = "binary", value_parser = parse_mode)]
    pub mode: ContinuityMode,
    /// Treat a non-continuous pair as a failure.
    #[arg(long)]
    pub require_continuous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Direct,
    Product,
    Tarski,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Least,
    Greatest,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "direct")]
    pub strategy: StrategyArg,
    /// Only one extremum; both when omitted.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Print the iterates of the product iteration.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A single lemma (L1..L7, SFP); all when omitted.
    #[arg(long, value_parser = parse_lemma)]
    pub lemma: Option<LemmaId>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instances per lemma.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value = "binary", value_parser = parse_mode)]
    pub mode: ContinuityMode,
    #[arg(long, default_value = "mixed", value_parser = parse_family)]
    pub family: LatticeFamily,
    #[arg(long, default_value_t = 2)]
    pub min_size: usize,
    #[arg(long, default_value_t = 8)]
    pub max_size: usize,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    /// Q1, Q2 or Q3.
    #[arg(value_parser = parse_question)]
    pub question: Question,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    /// Most instances examined in total.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
    /// Random instances after the exhaustive phase.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "binary", value_parser = parse_mode)]
    pub mode: ContinuityMode,
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// Three mutually recursive integer functions, evaluated from F.
    Paulson {
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        x: String,
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        y: String,
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        z: String,
        /// Step budget.
        #[arg(long, default_value_t = mucofix::demos::PAULSON_STEP_BUDGET)]
        budget: u64,
    },
    /// Subtyping and containment over interval types.
    Subtype {
        /// Class table (JSON list of {name, generic, superclass}); a small
        /// built-in table when omitted.
        #[arg(long)]
        classes: Option<PathBuf>,
        #[arg(long, default_value_t = mucofix::demos::DEFAULT_DEPTH)]
        depth: usize,
        /// Only one solution; both when omitted.
        #[arg(long, value_enum)]
        direction: Option<DirectionArg>,
        /// Largest universe allowed.
        #[arg(long, default_value_t = mucofix::demos::DEFAULT_TYPE_CAP)]
        cap: usize,
        /// Subtype queries `T1<:T2`, answered against each solution.
        #[arg(long)]
        query: Vec<String>,
    },
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check(a) => commands::cmd_check(&a.paths, a.mode, a.require_continuous),
        Command::Solve(a) => commands::cmd_solve(&a.path, a.strategy, a.direction, a.trace),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Mine(a) => commands::cmd_mine(a),
        Command::Demo(d) => commands::cmd_demo(d),
    }
}

/// Parses `args` (program name first) and runs. Usage errors become exit 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => Outcome::new(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK }, e.to_string()),
    }
}

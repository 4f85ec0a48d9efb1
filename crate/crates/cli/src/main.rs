//! `quadfermat`: Fermat-style factorization of `4n² + 1` and of Fermat
//! numbers, plus claim audits and strategy benchmarks.
//!
//! Exit codes: 0 found / completed, 1 prime or nothing found, 2 invalid
//! input, 3 internal inconsistency.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

mod commands;
mod envelope;

#[derive(Debug, Parser)]
#[command(name = "quadfermat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor N = 4n^2 + 1 by the quadratic-form interval search
    Factor(FactorArgs),
    /// Classic Fermat factorization of an arbitrary odd N
    FactorGeneric(FactorGenericArgs),
    /// Show the candidate interval and admissible residues for one target
    Candidates(CandidatesArgs),
    /// Check the congruence claims against trial-division ground truth
    Audit(AuditArgs),
    /// Search for divisors of the Fermat number F_index
    Fermat(FermatArgs),
    /// Compare candidate counts and timings across strategies
    Bench(BenchArgs),
}

#[derive(Debug, clap::Args)]
struct FactorArgs {
    /// Generator n
    #[arg(long, value_parser = parse_nat, required_unless_present = "value", conflicts_with = "value")]
    n: Option<BigUint>,
    /// N itself; must be of the form 4n^2 + 1
    #[arg(long = "N", id = "value", value_name = "N", value_parser = parse_nat)]
    value: Option<BigUint>,
    /// Report every factor pair instead of the most balanced one
    #[arg(long)]
    all: bool,
    /// Also apply the congruence skips (not known to be sound)
    #[arg(long)]
    paper_filters: bool,
    /// Largest filter prime
    #[arg(long, default_value_t = 97)]
    prime_bound: u64,
    /// Print a JSON envelope instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct FactorGenericArgs {
    /// Odd N >= 9
    #[arg(long = "N", value_name = "N", value_parser = parse_nat)]
    value: BigUint,
    /// Maximum number of centers to test
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct CandidatesArgs {
    #[arg(long, value_parser = parse_nat)]
    n: BigUint,
    /// Odd prime for the admissible residue sets
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct AuditArgs {
    /// Inclusive range of n, as lo:hi
    #[arg(long, value_parser = parse_range, default_value = "1:2000")]
    range: (u64, u64),
    /// Claim ids, comma separated, or `all`
    #[arg(long, default_value = "all")]
    claims: String,
    /// Largest prime used by the congruence claims
    #[arg(long, default_value_t = 97)]
    prime_bound: u64,
    /// Fermat indices for the F and L2 claims
    #[arg(long, value_delimiter = ',', default_value = "5,6")]
    fermat_indices: Vec<u32>,
    /// Write the JSON report here
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Worker threads
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Lucas,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, clap::Args)]
struct FermatArgs {
    #[arg(long)]
    index: u32,
    #[arg(long, value_enum, default_value_t = Mode::Lambda)]
    mode: Mode,
    /// Largest s (lucas) or number of lambda values (lambda) to try
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    /// Lambda skips mod 3, mod 4 and mod primes 3 (mod 4)
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    filters: Switch,
    /// Largest prime for the lambda skips
    #[arg(long, default_value_t = 97)]
    prime_bound: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    /// Generators n, comma separated
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_nat)]
    targets: Vec<BigUint>,
    /// Strategy names, comma separated, or `all`
    #[arg(long, default_value = "all")]
    strategies: String,
    /// Write CSV rows here instead of standard output
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = quadfermat::bench::DEFAULT_REPETITIONS)]
    repetitions: usize,
    #[arg(long, default_value_t = 97)]
    prime_bound: u64,
    #[arg(long)]
    workers: Option<usize>,
    /// Print a JSON envelope instead of CSV on standard output
    #[arg(long)]
    json: bool,
}

fn parse_nat(s: &str) -> Result<BigUint, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a non-negative decimal integer"));
    }
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = lo
        .trim()
        .parse::<u64>()
        .map_err(|e| format!("lower end: {e}"))?;
    let hi = hi
        .trim()
        .parse::<u64>()
        .map_err(|e| format!("upper end: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("range {lo}:{hi} must satisfy 1 <= lo <= hi"));
    }
    Ok((lo, hi))
}

/// Outcome of a command that did not succeed.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: Option<String>,
}

impl Failure {
    pub fn negative() -> Self {
        Self {
            code: 1,
            message: None,
        }
    }

    pub fn invalid(message: impl ToString) -> Self {
        Self {
            code: 2,
            message: Some(message.to_string()),
        }
    }

    pub fn inconsistent(message: impl ToString) -> Self {
        Self {
            code: 3,
            message: Some(message.to_string()),
        }
    }
}

impl From<quadfermat::Error> for Failure {
    fn from(e: quadfermat::Error) -> Self {
        Failure::invalid(e)
    }
}

pub type Outcome = Result<(), Failure>;

fn init_workers(workers: Option<usize>) -> Outcome {
    if let Some(k) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(Failure::invalid)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Factor(a) => commands::factor::run(a),
        Command::FactorGeneric(a) => commands::factor::run_generic(a),
        Command::Candidates(a) => commands::candidates::run(a),
        Command::Audit(a) => {
            init_workers(a.workers)?;
            commands::audit::run(a)
        }
        Command::Fermat(a) => commands::fermat::run(a),
        Command::Bench(a) => {
            init_workers(a.workers)?;
            commands::bench::run(a)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(message) = f.message {
                eprintln!("error: {message}");
            }
            ExitCode::from(f.code)
        }
    }
}

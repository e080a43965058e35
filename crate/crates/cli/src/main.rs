//! `lpf`: bounds, the reproduction run and desk-scale empirical checks for
//! large prime factors of `n^3 + 2`.
//!
//! Exit codes: 0 success or PASS, 1 usage, 2 computation failure,
//! 3 reproduction FAIL.

mod commands;
mod document;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpf_core::bounds::Delta;

use crate::document::{render_text, Document};

#[derive(Debug, Parser)]
#[command(
    name = "lpf",
    version,
    about = "Explicit bounds and empirical checks for large prime factors of n^3 + 2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "LPF_JOBS")]
    pub jobs: Option<usize>,

    /// Write the document here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Manifest timestamp (default: SOURCE_DATE_EPOCH, then the current time)
    #[arg(long, global = true)]
    pub timestamp: Option<String>,

    /// No per-segment progress on stderr
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound coefficient
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Run the full aggregation and compare with the published constants
    Reproduce(ReproduceArgs),
    /// Desk-scale factorisation and prime-sum checks
    #[command(subcommand)]
    Empirical(EmpiricalCommand),
    /// Re-run the manifest of a saved document and compare byte for byte
    Replay { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BoundCommand {
    /// (1/k!) (ln((deg-(k-1)δ)/((h-k+1)δ)))^k with k = [h/deg]
    First(FirstArgs),
    /// Tilted bound summed over k = [h/3]..K-1 plus the box term at K
    Second(SecondArgs),
    /// Monte-Carlo estimate of an exact region integral next to its closed form
    Mc(McArgs),
}

fn parse_delta(s: &str) -> Result<Delta, String> {
    s.parse::<Delta>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct FirstArgs {
    #[arg(long = "h")]
    pub h: u32,
    #[arg(long, value_parser = parse_delta)]
    pub delta: Delta,
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
}

#[derive(Debug, Args)]
pub struct SecondArgs {
    #[arg(long = "h")]
    pub h: u32,
    #[arg(long, value_parser = parse_delta)]
    pub delta: Delta,
    /// K = [h/3] + offset, clamped to h - 1
    #[arg(long = "K-offset", default_value_t = 20)]
    pub k_offset: u32,
    /// Fixed tilt for every term instead of optimising per k
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "rel-tol", default_value_t = 1e-12)]
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McRegion {
    First,
    Maximal,
    MaximalLower,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long = "h")]
    pub h: u32,
    #[arg(long = "k")]
    pub k: u32,
    #[arg(long, value_parser = parse_delta)]
    pub delta: Delta,
    #[arg(long, value_enum, default_value_t = McRegion::First)]
    pub region: McRegion,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_parser = parse_delta, default_value = "1/321")]
    pub delta: Delta,
    #[arg(long = "H", default_value_t = 132)]
    pub big_h: u32,
    /// First h handled by the first estimate; the second estimate covers H+1..split-1
    #[arg(long, default_value_t = 190)]
    pub split: u32,
    #[arg(long = "h-max", default_value_t = 963)]
    pub h_max: u32,
    #[arg(long = "K-offset", default_value_t = 20)]
    pub k_offset: u32,
    #[arg(long = "s-lower", default_value_t = 9.2e-8)]
    pub s_lower: f64,
    #[arg(long = "rel-tol", default_value_t = 1e-12)]
    pub rel_tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum EmpiricalCommand {
    /// Count n in (x_min, x_max] with at least h prime factors >= threshold in n^3 + 2
    Count(CountArgs),
    /// Σ_{p<=x} ν(p) ln p / p - ln x at decades up to the limit
    Mertens {
        #[arg(long)]
        limit: u64,
    },
    /// Number of roots of n^3 + 2 modulo d
    Nu {
        #[arg(long = "d")]
        d: u64,
    },
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long = "x-min")]
    pub x_min: u64,
    #[arg(long = "x-max")]
    pub x_max: u64,
    #[arg(long)]
    pub threshold: u128,
    #[arg(long = "h")]
    pub h: u32,
    #[arg(long = "segment-size", default_value_t = 65_536)]
    pub segment_size: u64,
    /// Binary (prime, roots) table, reused when it covers x_max
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

/// Why a run did not produce a passing document.
pub enum Failure {
    Usage(String),
    Computation(String),
}

fn emit(cli: &Cli, doc: &Document) -> Result<(), Failure> {
    let body = match cli.format {
        Format::Json => doc.to_json(),
        Format::Text => render_text(doc),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Computation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::Computation(format!("cannot write output: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        lpf_core::exec::set_worker_count(jobs).map_err(Failure::Computation)?;
    }
    let doc = match &cli.command {
        Command::Replay { file } => return commands::replay(cli, file),
        other => commands::execute(other, cli)?,
    };
    emit(cli, &doc)?;
    Ok(status_code(&doc))
}

pub fn status_code(doc: &Document) -> ExitCode {
    if doc.status == "FAIL" {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

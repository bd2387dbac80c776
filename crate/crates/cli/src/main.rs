//! `stsdesign`: construct, verify and analyse Steiner triple systems.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{CliError, Exit};

#[derive(Parser, Debug)]
#[command(name = "stsdesign", version, about = "Steiner triple systems with few disjoint parallel classes")]
pub struct Cli {
    /// Print a JSON document instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for batch work (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Arithmetic behind the parallel-class bounds.
    #[command(subcommand)]
    Numtheory(NumtheoryCmd),
    /// 1-factorisation of G(n) with the weight properties.
    Factorise {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a system.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Built-in systems.
    #[command(subcommand)]
    Fixture(FixtureCmd),
    /// Check a system file, and optionally a colouring of it.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        colouring: Option<PathBuf>,
    },
    /// Parallel classes, bounds and chromatic index of a system file.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Whether some STS(v) needs more than (v+1)/2 colours.
    Theorem1 {
        #[arg(long)]
        v: u32,
    },
    /// Random systems by hill climbing.
    Generate {
        #[arg(long)]
        v: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Surveys over random systems.
    #[command(subcommand)]
    Survey(SurveyCmd),
}

#[derive(Subcommand, Debug)]
pub enum NumtheoryCmd {
    /// g, f, ψ and ψ* for one n.
    Profile {
        #[arg(long)]
        n: u64,
    },
    /// Table of n, φ, f, ψ, ψ* for admissible n ≤ limit.
    Scan {
        #[arg(long)]
        limit: u64,
        /// Only rows with ψ(n) < 0.
        #[arg(long)]
        negative_psi: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SquareKind {
    HalfSum,
    Conjugate,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// STS(n+2) for n ≡ 1 (mod 6).
    WilsonSchreiber {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// STS(3n) for n ≡ 5 (mod 6).
    Bose {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SquareKind::HalfSum)]
        square: SquareKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixtureCmd {
    /// The cyclic STS(33) and its 18-class colouring.
    Sts33 {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        colouring_out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BudgetArgs {
    /// Search node limit.
    #[arg(long, env = "STS_BUDGET_NODES", default_value_t = 100_000_000)]
    pub budget_nodes: u64,
    /// Wall-clock limit in seconds (0 for none).
    #[arg(long, env = "STS_BUDGET_SECONDS", default_value_t = 60)]
    pub budget_seconds: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoundKind {
    Mod3,
    Ws,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCmd {
    /// Parallel classes (count, or the largest disjoint family).
    Pcs {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_disjoint: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Chromatic index.
    Chi {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        #[arg(long, requires = "target")]
        heuristic: bool,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        restarts: u32,
        /// A known colouring, used as the starting upper bound.
        #[arg(long, conflicts_with = "heuristic")]
        colouring: Option<PathBuf>,
        /// Write the best colouring found.
        #[arg(long)]
        colouring_out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Certified bound on disjoint parallel classes.
    Bound {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: BoundKind,
        /// `auto`, or comma-separated point weights in 0..3.
        #[arg(long, default_value = "auto")]
        weighting: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SurveyCmd {
    /// Heuristic colouring at m(v), m(v)+1, m(v)+2 classes.
    Colouring {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        restarts: u32,
        #[arg(long, default_value_t = 5_000)]
        iterations: u64,
    },
}

fn configure_threads(threads: Option<u16>) -> Result<(), CliError> {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.into())
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot start {n} threads: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = configure_threads(cli.threads).and_then(|()| commands::run(cli.command));
    match result {
        Ok(report) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report.envelope()).expect("JSON output"));
            } else {
                print!("{}", report.text);
                if !report.text.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::from(report.exit as u8)
        }
        Err(err) => {
            if json {
                let doc = serde_json::json!({
                    "schema": report::SCHEMA,
                    "status": if err.exit == Exit::Usage { "usage" } else { "failed" },
                    "error": err.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("JSON output"));
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit as u8)
        }
    }
}

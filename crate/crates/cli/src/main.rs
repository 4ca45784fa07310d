//! `catmouse`: command-line front end for the cats-and-mouse library.
//!
//! Payloads go to stdout as JSON; diagnostics go to stderr. Exit codes:
//! 0 success, 1 a checked property failed, 2 bad input or capacity.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "catmouse", version, about = "Cats hunting an invisible mouse on trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    /// A' = N(A) minus the shot.
    Paper,
    /// A' = N(A minus the shot).
    Stm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Basic,
    Improved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Path,
    Star,
    Spider,
    Tk,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArithCheck {
    Arithmetic,
    Approximate,
    Boundary,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Exact hunter number with a shortest witness schedule.
    Solve {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_cats: usize,
        #[arg(long, value_enum, default_value = "paper")]
        semantics: SemanticsArg,
    },
    /// Solver and strategy cat counts for every tree up to an order.
    Survey {
        #[arg(long)]
        max_order: usize,
        /// Also write the table as CSV.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Generate a cat schedule.
    Strategy {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        tree: PathBuf,
        /// Convert the improved (class-one) schedule to the standard game.
        #[arg(long)]
        standard: bool,
        /// Replay the schedule and fail with exit code 1 if it does not win.
        #[arg(long)]
        certify: bool,
        /// Write the schedule here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Replay a schedule file.
    Verify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Write the round-by-round trace here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Write a tree.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Order (path, random) or number of leaves plus one (star).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        /// Leg lengths of a spider, comma separated.
        #[arg(long, value_delimiter = ',')]
        legs: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Survival runs on T_k against generated schedules.
    Lowerbound {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "1/20")]
        eps: String,
        #[arg(long, default_value_t = 1000)]
        schedules: usize,
        #[arg(long, default_value_t = 32)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        audit: bool,
    },
    /// Checks on pattern counts, signed binary weights and boundaries.
    Arith {
        #[arg(long, value_enum)]
        check: ArithCheck,
        /// Range bound (arithmetic, oracle) or sample count (approximate,
        /// sampled boundary).
        #[arg(long)]
        limit: u64,
        /// Height for the boundary check; exhaustive when at most 3.
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { tree, max_cats, semantics } => commands::solve(&tree, max_cats, semantics),
        Command::Survey { max_order, emit } => commands::survey(max_order, emit.as_deref()),
        Command::Strategy { algo, tree, standard, certify, emit } => {
            commands::strategy(algo, &tree, standard, certify, emit.as_deref())
        }
        Command::Verify { tree, schedule, emit } => commands::verify(&tree, &schedule, emit.as_deref()),
        Command::Gen { family, n, k, legs, seed, format, emit } => {
            commands::gen(family, n, k, &legs, seed, format, emit.as_deref())
        }
        Command::Lowerbound { k, eps, schedules, rounds, seed, audit } => {
            commands::lowerbound(k, &eps, schedules, rounds, seed, audit)
        }
        Command::Arith { check, limit, k, eps, seed } => commands::arith(check, limit, k, &eps, seed),
    };
    match result {
        Ok(out) => {
            if !out.payload.is_empty() {
                // a closed pipe (e.g. `| head`) is not an error
                let _ = writeln!(std::io::stdout().lock(), "{}", out.payload);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

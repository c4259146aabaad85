//! `robust-crt` command-line front end. Prints one JSON document on stdout.
//!
//! Exit codes: 0 success, 2 domain error, 3 usage error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::output::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "robust-crt",
    version,
    about = "Generalized and robust Chinese remainder reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve x = r_i (mod d*m_i) exactly.
    Solve {
        #[arg(long, value_parser = parse_list)]
        moduli: IntList,
        #[arg(long)]
        d: BigInt,
        #[arg(long, value_parser = parse_list)]
        remainders: IntList,
    },
    /// Estimate N from remainders carrying errors below d/4.
    Reconstruct {
        #[arg(long, value_parser = parse_list)]
        moduli: IntList,
        #[arg(long)]
        d: BigInt,
        #[arg(long, value_parser = parse_list)]
        remainders: IntList,
        #[arg(long, value_enum)]
        algo: Algo,
    },
    /// Run an exhaustive or seeded random verification campaign.
    Simulate {
        #[arg(long, value_enum)]
        mode: SimMode,
        #[arg(long, value_parser = parse_list)]
        moduli: IntList,
        #[arg(long)]
        d: BigInt,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// `paper` (or `quarter`) for ceil(d/4) - 1, or an explicit integer bound.
        #[arg(long, default_value = "paper")]
        bound: String,
        /// Comma-separated subset of quotient,wangxia,extremes.
        #[arg(long, default_value = "quotient,wangxia,extremes")]
        algos: String,
        /// Write one row per trial and algorithm to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build the counterexample showing errors of d/4 are not identifiable.
    Sharpness {
        #[arg(long)]
        p: BigInt,
        #[arg(long)]
        q: BigInt,
        #[arg(long)]
        d: BigInt,
    },
    /// Recover the reference quotient for arbitrary moduli.
    GenRecover {
        #[arg(long, value_parser = parse_list)]
        moduli: IntList,
        #[arg(long, value_parser = parse_list)]
        remainders: IntList,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algo {
    Quotient,
    #[value(alias = "wang_xia")]
    Wangxia,
    Extremes,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SimMode {
    Exhaustive,
    Random,
}

type IntList = Vec<BigInt>;

fn parse_list(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<BigInt>()
                .map_err(|e| format!("{x:?}: {e}"))
        })
        .collect()
}

fn run(cli: Cli) -> Result<serde_json::Value, CliError> {
    match cli.command {
        Command::Solve {
            moduli,
            d,
            remainders,
        } => commands::solve(moduli, d, &remainders),
        Command::Reconstruct {
            moduli,
            d,
            remainders,
            algo,
        } => commands::reconstruct(moduli, d, remainders, algo),
        Command::Simulate {
            mode,
            moduli,
            d,
            trials,
            seed,
            bound,
            algos,
            csv,
        } => commands::simulate(commands::SimArgs {
            mode,
            moduli,
            d,
            trials,
            seed,
            bound,
            algos,
            csv,
        }),
        Command::Sharpness { p, q, d } => commands::sharpness(p, q, d),
        Command::GenRecover { moduli, remainders } => commands::gen_recover(moduli, &remainders),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return CliError::Usage(e.kind().to_string()).emit();
        }
    };
    match run(cli) {
        Ok(doc) => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            ExitCode::SUCCESS
        }
        Err(e) => e.emit(),
    }
}

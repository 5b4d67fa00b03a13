use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use convlab::commands::{self, CertMode, Outcome, SearchOpts, Target};
use convlab::CliError;
use convlab_core::search::OracleMode;

/// Convolutional codes over finite fields: search, certification and
/// conversion between generator matrices, realizations and Markov data.
#[derive(Parser)]
#[command(name = "convlab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for an (n, k, delta) code with certified MDP and sMDS data.
    Search {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'd')]
        delta: usize,
        /// Use fields of characteristic p instead of GF(2^m).
        #[arg(long = "char")]
        char_p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per field.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Oracle::Auto)]
        oracle: Oracle,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write <prefix>.code, <prefix>.real and <prefix>.markov.
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a property of a code, realization or Markov file.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
    },
    /// Convert between a code and a realization.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: To,
    },
    /// Column distances d_0..d_J and the free distance.
    Distances {
        file: PathBuf,
        #[arg(long)]
        jmax: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    On,
    Off,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Mdp,
    Smds,
    Distances,
}

#[derive(Clone, Copy, ValueEnum)]
enum To {
    Code,
    Realization,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.cmd {
        Cmd::Search { n, k, delta, char_p, seed, trials, oracle, report, out } => {
            let oracle = match oracle {
                Oracle::On => OracleMode::On,
                Oracle::Off => OracleMode::Off,
                Oracle::Auto => OracleMode::Auto,
            };
            commands::search(&SearchOpts {
                n,
                k,
                delta,
                char_p,
                seed,
                trials,
                oracle,
                report: report.as_deref(),
                out: out.as_deref(),
            })
        }
        Cmd::Certify { file, property } => {
            let mode = match property {
                Property::Mdp => CertMode::Mdp,
                Property::Smds => CertMode::Smds,
                Property::Distances => CertMode::Distances,
            };
            commands::certify(&file, mode)
        }
        Cmd::Convert { file, to } => {
            let target = match to {
                To::Code => Target::Code,
                To::Realization => Target::Realization,
            };
            commands::convert(&file, target)
        }
        Cmd::Distances { file, jmax } => commands::distances(&file, jmax),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("convlab: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}

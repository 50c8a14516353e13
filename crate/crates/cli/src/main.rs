use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use channellab::commands::{self, OracleOptions, Output};
use channellab::{CliError, CliResult};
use channellab_core::lyapunov::Functional;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

/// Ergodicity and mixing analysis for quantum channels.
#[derive(Debug, Parser)]
#[command(name = "channellab", version)]
struct Cli {
    /// Seed for every random choice (oracle probe states).
    #[arg(long, global = true, env = "CHANNELLAB_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check trace preservation and complete positivity.
    Validate { file: PathBuf },
    /// Classify as mixing, ergodic but not mixing, or not ergodic.
    Classify {
        file: PathBuf,
        /// Cross-check against brute-force iteration of probe states.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 2000)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print an orbit as JSON lines.
    Orbit {
        file: PathBuf,
        /// basis:k, mixed, or a JSON density matrix.
        #[arg(long, default_value = "basis:0")]
        state: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Comma-separated: trivial_lyapunov, relative_entropy, von_neumann_entropy.
        #[arg(long, value_delimiter = ',', value_parser = parse_functional)]
        functionals: Vec<Functional>,
    },
    /// Analyze a dilation unitary with a conserved additive charge.
    Dilation { file: PathBuf },
    /// Cesàro time average and its distance to the fixed point.
    Cesaro {
        file: PathBuf,
        #[arg(long, default_value = "basis:0")]
        state: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// List the built-in channel catalog.
    ZooList,
    /// Print a catalog entry as a channel document.
    ZooEmit {
        name: String,
        /// Emit the dilation instance document instead.
        #[arg(long)]
        dilation: bool,
    },
}

fn parse_functional(s: &str) -> Result<Functional, String> {
    Functional::parse(s).ok_or_else(|| {
        let known: Vec<&str> = Functional::ALL.iter().map(|f| f.name()).collect();
        format!("unknown functional {s:?} (known: {})", known.join(", "))
    })
}

fn run(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Classify { file, oracle, nmax, tol } => {
            if oracle && nmax < 100 {
                return Err(CliError::Usage(format!("--nmax must be at least 100, got {nmax}")));
            }
            if !(tol > 0.0) {
                return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
            }
            commands::classify(&file, oracle.then_some(OracleOptions { n_max: nmax, tol, seed: cli.seed }))
        }
        Command::Orbit { file, state, n, functionals } => commands::orbit(&file, &state, n, &functionals),
        Command::Dilation { file } => commands::dilation(&file),
        Command::Cesaro { file, state, n } => commands::cesaro(&file, &state, n),
        Command::ZooList => Ok(commands::zoo_list()),
        Command::ZooEmit { name, dilation } => commands::zoo_emit(&name, dilation),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let (output, failure) = match run(cli) {
        Ok(out) => (Some(out.text), out.failure),
        Err(e) => (None, Some(e)),
    };
    if let Some(text) = output {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{text}");
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("channellab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

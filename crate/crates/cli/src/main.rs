use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toepcov_cli::commands;
use toepcov_cli::registry::OrderChoice;

/// Toeplitz covariance estimation and Monte Carlo benchmarks.
#[derive(Parser)]
#[command(name = "toepcov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one estimator to a CSV file of samples and print a JSON report.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        estimator: String,
        /// AR order (or mask bandwidth): `auto` or an integer.
        #[arg(long, default_value = "auto")]
        order: OrderChoice,
        /// Include the inverse covariance estimate.
        #[arg(long)]
        icm: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo benchmark described by a TOML config.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "toepcov-out")]
        out: PathBuf,
        /// Also write SVG charts.
        #[arg(long)]
        svg: bool,
    },
    /// Time every estimator with hyperparameters pinned to 6.
    Timing {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long, default_value = "toepcov-timing")]
        out: PathBuf,
    },
    /// List the registered estimators.
    ListEstimators,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                commands::EXIT_USAGE
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Estimate {
            input,
            estimator,
            order,
            icm,
            out,
        } => commands::estimate_cmd(input, estimator, *order, *icm, out.as_deref()),
        Command::Benchmark {
            config,
            runs,
            seed,
            out,
            svg,
        } => commands::benchmark_cmd(config, *runs, *seed, out, *svg),
        Command::Timing { config, runs, out } => commands::timing_cmd(config, *runs, out),
        Command::ListEstimators => {
            print!("{}", commands::list_estimators());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

//! Thin command-line front end: argument parsing, thread-pool setup, and
//! report/error output. All real work happens in the library.

use clap::{Parser, Subcommand};
use equibreak::cli::{self, Command, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "equibreak",
    version,
    about = "Breakdown-point search and equivariance checking for robust estimators",
    after_help = "Set EQUIBREAK_THREADS to cap the search pool's thread count."
)]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// Input CSV file (one row per observation).
    #[arg(long, global = true)]
    data: Option<PathBuf>,

    /// Sample-space kind: euclidean:D, regression:K, binary:K, time, positive.
    #[arg(long, global = true)]
    kind: Option<String>,

    /// Estimator name(s), comma-separated or repeated.
    #[arg(long, global = true, value_delimiter = ',')]
    estimator: Vec<String>,

    /// Group family: translation:D, affine:D, orthogonal:D, carrier:K,
    /// scale-x, binary:K.
    #[arg(long, global = true)]
    group: Option<String>,

    /// Metric name: for `bound` a parameter metric (euclidean, scale-log,
    /// log-det, michaelis-menten); for `contamination` a distribution
    /// metric (tv, kuiper:N).
    #[arg(long, global = true)]
    metric: Option<String>,

    /// Largest number of replaced points to try (default: sample size).
    #[arg(long, global = true)]
    k_max: Option<usize>,

    /// Contamination ladder runs 10^1 .. 10^EXP.
    #[arg(long, global = true, default_value_t = 12)]
    ladder_max_exp: u32,

    /// Regularization weight for the penalized logistic fit.
    #[arg(long, global = true, default_value_t = 1e-3)]
    epsilon: f64,

    /// Number of random group elements per equivariance run.
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,

    /// Seed for all randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Skip the first CSV row.
    #[arg(long, global = true)]
    has_header: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate estimators and emit their parameter values.
    Estimate,
    /// Search for the smallest breaking replacement count, with closed
    /// forms and degeneracy bounds alongside.
    Breakdown,
    /// Report the degenerate mass and the breakdown caps it implies.
    Bound,
    /// Run randomized transform-then-estimate trials.
    Equivariance,
    /// Grid-search the smallest breaking mixture weight.
    Contamination,
    /// Run the built-in battery and compare against expected values.
    Replicate,
}

fn to_config(args: &Args) -> RunConfig {
    let command = match args.command {
        Cmd::Estimate => Command::Estimate,
        Cmd::Breakdown => Command::Breakdown,
        Cmd::Bound => Command::Bound,
        Cmd::Equivariance => Command::Equivariance,
        Cmd::Contamination => Command::Contamination,
        Cmd::Replicate => Command::Replicate,
    };
    RunConfig {
        command,
        data: args.data.as_ref().map(|p| p.to_string_lossy().into_owned()),
        kind: args.kind.clone(),
        estimators: args.estimator.clone(),
        group: args.group.clone(),
        metric: args.metric.clone(),
        k_max: args.k_max,
        ladder_max_exp: args.ladder_max_exp,
        epsilon: args.epsilon,
        trials: args.trials,
        seed: args.seed,
        has_header: args.has_header,
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("EQUIBREAK_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // A failure here means a pool already exists; that pool wins.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("EQUIBREAK_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let args = Args::parse();
    let config = to_config(&args);
    match cli::run(&config) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Err(e) = write_output(&args.out, &text) {
                eprintln!("cannot write report: {e}");
                return ExitCode::from(2);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let text = serde_json::to_string_pretty(&cli::error_object(&config, &err))
                .expect("error object serializes");
            if write_output(&args.out, &text).is_err() {
                eprintln!("{err}");
            }
            ExitCode::from(2)
        }
    }
}

use std::path::PathBuf;

use clap::Parser;
use toolkit::config::Task;
use toolkit::{execute, Invocation};

/// Ground states, interaction scans and lemma checks for the zero-mass
/// scalar field equation.
#[derive(Parser, Debug)]
#[command(name = "toolkit", version)]
struct Cli {
    /// Task to run.
    #[arg(value_enum)]
    task: Task,
    /// Experiment configuration (JSON, "schema": 1).
    #[arg(long)]
    config: PathBuf,
    /// Override a configuration entry, e.g. `--set tolerances.epsilon_slope=0.001`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for row-parallel scans.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for Monte Carlo quadrature and random isometries.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    let cli = Cli::parse();
    let inv = Invocation {
        task: cli.task,
        config: cli.config,
        overrides: cli.overrides,
        out: cli.out,
        threads: cli.threads,
        seed: cli.seed,
    };
    std::process::exit(execute(&inv));
}

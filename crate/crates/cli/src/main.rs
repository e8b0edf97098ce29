use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pnn_cli::{run, write_csv, CliError, Command, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "pnn", version, about = "Seeded experiments for parametrical neural networks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Monte Carlo retrieval sweep over q, M, a or b
    Sweep(Common),
    /// Decorrelating PNN vs. plain Hopfield on correlated binary patterns
    DpnnBench(Common),
    /// q-nary identifier accuracy and field-evaluation count
    IdentifyBench(Common),
    /// Closed-form bounds and capacities over a grid
    Theory(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Flat key=value file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "N", alias = "n")]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long = "M", alias = "m")]
    m: Option<usize>,
    /// Pattern load M/N (overrides --M)
    #[arg(long)]
    load: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// pnn2 | pnn3
    #[arg(long)]
    kind: Option<String>,
    /// DPNN mapping parameter
    #[arg(long)]
    k: Option<u32>,
    /// Template overlap of the correlated ensemble
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    max_sweeps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Variable to sweep
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated grid values for --sweep
    #[arg(long)]
    grid: Option<String>,
    /// Worker threads for trials (output does not depend on this)
    #[arg(long)]
    threads: Option<usize>,
    /// CSV output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_config(command: Command, args: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::new(command);
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    let flags: [(&str, Option<String>); 16] = [
        ("N", args.n.map(|v| v.to_string())),
        ("q", args.q.map(|v| v.to_string())),
        ("M", args.m.map(|v| v.to_string())),
        ("load", args.load.map(|v| v.to_string())),
        ("a", args.a.map(|v| v.to_string())),
        ("b", args.b.map(|v| v.to_string())),
        ("kind", args.kind.clone()),
        ("k", args.k.map(|v| v.to_string())),
        ("c", args.c.map(|v| v.to_string())),
        ("trials", args.trials.map(|v| v.to_string())),
        ("max_sweeps", args.max_sweeps.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("sweep", args.sweep.clone()),
        ("grid", args.grid.clone()),
        ("threads", args.threads.map(|v| v.to_string())),
        ("out", args.out.as_ref().map(|p| p.display().to_string())),
    ];
    for (key, value) in flags {
        if let Some(value) = value {
            cfg.set(key, &value)?;
        }
    }
    // an explicit --M beats a load from the config file
    if args.m.is_some() && args.load.is_none() {
        cfg.load = None;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (command, args) = match &cli.command {
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::DpnnBench(a) => (Command::DpnnBench, a),
        Cmd::IdentifyBench(a) => (Command::IdentifyBench, a),
        Cmd::Theory(a) => (Command::TheoryTable, a),
    };
    let cfg = build_config(command, args)?;
    let report = run(&cfg)?;
    for line in &report.diagnostics {
        eprintln!("{line}");
    }
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_csv(&report.rows, BufWriter::new(file))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_csv(&report.rows, &mut lock)?;
            lock.flush().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

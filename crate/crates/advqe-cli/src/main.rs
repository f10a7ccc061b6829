use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use advqe_cli::{config, experiment};

/// Solve the 1D periodic advection-diffusion equation by per-step VQE
/// ground-state searches on an exact statevector simulator, benchmark the
/// result against a forward-Euler reference, and account gate resources.
#[derive(Debug, Parser)]
#[command(name = "advqe", version, about)]
struct Cli {
    /// TOML configuration file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Peclet number.
    #[arg(long)]
    pe: Option<f64>,

    /// Number of field qubits (grid has 2^qubits points).
    #[arg(long)]
    qubits: Option<usize>,

    /// Time step.
    #[arg(long)]
    dt: Option<f64>,

    /// Final time.
    #[arg(long)]
    tmax: Option<f64>,

    /// Comma-separated ansatz depths to sweep, e.g. 1,2,5,10.
    #[arg(long, value_delimiter = ',')]
    layers: Option<Vec<usize>>,

    /// Restart candidates for each from-scratch solve.
    #[arg(long)]
    restarts: Option<u32>,

    /// Seed for the restart draws.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for CSV files and the plot script.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print the gate-resource comparison table.
    #[arg(long)]
    report_gates: bool,

    /// Comma-separated snapshot times, each a multiple of dt.
    #[arg(long, value_delimiter = ',')]
    snapshot_times: Option<Vec<f64>>,
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();

    let file = match cli.config.as_deref().map(config::FileConfig::load) {
        None => None,
        Some(Ok(file)) => Some(file),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };

    let flags = config::Overrides {
        pe: cli.pe,
        qubits: cli.qubits,
        dt: cli.dt,
        tmax: cli.tmax,
        layers: cli.layers,
        snapshot_times: cli.snapshot_times,
        restarts: cli.restarts,
        seed: cli.seed,
        out: cli.out,
        report_gates: cli.report_gates,
    };

    let run_config = match config::parse_config(file.as_ref(), &flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };

    match experiment::run_experiment(&run_config) {
        Ok(report) => {
            if !report.all_succeeded() {
                eprintln!("error: one or more layer runs failed; partial outputs retained");
                ExitCode::from(EXIT_RUNTIME)
            } else if !report.all_converged() {
                eprintln!("warning: some steps did not meet the convergence tolerances");
                ExitCode::from(EXIT_RUNTIME)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

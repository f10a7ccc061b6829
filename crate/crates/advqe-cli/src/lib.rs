//! Experiment harness for the advection-diffusion VQE solver.
//!
//! Wires `advqe-core` to the filesystem and a command line: TOML/flag
//! configuration with the reference experiment as the default, a parallel
//! layer sweep sharing one DNS trajectory, CSV artifacts, a standalone plot
//! script, and the gate-resource comparison table.

pub mod config;
pub mod experiment;
pub mod report;

pub use config::{parse_config, ConfigError, FileConfig, Overrides, RunConfig};
pub use experiment::{run_experiment, ExperimentError, ExperimentReport, LayerOutcome};
pub use report::emit_comparison_report;

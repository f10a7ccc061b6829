//! Run configuration: defaults, TOML files and command-line overrides.
//!
//! Precedence is flags over file over defaults. The defaults reproduce the
//! reference experiment: `Pe = 32`, 4 qubits, `dt = 0.002` until `t = 1.0`,
//! a layer sweep from 1 to 10, and field snapshots at `t = 0, 0.25, 0.75,
//! 1.0`.

use std::fmt;
use std::path::{Path, PathBuf};

use advqe_core::pde::{self, PdeConfig};
use advqe_core::vqe::VqeOptions;
use serde::Deserialize;

/// A fully validated experiment configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// PDE and discretization parameters.
    pub pde: PdeConfig,
    /// Ansatz depths to march, in the order they will be reported.
    pub layers_sweep: Vec<usize>,
    /// Times at which field snapshots are written; each must sit on the
    /// step grid.
    pub snapshot_times: Vec<f64>,
    /// Per-step solver options (tolerances, budget, restarts, seed).
    pub opts: VqeOptions,
    /// Output directory for CSV files and the plot script.
    pub out_dir: PathBuf,
    /// Also print the gate-resource comparison table.
    pub report_gates: bool,
}

/// Configuration error: either unreadable/unparsable input or a violated
/// constraint.
#[derive(Debug)]
pub enum ConfigError {
    /// The file could not be read.
    Io(PathBuf, std::io::Error),
    /// The file is not valid TOML (message carries line/column context).
    Parse(PathBuf, toml::de::Error),
    /// A value violates its constraint.
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(path, e) => write!(f, "cannot read {}: {e}", path.display()),
            ConfigError::Parse(path, e) => write!(f, "malformed config {}: {e}", path.display()),
            ConfigError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Optional values as they appear in a TOML config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Peclet number.
    pub pe: Option<f64>,
    /// Number of field qubits.
    pub qubits: Option<usize>,
    /// Time step.
    pub dt: Option<f64>,
    /// Final time.
    pub tmax: Option<f64>,
    /// Ansatz depths to sweep.
    pub layers: Option<Vec<usize>>,
    /// Snapshot times.
    pub snapshot_times: Option<Vec<f64>>,
    /// Cost tolerance for per-step convergence.
    pub cost_tol: Option<f64>,
    /// Gradient tolerance for per-step convergence.
    pub grad_tol: Option<f64>,
    /// Optimizer iteration budget per solve.
    pub max_iters: Option<usize>,
    /// Restart candidates per from-scratch solve.
    pub restarts: Option<u32>,
    /// Seed for restart draws.
    pub seed: Option<u64>,
    /// Output directory.
    pub out: Option<PathBuf>,
    /// Print the gate-resource table.
    pub report_gates: Option<bool>,
}

impl FileConfig {
    /// Reads and parses a TOML config file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse(path.to_path_buf(), e))
    }
}

/// Command-line overrides; every field beats the file and the defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    /// Peclet number.
    pub pe: Option<f64>,
    /// Number of field qubits.
    pub qubits: Option<usize>,
    /// Time step.
    pub dt: Option<f64>,
    /// Final time.
    pub tmax: Option<f64>,
    /// Ansatz depths to sweep.
    pub layers: Option<Vec<usize>>,
    /// Snapshot times.
    pub snapshot_times: Option<Vec<f64>>,
    /// Restart candidates per from-scratch solve.
    pub restarts: Option<u32>,
    /// Seed for restart draws.
    pub seed: Option<u64>,
    /// Output directory.
    pub out: Option<PathBuf>,
    /// Print the gate-resource table.
    pub report_gates: bool,
}

/// Merges defaults, an optional file and command-line overrides, then
/// validates the result.
pub fn parse_config(file: Option<&FileConfig>, flags: &Overrides) -> Result<RunConfig, ConfigError> {
    let file = file.cloned().unwrap_or_default();

    let pe = flags.pe.or(file.pe).unwrap_or(32.0);
    let qubits = flags.qubits.or(file.qubits).unwrap_or(4);
    let dt = flags.dt.or(file.dt).unwrap_or(0.002);
    let tmax = flags.tmax.or(file.tmax).unwrap_or(1.0);
    let layers_sweep = flags
        .layers
        .clone()
        .or(file.layers)
        .unwrap_or_else(|| (1..=10).collect());
    // The reference snapshot set assumes t_max = 1.0; when no times are
    // given, keep whichever reference points fit this run's grid and span,
    // and always include the endpoints.
    let snapshot_times = flags
        .snapshot_times
        .clone()
        .or(file.snapshot_times)
        .unwrap_or_else(|| {
            let mut times: Vec<f64> = [0.0, 0.25, 0.75, 1.0]
                .into_iter()
                .filter(|&t| {
                    let steps = t / dt;
                    t <= tmax + 1e-12 && (steps - steps.round()).abs() <= 1e-9
                })
                .collect();
            if times.last().copied() != Some(tmax) {
                times.push(tmax);
            }
            times
        });
    let defaults = VqeOptions::default();
    let opts = VqeOptions {
        cost_tol: file.cost_tol.unwrap_or(defaults.cost_tol),
        grad_tol: file.grad_tol.unwrap_or(defaults.grad_tol),
        max_iters: file.max_iters.unwrap_or(defaults.max_iters),
        restarts: flags.restarts.or(file.restarts).unwrap_or(defaults.restarts),
        seed: flags.seed.or(file.seed).unwrap_or(defaults.seed),
    };
    let out_dir = flags
        .out
        .clone()
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("results"));
    let report_gates = flags.report_gates || file.report_gates.unwrap_or(false);

    let pde = PdeConfig::new(pe, qubits, dt, tmax)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;

    let report = pde::stability_check(&pde);
    if !report.pass {
        return Err(ConfigError::Invalid(format!(
            "unstable time step: dt = {} with diffusive limit {}, CFL limit {}, \
             spectral radius {:.6} (must be <= 1 + 1e-12)",
            report.dt, report.diffusive_limit, report.cfl_limit, report.spectral_radius
        )));
    }

    if layers_sweep.is_empty() {
        return Err(ConfigError::Invalid("layer sweep is empty".into()));
    }
    if let Some(&bad) = layers_sweep.iter().find(|&&l| l == 0) {
        return Err(ConfigError::Invalid(format!(
            "layer counts must be positive, got {bad}"
        )));
    }

    let mut sorted = snapshot_times.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("snapshot times are finite"));
    if sorted != snapshot_times {
        return Err(ConfigError::Invalid(
            "snapshot times must be sorted ascending".into(),
        ));
    }
    for &t in &snapshot_times {
        if !(0.0..=pde.t_max() + 1e-12).contains(&t) {
            return Err(ConfigError::Invalid(format!(
                "snapshot time {t} outside [0, {}]",
                pde.t_max()
            )));
        }
        let steps = t / pde.dt();
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(ConfigError::Invalid(format!(
                "snapshot time {t} is not an integer multiple of dt = {}",
                pde.dt()
            )));
        }
    }

    if opts.restarts == 0 {
        return Err(ConfigError::Invalid("restarts must be at least 1".into()));
    }
    if opts.max_iters == 0 {
        return Err(ConfigError::Invalid("max_iters must be at least 1".into()));
    }
    if opts.cost_tol < 0.0 || opts.grad_tol < 0.0 || opts.cost_tol.is_nan() || opts.grad_tol.is_nan() {
        return Err(ConfigError::Invalid(
            "tolerances must be nonnegative".into(),
        ));
    }

    Ok(RunConfig {
        pde,
        layers_sweep,
        snapshot_times,
        opts,
        out_dir,
        report_gates,
    })
}

/// Step index of a snapshot time on the run's grid.
pub fn snapshot_step(config: &RunConfig, t: f64) -> usize {
    (t / config.pde.dt()).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_yields_reference_defaults() {
        let cfg = parse_config(None, &Overrides::default()).unwrap();
        assert_eq!(cfg.pde.peclet(), 32.0);
        assert_eq!(cfg.pde.n_qubits(), 4);
        assert_eq!(cfg.pde.n_steps(), 500);
        assert_eq!(cfg.layers_sweep, (1..=10).collect::<Vec<_>>());
        assert_eq!(cfg.snapshot_times, vec![0.0, 0.25, 0.75, 1.0]);
        assert_eq!(cfg.opts.restarts, 1);
        assert!(!cfg.report_gates);
    }

    #[test]
    fn unstable_step_is_rejected_with_stability_context() {
        let flags = Overrides {
            dt: Some(0.1),
            ..Overrides::default()
        };
        let err = parse_config(None, &flags).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unstable"), "message: {msg}");
        assert!(msg.contains("0.0625"), "message: {msg}");
    }

    #[test]
    fn flags_override_file_which_overrides_defaults() {
        let file = FileConfig {
            pe: Some(16.0),
            seed: Some(5),
            layers: Some(vec![2, 4]),
            ..FileConfig::default()
        };
        let flags = Overrides {
            pe: Some(64.0),
            ..Overrides::default()
        };
        let cfg = parse_config(Some(&file), &flags).unwrap();
        assert_eq!(cfg.pde.peclet(), 64.0);
        assert_eq!(cfg.opts.seed, 5);
        assert_eq!(cfg.layers_sweep, vec![2, 4]);
    }

    #[test]
    fn snapshot_times_must_sit_on_the_step_grid() {
        let flags = Overrides {
            snapshot_times: Some(vec![0.0, 0.0011]),
            ..Overrides::default()
        };
        let err = parse_config(None, &flags).unwrap_err();
        assert!(err.to_string().contains("integer multiple"));

        let unsorted = Overrides {
            snapshot_times: Some(vec![0.5, 0.25]),
            ..Overrides::default()
        };
        assert!(parse_config(None, &unsorted).is_err());
    }

    #[test]
    fn malformed_toml_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "pe = [not valid").unwrap();
        let err = FileConfig::load(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.toml"), "message: {msg}");
        assert!(msg.contains("line"), "message: {msg}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let parsed: Result<FileConfig, _> = toml::from_str("peclet_number = 32.0");
        assert!(parsed.is_err());
    }
}

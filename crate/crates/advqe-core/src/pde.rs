//! Finite-difference discretization of the periodic advection-diffusion
//! equation and its classical reference solutions.
//!
//! The dimensionless PDE `dC/dt + dC/dx = (1/Pe) d2C/dx2` on `x in [0, 1)`
//! with periodic boundaries is discretized by second-order central
//! differences on `2^N` points, giving `d|C>/dt = A |C>` with a circulant,
//! non-Hermitian `A`. Two time integrators are provided: the forward-Euler
//! stepper used as ground truth for the variational solver, and an exact
//! matrix-exponential propagator that serves as an independent oracle for
//! convergence checks.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;
use crate::linalg::{self, DenseOperator};

/// Largest register size the dense pipeline accepts.
const MAX_QUBITS: usize = 12;

/// Physical and numerical parameters of one advection-diffusion run.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeConfig {
    peclet: f64,
    n_qubits: usize,
    dt: f64,
    t_max: f64,
    n_steps: usize,
}

impl PdeConfig {
    /// Validates and builds a configuration.
    ///
    /// `t_max` must be an integer multiple of `dt` within `1e-12` relative;
    /// a zero `t_max` is allowed and produces a zero-step run.
    pub fn new(peclet: f64, n_qubits: usize, dt: f64, t_max: f64) -> Result<Self> {
        if peclet <= 0.0 || !peclet.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "Peclet number must be positive and finite, got {peclet}"
            )));
        }
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidConfig(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "time step must be positive and finite, got {dt}"
            )));
        }
        if t_max < 0.0 || !t_max.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "t_max must be nonnegative and finite, got {t_max}"
            )));
        }
        let n_steps = fmath::round(t_max / dt) as usize;
        let drift = fmath::abs(n_steps as f64 * dt - t_max);
        if drift > 1e-12 * fmath::abs(t_max).max(dt) {
            return Err(Error::InvalidConfig(format!(
                "t_max = {t_max} is not an integer multiple of dt = {dt}"
            )));
        }
        Ok(Self {
            peclet,
            n_qubits,
            dt,
            t_max,
            n_steps,
        })
    }

    /// Peclet number.
    pub fn peclet(&self) -> f64 {
        self.peclet
    }

    /// Number of qubits encoding the field.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Time step.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Final time.
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Number of Euler steps, `t_max / dt` exactly.
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points, `2^n_qubits`.
    pub fn grid_points(&self) -> usize {
        1 << self.n_qubits
    }

    /// Grid spacing, derived as `1 / 2^n_qubits`.
    pub fn dx(&self) -> f64 {
        1.0 / self.grid_points() as f64
    }
}

/// A sampled scalar field: raw values plus their cached L2 norm.
///
/// The raw values carry the physical amplitude (forward Euler conserves the
/// sum, not the norm); [`Field::normalized`] provides the unit-norm copy used
/// for quantum encoding, so both views coexist without information loss.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    values: Vec<f64>,
    norm: f64,
}

impl Field {
    /// Wraps raw sample values, caching their L2 norm.
    pub fn from_values(values: Vec<f64>) -> Self {
        let norm = fmath::sqrt(values.iter().map(|v| v * v).sum());
        Self { values, norm }
    }

    /// Rebuilds a field from a unit-norm vector and a separately tracked norm.
    pub fn from_normalized(unit: &[f64], norm: f64) -> Self {
        let values = unit.iter().map(|v| v * norm).collect();
        Self { values, norm }
    }

    /// Raw sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Cached L2 norm of the raw values.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the field has no samples.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of the raw values (the conserved discrete mass).
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Unit-norm copy of the values.
    ///
    /// Errors with [`Error::ZeroField`] when the norm is too small to divide.
    pub fn normalized(&self) -> Result<Vec<f64>> {
        if self.norm < 1e-300 {
            return Err(Error::ZeroField { norm: self.norm });
        }
        Ok(self.values.iter().map(|v| v / self.norm).collect())
    }
}

/// Piecewise-linear initial profile: zero, ramp up, plateau, ramp down, zero.
///
/// The default breakpoints put the ramps on `[0.125, 0.25)` and
/// `[0.625, 0.75)` with a unit plateau between them; the shape is
/// configurable because only its qualitative form is prescribed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidProfile {
    /// Start of the rising ramp.
    pub ramp_up_start: f64,
    /// Start of the plateau (end of the rising ramp).
    pub plateau_start: f64,
    /// End of the plateau (start of the falling ramp).
    pub plateau_end: f64,
    /// End of the falling ramp.
    pub ramp_down_end: f64,
    /// Plateau height.
    pub height: f64,
}

impl Default for TrapezoidProfile {
    fn default() -> Self {
        Self {
            ramp_up_start: 0.125,
            plateau_start: 0.25,
            plateau_end: 0.625,
            ramp_down_end: 0.75,
            height: 1.0,
        }
    }
}

impl TrapezoidProfile {
    /// Checks breakpoint ordering and bounds.
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 <= self.ramp_up_start
            && self.ramp_up_start <= self.plateau_start
            && self.plateau_start <= self.plateau_end
            && self.plateau_end <= self.ramp_down_end
            && self.ramp_down_end <= 1.0
            && self.height > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(
                "trapezoid breakpoints must satisfy 0 <= a <= b <= c <= d <= 1 with height > 0"
                    .to_string(),
            ))
        }
    }

    /// Profile value at position `x`.
    pub fn sample(&self, x: f64) -> f64 {
        if x < self.ramp_up_start || x >= self.ramp_down_end {
            0.0
        } else if x < self.plateau_start {
            self.height * (x - self.ramp_up_start) / (self.plateau_start - self.ramp_up_start)
        } else if x < self.plateau_end {
            self.height
        } else {
            self.height * (self.ramp_down_end - x) / (self.ramp_down_end - self.plateau_end)
        }
    }
}

/// Central-difference stencil coefficients `(b, c, d)` before the
/// `1/(Pe dx)` prefactor: diagonal, superdiagonal and subdiagonal weights.
///
/// They satisfy `b + c + d = 0`, which is what makes the discrete mass
/// `sum(C)` a conserved quantity.
pub fn coefficients(config: &PdeConfig) -> (f64, f64, f64) {
    let dx = config.dx();
    let b = -2.0 / dx;
    let c = 1.0 / dx - config.peclet() / 2.0;
    let d = 1.0 / dx + config.peclet() / 2.0;
    (b, c, d)
}

/// Assembles the circulant finite-difference operator `A`.
///
/// Row `i` of `A C` equals the discretized right-hand side `dC_i/dt`:
/// diagonal `b`, superdiagonal `c`, subdiagonal `d` with periodic corners,
/// all scaled by `1/(Pe dx)`. Non-Hermitian whenever advection is present.
pub fn build_operator(config: &PdeConfig) -> DenseOperator {
    let n = config.grid_points();
    let (b, c, d) = coefficients(config);
    let prefactor = 1.0 / (config.peclet() * config.dx());
    let mut a = DenseOperator::zeros(n).expect("grid size is a power of two");
    for i in 0..n {
        let add = |m: &mut DenseOperator, j: usize, v: f64| {
            let cur = m.entry(i, j);
            m.set_entry(i, j, cur + Complex64::new(v * prefactor, 0.0));
        };
        add(&mut a, i, b);
        add(&mut a, (i + 1) % n, c);
        add(&mut a, (i + n - 1) % n, d);
    }
    a
}

/// Closed-form eigenvalues of the circulant operator `A`.
///
/// With first row `(b, c, 0, ..., 0, d)`, the spectrum is
/// `(b + c w^j + d w^-j) / (Pe dx)` over the `n`-th roots of unity `w^j`;
/// the associated eigenvectors are the discrete Fourier modes.
pub fn operator_spectrum(config: &PdeConfig) -> Vec<Complex64> {
    let n = config.grid_points();
    let (b, c, d) = coefficients(config);
    let prefactor = 1.0 / (config.peclet() * config.dx());
    (0..n)
        .map(|j| {
            let theta = 2.0 * core::f64::consts::PI * j as f64 / n as f64;
            let (cos, sin) = (fmath::cos(theta), fmath::sin(theta));
            let fwd = Complex64::new(cos, sin);
            let bwd = Complex64::new(cos, -sin);
            (Complex64::new(b, 0.0) + c * fwd + d * bwd) * prefactor
        })
        .collect()
}

/// Samples the trapezoid initial condition on the grid.
pub fn initial_condition(config: &PdeConfig) -> Field {
    initial_condition_with(config, &TrapezoidProfile::default())
        .expect("default profile is valid")
}

/// Samples a custom trapezoid profile on the grid.
pub fn initial_condition_with(config: &PdeConfig, profile: &TrapezoidProfile) -> Result<Field> {
    profile.validate()?;
    let dx = config.dx();
    let values = (0..config.grid_points())
        .map(|i| profile.sample(i as f64 * dx))
        .collect();
    Ok(Field::from_values(values))
}

/// One forward-Euler step, `(I + dt A) c_k`, on raw field values.
pub fn dns_step(a: &DenseOperator, dt: f64, c_k: &Field) -> Result<Field> {
    if a.dim() != c_k.len() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: c_k.len(),
        });
    }
    let n = c_k.len();
    let mut out = vec![0.0f64; n];
    for (i, out_i) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, v) in c_k.values().iter().enumerate() {
            acc += a.entry(i, j).re * v;
        }
        *out_i = c_k.values()[i] + dt * acc;
    }
    Ok(Field::from_values(out))
}

/// A time-indexed sequence of fields, including the initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    fields: Vec<Field>,
}

impl Trajectory {
    pub(crate) fn new(times: Vec<f64>, fields: Vec<Field>) -> Self {
        debug_assert_eq!(times.len(), fields.len());
        Self { times, fields }
    }

    /// Snapshot times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// All fields, index `k` holding the state at `k * dt`.
    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    /// Field at step `k`.
    pub fn field(&self, k: usize) -> &Field {
        &self.fields[k]
    }

    /// Number of snapshots (steps plus one).
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    /// True when the trajectory holds no snapshots.
    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

/// Runs the forward-Euler reference simulation over the whole time span.
///
/// Refuses to run when [`stability_check`] fails, and aborts with the step
/// index if any value turns non-finite.
pub fn dns_run(config: &PdeConfig) -> Result<Trajectory> {
    let report = stability_check(config);
    if !report.pass {
        return Err(Error::Unstable {
            dt: config.dt(),
            limit: report.tightest_limit(),
        });
    }
    let a = build_operator(config);
    let mut fields = Vec::with_capacity(config.n_steps() + 1);
    let mut times = Vec::with_capacity(config.n_steps() + 1);
    fields.push(initial_condition(config));
    times.push(0.0);
    for k in 0..config.n_steps() {
        let next = dns_step(&a, config.dt(), &fields[k])?;
        if next.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField { step: k + 1 });
        }
        times.push((k + 1) as f64 * config.dt());
        fields.push(next);
    }
    Ok(Trajectory::new(times, fields))
}

/// Exact propagation `exp(t A) c0` via the dense matrix exponential.
///
/// Serves as the independent oracle against which the Euler stepper's
/// first-order convergence is measured.
pub fn exact_propagate(a: &DenseOperator, t: f64, c0: &Field) -> Result<Field> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "propagation time must be nonnegative and finite, got {t}"
        )));
    }
    if a.dim() != c0.len() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: c0.len(),
        });
    }
    let propagator = linalg::expm(&a.scaled(t));
    let input: Vec<Complex64> = c0
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let out = propagator.mul_vec(&input);
    Ok(Field::from_values(out.iter().map(|e| e.re).collect()))
}

/// Stability diagnostics for the explicit Euler scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Requested time step.
    pub dt: f64,
    /// Diffusive limit `Pe dx^2 / 2`.
    pub diffusive_limit: f64,
    /// Advective CFL limit `dx`.
    pub cfl_limit: f64,
    /// Spectral radius of the update matrix `I + dt A`.
    pub spectral_radius: f64,
    /// `dt` within the diffusive limit.
    pub diffusive_ok: bool,
    /// `dt` within the CFL limit.
    pub cfl_ok: bool,
    /// Spectral radius at most `1 + 1e-12`.
    pub spectral_ok: bool,
    /// All three checks passed.
    pub pass: bool,
}

impl StabilityReport {
    /// The smaller of the two closed-form step limits.
    pub fn tightest_limit(&self) -> f64 {
        self.diffusive_limit.min(self.cfl_limit)
    }
}

/// Evaluates the explicit-scheme stability conditions for a configuration.
///
/// Reports the diffusive limit `dt <= Pe dx^2 / 2`, the advective CFL limit
/// `dt <= dx`, and the numerically computed spectral radius of `I + dt A`
/// (from the circulant eigenvalues, which are exact for this operator; the
/// constant mode always sits exactly on the unit circle).
pub fn stability_check(config: &PdeConfig) -> StabilityReport {
    let dx = config.dx();
    let diffusive_limit = config.peclet() * dx * dx / 2.0;
    let cfl_limit = dx;
    let dt = config.dt();

    let spectral_radius = operator_spectrum(config)
        .iter()
        .map(|lambda| {
            let amp = Complex64::new(1.0, 0.0) + dt * lambda;
            fmath::hypot(amp.re, amp.im)
        })
        .fold(0.0, f64::max);

    let diffusive_ok = dt <= diffusive_limit;
    let cfl_ok = dt <= cfl_limit;
    let spectral_ok = spectral_radius <= 1.0 + 1e-12;
    StabilityReport {
        dt,
        diffusive_limit,
        cfl_limit,
        spectral_radius,
        diffusive_ok,
        cfl_ok,
        spectral_ok,
        pass: diffusive_ok && cfl_ok && spectral_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_config() -> PdeConfig {
        PdeConfig::new(32.0, 4, 0.002, 1.0).unwrap()
    }

    #[test]
    fn config_validates_step_count() {
        let cfg = paper_config();
        assert_eq!(cfg.n_steps(), 500);
        assert_eq!(cfg.grid_points(), 16);
        assert!((cfg.dx() - 0.0625).abs() < 1e-15);
        // dt that does not divide t_max.
        assert!(PdeConfig::new(32.0, 4, 0.003, 1.0).is_err());
        // Degenerate inputs.
        assert!(PdeConfig::new(-1.0, 4, 0.002, 1.0).is_err());
        assert!(PdeConfig::new(32.0, 0, 0.002, 1.0).is_err());
        assert!(PdeConfig::new(32.0, 4, 0.0, 1.0).is_err());
    }

    #[test]
    fn coefficients_match_hand_evaluation() {
        // Pe = 32, dx = 1/16: b = -32, c = 16 - 16 = 0, d = 16 + 16 = 32.
        let (b, c, d) = coefficients(&paper_config());
        assert_eq!(b, -32.0);
        assert_eq!(c, 0.0);
        assert_eq!(d, 32.0);
    }

    #[test]
    fn coefficients_sum_to_zero_for_any_config() {
        for (pe, n, dt) in [(32.0, 4, 0.002), (7.3, 3, 0.001), (100.0, 5, 1e-4)] {
            let cfg = PdeConfig::new(pe, n, dt, 0.0).unwrap();
            let (b, c, d) = coefficients(&cfg);
            assert!((b + c + d).abs() < 1e-12 * b.abs());
        }
    }

    #[test]
    fn superdiagonal_vanishes_at_critical_peclet() {
        // Pe = 2/dx makes c = 0 by construction.
        let cfg = PdeConfig::new(2.0 * 8.0, 3, 1e-3, 0.0).unwrap();
        let (_, c, _) = coefficients(&cfg);
        assert_eq!(c, 0.0);
    }

    #[test]
    fn operator_matches_paper_scale_entries() {
        let a = build_operator(&paper_config());
        // Prefactor 1/(Pe dx) = 1/2 turns (-32, 0, 32) into (-16, 0, 16).
        for i in 0..16 {
            assert!((a.entry(i, i).re + 16.0).abs() < 1e-12);
            assert!((a.entry(i, (i + 1) % 16).re).abs() < 1e-12);
            assert!((a.entry(i, (i + 15) % 16).re - 16.0).abs() < 1e-12);
        }
        assert!((a.entry(0, 15).re - 16.0).abs() < 1e-12);
        assert!((a.entry(15, 0).re).abs() < 1e-12);
    }

    #[test]
    fn operator_columns_sum_to_zero() {
        for (pe, n) in [(32.0, 4), (5.0, 2), (64.0, 5)] {
            let cfg = PdeConfig::new(pe, n, 1e-5, 0.0).unwrap();
            let a = build_operator(&cfg);
            for s in a.column_sums() {
                assert!(s.norm() < 1e-12 * (2.0 / (pe * cfg.dx() * cfg.dx())));
            }
        }
    }

    #[test]
    fn operator_matches_index_loop_stencil_assembly() {
        // Independent assembly straight from the discretized PDE, without
        // going through the (b, c, d) shorthand.
        let cfg = PdeConfig::new(32.0, 2, 0.002, 0.0).unwrap();
        let n = cfg.grid_points();
        let dx = cfg.dx();
        let pe = cfg.peclet();
        let mut expected = vec![0.0f64; n * n];
        for i in 0..n {
            let up = (i + 1) % n;
            let down = (i + n - 1) % n;
            expected[i * n + up] += -1.0 / (2.0 * dx) + 1.0 / (pe * dx * dx);
            expected[i * n + down] += 1.0 / (2.0 * dx) + 1.0 / (pe * dx * dx);
            expected[i * n + i] += -2.0 / (pe * dx * dx);
        }
        let a = build_operator(&cfg);
        for i in 0..n {
            for j in 0..n {
                assert!(
                    (a.entry(i, j).re - expected[i * n + j]).abs() < 1e-12,
                    "mismatch at ({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn trapezoid_matches_frozen_profile_at_n4() {
        let field = initial_condition(&paper_config());
        let expected = [
            0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0,
        ];
        assert_eq!(field.values(), &expected);
    }

    #[test]
    fn trapezoid_is_nonnegative_with_unit_peak() {
        for n in 1..=6 {
            let cfg = PdeConfig::new(32.0, n, 1e-4, 0.0).unwrap();
            let field = initial_condition(&cfg);
            assert!(field.values().iter().all(|&v| v >= 0.0));
            let max = field.values().iter().cloned().fold(0.0, f64::max);
            assert_eq!(max, 1.0, "n_qubits = {n}");
        }
    }

    #[test]
    fn normalized_copy_has_unit_norm() {
        let field = initial_condition(&paper_config());
        let unit = field.normalized().unwrap();
        let norm: f64 = unit.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_field_is_fixed_point_of_euler_step() {
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let uniform = Field::from_values(vec![0.7; 16]);
        let next = dns_step(&a, cfg.dt(), &uniform).unwrap();
        for (x, y) in uniform.values().iter().zip(next.values()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn euler_step_conserves_mass() {
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let c0 = initial_condition(&cfg);
        let c1 = dns_step(&a, cfg.dt(), &c0).unwrap();
        assert!((c1.sum() - c0.sum()).abs() < 1e-12 * c0.sum().abs());
    }

    #[test]
    fn euler_step_matches_pointwise_stencil_update() {
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let c0 = initial_condition(&cfg);
        let stepped = dns_step(&a, cfg.dt(), &c0).unwrap();

        let n = cfg.grid_points();
        let dx = cfg.dx();
        let v = c0.values();
        for i in 0..n {
            let up = v[(i + 1) % n];
            let down = v[(i + n - 1) % n];
            let advection = (up - down) / (2.0 * dx);
            let diffusion = (up - 2.0 * v[i] + down) / (cfg.peclet() * dx * dx);
            let expected = v[i] + cfg.dt() * (diffusion - advection);
            assert!(
                (stepped.values()[i] - expected).abs() < 1e-14,
                "point {i}: {} vs {expected}",
                stepped.values()[i]
            );
        }
    }

    #[test]
    fn euler_step_rejects_dimension_mismatch() {
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let bad = Field::from_values(vec![1.0; 8]);
        assert!(matches!(
            dns_step(&a, cfg.dt(), &bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_step_run_holds_only_the_initial_condition() {
        let cfg = PdeConfig::new(32.0, 4, 0.002, 0.0).unwrap();
        let traj = dns_run(&cfg).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.field(0).values(), initial_condition(&cfg).values());
    }

    #[test]
    fn paper_run_produces_501_mass_conserving_snapshots() {
        let traj = dns_run(&paper_config()).unwrap();
        assert_eq!(traj.len(), 501);
        let m0 = traj.field(0).sum();
        for k in 0..traj.len() {
            assert!(
                (traj.field(k).sum() - m0).abs() <= 1e-10 * m0.abs(),
                "mass drift at step {k}"
            );
        }
        assert!((traj.times()[500] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dns_run_refuses_unstable_step() {
        let cfg = PdeConfig::new(32.0, 4, 0.1, 1.0).unwrap();
        assert!(matches!(dns_run(&cfg), Err(Error::Unstable { .. })));
    }

    #[test]
    fn exact_propagation_at_zero_time_is_identity() {
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let c0 = initial_condition(&cfg);
        let out = exact_propagate(&a, 0.0, &c0).unwrap();
        for (x, y) in out.values().iter().zip(c0.values()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_propagation_conserves_mass() {
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let c0 = initial_condition(&cfg);
        let out = exact_propagate(&a, 1.0, &c0).unwrap();
        assert!((out.sum() - c0.sum()).abs() < 1e-10 * c0.sum().abs());
    }

    #[test]
    fn exact_propagation_satisfies_semigroup_property() {
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let c0 = initial_condition(&cfg);
        let two_halves =
            exact_propagate(&a, 0.5, &exact_propagate(&a, 0.5, &c0).unwrap()).unwrap();
        let whole = exact_propagate(&a, 1.0, &c0).unwrap();
        for (x, y) in two_halves.values().iter().zip(whole.values()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_diagonalizes_the_operator() {
        // Fourier modes are exact eigenvectors of the circulant operator;
        // checking the residual validates both assembly and spectrum.
        let cfg = paper_config();
        let a = build_operator(&cfg);
        let n = cfg.grid_points();
        for (j, lambda) in operator_spectrum(&cfg).iter().enumerate() {
            let mode: Vec<Complex64> = (0..n)
                .map(|k| {
                    let phase = 2.0 * core::f64::consts::PI * (j * k) as f64 / n as f64;
                    Complex64::new(phase.cos(), phase.sin())
                })
                .collect();
            let image = a.mul_vec(&mode);
            let residual: f64 = image
                .iter()
                .zip(&mode)
                .map(|(av, v)| (av - lambda * v).norm())
                .fold(0.0, f64::max);
            assert!(residual < 1e-10, "mode {j}: residual {residual}");
        }
    }

    #[test]
    fn stability_report_matches_paper_limits() {
        let report = stability_check(&paper_config());
        assert!((report.diffusive_limit - 0.0625).abs() < 1e-15);
        assert!((report.cfl_limit - 0.0625).abs() < 1e-15);
        // The constant mode pins the spectral radius to exactly one.
        assert!((report.spectral_radius - 1.0).abs() < 1e-12);
        assert!(report.pass);
    }

    #[test]
    fn stability_rejects_coarse_step_and_accepts_tiny_step() {
        let coarse = PdeConfig::new(32.0, 4, 0.1, 1.0).unwrap();
        assert!(!stability_check(&coarse).pass);

        let tiny = PdeConfig::new(32.0, 4, 1e-9, 0.0).unwrap();
        assert!(stability_check(&tiny).pass);
    }
}

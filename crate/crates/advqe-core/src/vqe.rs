//! Per-step variational ground-state solver for the Euler update.
//!
//! One forward-Euler step `|C_{k+1}> = M |C_k>` with `M = I + dt A` is
//! recast as the block lower-triangular linear system
//!
//! ```text
//!   [ I  0 ] [ x_top    ]   [ c_k / |c_k| ]
//!   [-M  I ] [ x_bottom ] = [      0      ]
//! ```
//!
//! of dimension `2^(N+1)`, whose unique solution stacks the normalized
//! current field over its Euler image. That solution is the null vector of
//! the Hermitian positive semidefinite `H_k = A^dag (I - |b><b|) A` (with
//! `A` the block matrix and `|b>` the normalized right-hand side), so each
//! time step becomes a ground-state search, run here with a RealAmplitudes
//! ansatz, parameter-shift gradients and a BFGS loop, warm-started from the
//! previous step's optimum.
//!
//! Expectation values are taken against the dense `H_k` directly (matrix-
//! vector product on the full statevector); there is no Pauli decomposition
//! and no sampling anywhere.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::ansatz::{self, AnsatzSpec};
use crate::error::{Error, Result};
use crate::fmath;
use crate::linalg::{self, DenseOperator};
use crate::optim::{self, BfgsOptions, Objective};
use crate::pde::{self, Field, PdeConfig};
use crate::sim::{Circuit, Statevector};

/// The block linear system for one Euler step.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem {
    curly_a: DenseOperator,
    b_vec: Statevector,
    sigma_min: f64,
}

impl BlockSystem {
    /// The block matrix, of dimension `2^(N+1)`.
    pub fn curly_a(&self) -> &DenseOperator {
        &self.curly_a
    }

    /// Normalized right-hand side `(c_k / |c_k| ; 0)`.
    pub fn b_vec(&self) -> &Statevector {
        &self.b_vec
    }

    /// Smallest singular value of the block matrix, certified at build time.
    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    /// Dimension of the embedded field, `2^N`.
    pub fn field_dim(&self) -> usize {
        self.curly_a.dim() / 2
    }

    /// Rebinds the right-hand side to a new field, keeping the operator.
    ///
    /// Time marching reuses this: the block matrix depends only on `M`, so
    /// its invertibility certificate carries over unchanged from step to
    /// step while `|b>` tracks the current field.
    pub fn with_field(&self, c_k: &Field) -> Result<Self> {
        let b_vec = stacked_rhs(self.field_dim(), c_k)?;
        Ok(Self {
            curly_a: self.curly_a.clone(),
            b_vec,
            sigma_min: self.sigma_min,
        })
    }

    /// The unique normalized solution of `curly_a x = b`.
    ///
    /// Exploits the unit block-triangular structure (forward substitution):
    /// `x_top = b_top`, `x_bottom = M b_top`.
    pub fn solve_normalized(&self) -> Vec<Complex64> {
        let half = self.field_dim();
        let n = self.curly_a.dim();
        let mut x = self.b_vec.amplitudes().to_vec();
        for i in half..n {
            // Row i of curly_a is (-M row | e_i); b_bottom is zero.
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, xj) in x.iter().take(half).enumerate() {
                acc -= self.curly_a.entry(i, j) * xj;
            }
            x[i] = acc;
        }
        let norm = linalg::norm2(&x);
        x.iter_mut().for_each(|v| *v /= norm);
        x
    }
}

fn stacked_rhs(field_dim: usize, c_k: &Field) -> Result<Statevector> {
    if c_k.len() != field_dim {
        return Err(Error::DimensionMismatch {
            expected: field_dim,
            got: c_k.len(),
        });
    }
    let unit = c_k.normalized()?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * field_dim];
    for (dst, &v) in amps.iter_mut().zip(&unit) {
        *dst = Complex64::new(v, 0.0);
    }
    Statevector::from_amplitudes(amps)
}

/// Builds the block system `curly_a x = b` for one step.
///
/// `curly_a = [[I, 0], [-M, I]]` with `M = I + dt A` is unit triangular, so
/// it is always invertible; the smallest singular value is still computed
/// and checked as a defense against assembly bugs.
pub fn build_block_system(a: &DenseOperator, dt: f64, c_k: &Field) -> Result<BlockSystem> {
    if a.dim() != c_k.len() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: c_k.len(),
        });
    }
    let half = a.dim();
    let n = 2 * half;
    let mut curly_a = DenseOperator::identity(n)?;
    for i in 0..half {
        for j in 0..half {
            let m_ij = (if i == j { 1.0 } else { 0.0 }) + dt * a.entry(i, j).re;
            curly_a.set_entry(half + i, j, Complex64::new(-m_ij, 0.0));
        }
    }
    let b_vec = stacked_rhs(half, c_k)?;
    let sigma_min = linalg::smallest_singular_value(&curly_a)?;
    if sigma_min <= 1e-10 {
        return Err(Error::NearSingular { sigma_min });
    }
    Ok(BlockSystem {
        curly_a,
        b_vec,
        sigma_min,
    })
}

/// The Hermitian positive semidefinite step Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct StepHamiltonian {
    h: DenseOperator,
}

impl StepHamiltonian {
    /// Wraps an externally built operator, requiring Hermiticity within `1e-12`.
    pub fn new(h: DenseOperator) -> Result<Self> {
        let asym = h.max_asymmetry();
        if asym > 1e-12 {
            return Err(Error::NonHermitian {
                max_asymmetry: asym,
            });
        }
        Ok(Self { h })
    }

    /// The dense operator.
    pub fn operator(&self) -> &DenseOperator {
        &self.h
    }

    /// Operator dimension.
    pub fn dim(&self) -> usize {
        self.h.dim()
    }
}

/// Builds `H = A^dag (I - |b><b|) A` from a block system.
///
/// Computed as `A^dag A - v v^dag` with `v = A^dag b` and symmetrized, so
/// Hermiticity holds to the last bit; the unique null vector is the
/// normalized solution of the block system.
pub fn build_hamiltonian(sys: &BlockSystem) -> StepHamiltonian {
    let a = sys.curly_a();
    let n = a.dim();
    let adj = a.adjoint();
    let gram = adj.mul_mat(a);
    let v = adj.mul_vec(sys.b_vec().amplitudes());

    let mut h = gram;
    for i in 0..n {
        for j in 0..n {
            let e = h.entry(i, j) - v[i] * v[j].conj();
            h.set_entry(i, j, e);
        }
    }
    // Symmetrize away the last rounding bits.
    let mut sym = h.clone();
    for i in 0..n {
        for j in 0..n {
            let avg = 0.5 * (h.entry(i, j) + h.entry(j, i).conj());
            sym.set_entry(i, j, avg);
        }
    }

    debug_assert!(
        {
            let x = sys.solve_normalized();
            linalg::norm2(&sym.mul_vec(&x)) <= 1e-10
        },
        "exact solution is not annihilated by the step Hamiltonian"
    );
    StepHamiltonian { h: sym }
}

/// Reusable cost/gradient evaluator binding one Hamiltonian to one ansatz.
///
/// Owns the circuit template and a scratch statevector so repeated
/// evaluations do not reallocate. Gradients use the parameter-shift rule,
/// which is exact for RY generators.
pub struct VqeObjective<'h> {
    h: &'h DenseOperator,
    circuit: Circuit,
    scratch: Vec<f64>,
}

impl<'h> VqeObjective<'h> {
    /// Builds an evaluator; the Hamiltonian dimension must match the ansatz.
    pub fn new(h: &'h StepHamiltonian, spec: &AnsatzSpec) -> Result<Self> {
        if h.dim() != 1 << spec.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: 1 << spec.n_qubits(),
                got: h.dim(),
            });
        }
        Ok(Self {
            h: h.operator(),
            circuit: ansatz::build_template(spec),
            scratch: vec![0.0; spec.parameter_count()],
        })
    }

    /// Number of adjustable parameters.
    pub fn parameter_count(&self) -> usize {
        self.circuit.parameter_count()
    }

    /// Prepares the ansatz state for `params`.
    pub fn prepare_state(&mut self, params: &[f64]) -> Result<Statevector> {
        self.circuit.set_parameters(params)?;
        let mut state = Statevector::zero_state(self.circuit.n_qubits());
        state.apply_circuit(&self.circuit)?;
        Ok(state)
    }

    /// Cost `<psi(params)| H |psi(params)>`.
    ///
    /// `H` is Hermitian by construction, so the quadratic form is evaluated
    /// directly without re-certifying the operator on every call.
    pub fn cost_at(&mut self, params: &[f64]) -> Result<f64> {
        let state = self.prepare_state(params)?;
        let image = self.h.mul_vec(state.amplitudes());
        Ok(linalg::inner(state.amplitudes(), &image).re)
    }

    /// Parameter-shift gradient: `(cost(t_j + pi/2) - cost(t_j - pi/2)) / 2`.
    pub fn gradient_at(&mut self, params: &[f64]) -> Result<Vec<f64>> {
        if params.len() != self.scratch.len() {
            return Err(Error::ParameterCount {
                expected: self.scratch.len(),
                got: params.len(),
            });
        }
        self.scratch.copy_from_slice(params);
        let mut grad = vec![0.0f64; params.len()];
        for (j, slot) in grad.iter_mut().enumerate() {
            let original = self.scratch[j];
            self.scratch[j] = original + core::f64::consts::FRAC_PI_2;
            let plus = self.cost_at(&self.scratch.clone())?;
            self.scratch[j] = original - core::f64::consts::FRAC_PI_2;
            let minus = self.cost_at(&self.scratch.clone())?;
            self.scratch[j] = original;
            *slot = 0.5 * (plus - minus);
        }
        Ok(grad)
    }
}

impl Objective for VqeObjective<'_> {
    fn cost(&mut self, x: &[f64]) -> f64 {
        // Parameter counts are fixed by the caller; any internal failure
        // surfaces as a non-finite cost and aborts the optimizer.
        self.cost_at(x).unwrap_or(f64::NAN)
    }

    fn gradient(&mut self, x: &[f64]) -> Vec<f64> {
        self.gradient_at(x)
            .unwrap_or_else(|_| vec![f64::NAN; x.len()])
    }
}

/// Cost of the bound ansatz state against a step Hamiltonian.
pub fn cost(params: &[f64], h: &StepHamiltonian, spec: &AnsatzSpec) -> Result<f64> {
    VqeObjective::new(h, spec)?.cost_at(params)
}

/// Parameter-shift gradient of [`cost`].
pub fn gradient(params: &[f64], h: &StepHamiltonian, spec: &AnsatzSpec) -> Result<Vec<f64>> {
    VqeObjective::new(h, spec)?.gradient_at(params)
}

/// Options for the per-step VQE solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqeOptions {
    /// Cost below which a solve counts as converged.
    pub cost_tol: f64,
    /// Gradient infinity norm below which a solve counts as converged.
    pub grad_tol: f64,
    /// BFGS iteration budget per candidate.
    pub max_iters: usize,
    /// Candidate starts per solve: the supplied start plus `restarts - 1`
    /// seeded random draws. Extra candidates are skipped as soon as one
    /// reaches `cost_tol`.
    pub restarts: u32,
    /// Base seed for the restart draws.
    pub seed: u64,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self {
            cost_tol: 1e-12,
            grad_tol: 1e-8,
            max_iters: 500,
            restarts: 1,
            seed: 0,
        }
    }
}

impl VqeOptions {
    fn bfgs(&self) -> BfgsOptions {
        BfgsOptions {
            cost_tol: self.cost_tol,
            grad_tol: self.grad_tol,
            max_iters: self.max_iters,
        }
    }
}

/// Outcome of one ground-state solve.
#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    /// Best parameters found.
    pub params: Vec<f64>,
    /// Cost at the best parameters.
    pub cost: f64,
    /// Optimizer iterations spent, summed over all candidates tried.
    pub iterations: usize,
    /// Whether a stopping tolerance was met.
    pub converged: bool,
    /// The prepared ansatz state at the best parameters.
    pub state: Statevector,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn random_params(seed: u64, count: usize) -> Vec<f64> {
    use rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            core::f64::consts::PI * (2.0 * unit - 1.0)
        })
        .collect()
}

/// Finds the ground state of `h` over the ansatz, starting from `init_params`.
///
/// Runs BFGS from the supplied start and, when that does not reach
/// `cost_tol`, from up to `restarts - 1` seeded random starts; the best cost
/// wins, ties broken by candidate order. Deterministic for fixed inputs.
pub fn minimize(
    h: &StepHamiltonian,
    spec: &AnsatzSpec,
    init_params: &[f64],
    opts: &VqeOptions,
) -> Result<VqeResult> {
    let mut objective = VqeObjective::new(h, spec)?;
    if init_params.len() != objective.parameter_count() {
        return Err(Error::ParameterCount {
            expected: objective.parameter_count(),
            got: init_params.len(),
        });
    }

    let mut best: Option<optim::BfgsOutcome> = None;
    let mut total_iterations = 0;
    for candidate in 0..opts.restarts.max(1) {
        let start = if candidate == 0 {
            init_params.to_vec()
        } else {
            random_params(
                splitmix64(opts.seed ^ u64::from(candidate)),
                init_params.len(),
            )
        };
        let outcome = optim::minimize_bfgs(&mut objective, &start, &opts.bfgs())?;
        total_iterations += outcome.iterations;
        let better = match &best {
            None => true,
            Some(b) => outcome.cost < b.cost,
        };
        if better {
            best = Some(outcome);
        }
        if best.as_ref().is_some_and(|b| b.cost <= opts.cost_tol) {
            break;
        }
    }

    let best = best.expect("at least one candidate runs");
    let state = objective.prepare_state(&best.x)?;
    let cost = objective.cost_at(&best.x)?;
    Ok(VqeResult {
        params: best.x,
        cost,
        iterations: total_iterations,
        converged: best.converged,
        state,
    })
}

/// Extracts the next field from a converged solve.
///
/// Takes the last `2^N` amplitudes of the solution state, discards the
/// (tiny) imaginary parts, renormalizes, fixes the global sign against the
/// classical one-step prediction `M c_k`, and sets the physical norm from
/// the same prediction, which is computed classically anyway for the norm
/// ledger.
pub fn extract_next_field(
    result: &VqeResult,
    a: &DenseOperator,
    dt: f64,
    c_k: &Field,
) -> Result<Field> {
    if result.state.dim() != 2 * c_k.len() || a.dim() != c_k.len() {
        return Err(Error::DimensionMismatch {
            expected: 2 * c_k.len(),
            got: result.state.dim(),
        });
    }
    let half = c_k.len();
    let tail = &result.state.amplitudes()[half..];

    let max_imag = tail.iter().map(|v| fmath::abs(v.im)).fold(0.0, f64::max);
    if max_imag > 1e-8 {
        return Err(Error::ImaginaryResidue { max_imag });
    }
    let norm = linalg::norm2(tail);
    if norm < 1e-8 {
        return Err(Error::DegenerateState { norm });
    }

    let prediction = pde::dns_step(a, dt, c_k)?;
    let mut unit: Vec<f64> = tail.iter().map(|v| v.re / norm).collect();
    let alignment: f64 = unit
        .iter()
        .zip(prediction.values())
        .map(|(u, p)| u * p)
        .sum();
    if alignment < 0.0 {
        unit.iter_mut().for_each(|u| *u = -*u);
    }
    Ok(Field::from_normalized(&unit, prediction.norm()))
}

/// Per-step diagnostics kept alongside the marched fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary {
    /// Final VQE cost of the step.
    pub cost: f64,
    /// Optimizer iterations spent.
    pub iterations: usize,
    /// Whether the solve met a stopping tolerance.
    pub converged: bool,
    /// Physical norm of the extracted field.
    pub norm: f64,
}

/// Time-marched VQE solution with infidelity diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    fields: Vec<Field>,
    infidelity: Vec<f64>,
    steps: Vec<StepSummary>,
}

impl Trajectory {
    /// Snapshot times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Marched fields (raw values plus norms), including the initial one.
    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    /// Infidelity `1 - |<C_DNS|C_VQE>|^2` per snapshot; entry 0 is zero.
    pub fn infidelity(&self) -> &[f64] {
        &self.infidelity
    }

    /// Per-step solver diagnostics (one entry per step, none for `t = 0`).
    pub fn steps(&self) -> &[StepSummary] {
        &self.steps
    }

    /// Infidelity at the final time.
    pub fn final_infidelity(&self) -> f64 {
        *self.infidelity.last().expect("trajectory is never empty")
    }

    /// True when every step's solve converged.
    pub fn all_converged(&self) -> bool {
        self.steps.iter().all(|s| s.converged)
    }
}

/// Marches the PDE with one VQE ground-state solve per step.
///
/// The ansatz must span `N + 1` qubits for an `N`-qubit field. Step `k + 1`
/// is warm-started from step `k`'s optimum; the restart budget is spent as
/// basin hops (re-solves from small kicks around the best point) at the
/// from-scratch first step and on any step whose warm solve lands well
/// above the trailing cost trend. Infidelities are recorded against a
/// freshly computed DNS trajectory at the same step size.
pub fn time_march(config: &PdeConfig, spec: &AnsatzSpec, opts: &VqeOptions) -> Result<Trajectory> {
    let dns = pde::dns_run(config)?;
    time_march_with_reference(config, spec, opts, &dns)
}

/// [`time_march`] against a shared, precomputed DNS reference trajectory.
pub fn time_march_with_reference(
    config: &PdeConfig,
    spec: &AnsatzSpec,
    opts: &VqeOptions,
    dns: &pde::Trajectory,
) -> Result<Trajectory> {
    if spec.n_qubits() != config.n_qubits() + 1 {
        return Err(Error::InvalidConfig(format!(
            "ansatz spans {} qubits but the block system needs {}",
            spec.n_qubits(),
            config.n_qubits() + 1
        )));
    }
    if dns.len() != config.n_steps() + 1 {
        return Err(Error::DimensionMismatch {
            expected: config.n_steps() + 1,
            got: dns.len(),
        });
    }

    let step_failed = |step: usize| move |e: Error| Error::StepFailed {
        step,
        source: Box::new(e),
    };

    let a = pde::build_operator(config);
    let dt = config.dt();
    let mut field = pde::initial_condition(config);
    let base_system = build_block_system(&a, dt, &field).map_err(step_failed(0))?;

    let mut times = Vec::with_capacity(config.n_steps() + 1);
    let mut fields = Vec::with_capacity(config.n_steps() + 1);
    let mut infidelity = Vec::with_capacity(config.n_steps() + 1);
    let mut steps = Vec::with_capacity(config.n_steps());
    times.push(0.0);
    fields.push(field.clone());
    infidelity.push(0.0);

    // No warm start exists at step 0; open in the positive uniform
    // superposition (first rotation layer at pi/2), which sits far closer to
    // the smooth nonnegative target states than |0...0> does and lands the
    // from-scratch solve in markedly better basins.
    let mut params = vec![0.0f64; spec.parameter_count()];
    for p in params.iter_mut().take(spec.n_qubits()) {
        *p = core::f64::consts::FRAC_PI_2;
    }
    // Trailing window of accepted step costs; its median is the yardstick
    // for spotting solves that slipped into a worse basin.
    const TREND_WINDOW: usize = 25;
    const TREND_FACTOR: f64 = 5.0;
    // Kick size for the perturbation hops. Small kicks reliably escape into
    // neighboring (often better) basins; large ones behave like cold
    // restarts and lose the warm information.
    const HOP_KICK: f64 = 0.25;
    let mut recent_costs: Vec<f64> = Vec::new();
    let trend = |costs: &[f64]| -> f64 {
        let mut sorted = costs.to_vec();
        sorted.sort_by(|x, y| x.partial_cmp(y).expect("costs are finite"));
        sorted[sorted.len() / 2]
    };

    for k in 0..config.n_steps() {
        let fail = step_failed(k);
        let sys = base_system.with_field(&field).map_err(fail)?;
        let h = build_hamiltonian(&sys);

        let single = VqeOptions {
            seed: splitmix64(opts.seed ^ (k as u64).wrapping_mul(0x2545f4914f6cdd1d)),
            restarts: 1,
            ..*opts
        };
        let mut result = minimize(&h, spec, &params, &single).map_err(fail)?;
        let mut step_iterations = result.iterations;

        // The restart budget is spent on basin hops: re-solves from small
        // random kicks around the best point so far, keeping improvements.
        // Hops engage at the from-scratch first step, and later whenever a
        // warm-started solve lands well above the trailing cost trend. Near
        // the arithmetic noise floor trend fluctuations mean nothing, so a
        // guard keeps hops from churning fully converged chains.
        let hop_guard = (1e3 * opts.cost_tol).max(1e-12);
        let suspicious = !recent_costs.is_empty()
            && result.cost > (TREND_FACTOR * trend(&recent_costs)).max(hop_guard);
        if (k == 0 || suspicious) && opts.restarts > 1 {
            use rand_core::{RngCore, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(splitmix64(single.seed ^ 0x9d2c));
            for _hop in 1..opts.restarts {
                if result.cost <= opts.cost_tol {
                    break;
                }
                let kicked: Vec<f64> = result
                    .params
                    .iter()
                    .map(|p| {
                        let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                        p + HOP_KICK * (2.0 * unit - 1.0)
                    })
                    .collect();
                let hop = minimize(&h, spec, &kicked, &single).map_err(fail)?;
                step_iterations += hop.iterations;
                if hop.cost < result.cost {
                    result = hop;
                }
            }
        }
        result.iterations = step_iterations;
        recent_costs.push(result.cost);
        if recent_costs.len() > TREND_WINDOW {
            recent_costs.remove(0);
        }

        let next = extract_next_field(&result, &a, dt, &field).map_err(fail)?;

        let vqe_state = Statevector::from_real(&next.normalized().map_err(fail)?)
            .expect("field length is a power of two");
        let dns_state = Statevector::from_real(&dns.field(k + 1).normalized().map_err(fail)?)
            .expect("field length is a power of two");
        let overlap = crate::sim::fidelity(&dns_state, &vqe_state).map_err(fail)?;
        infidelity.push((1.0 - overlap).clamp(0.0, 1.0));

        steps.push(StepSummary {
            cost: result.cost,
            iterations: result.iterations,
            converged: result.converged,
            norm: next.norm(),
        });
        times.push((k + 1) as f64 * dt);
        fields.push(next.clone());
        params = result.params;
        field = next;
    }

    Ok(Trajectory {
        times,
        fields,
        infidelity,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::{RngCore, SeedableRng};

    fn paper_config() -> PdeConfig {
        PdeConfig::new(32.0, 4, 0.002, 1.0).unwrap()
    }

    fn random_field(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Field {
        Field::from_values(
            (0..n)
                .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 + 0.1)
                .collect(),
        )
    }

    #[test]
    fn block_system_has_unit_determinant_and_normalized_rhs() {
        let cfg = paper_config();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, cfg.dt(), &c0).unwrap();
        assert_eq!(sys.curly_a().dim(), 32);
        let det = linalg::determinant(sys.curly_a());
        assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((sys.b_vec().norm() - 1.0).abs() < 1e-12);
        assert!(sys.sigma_min() > 1e-10);
    }

    #[test]
    fn zero_dt_solution_stacks_the_field_twice() {
        let cfg = paper_config();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, 0.0, &c0).unwrap();
        let x = sys.solve_normalized();
        let unit = c0.normalized().unwrap();
        let scale = core::f64::consts::FRAC_1_SQRT_2;
        for i in 0..16 {
            assert!((x[i].re - scale * unit[i]).abs() < 1e-12);
            assert!((x[16 + i].re - scale * unit[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn block_system_rejects_zero_field() {
        let cfg = paper_config();
        let a = pde::build_operator(&cfg);
        let zero = Field::from_values(vec![0.0; 16]);
        assert!(matches!(
            build_block_system(&a, cfg.dt(), &zero),
            Err(Error::ZeroField { .. })
        ));
    }

    #[test]
    fn hamiltonian_is_hermitian_and_annihilates_the_solution() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let cfg = paper_config();
        let a = pde::build_operator(&cfg);
        for _ in 0..5 {
            let c = random_field(&mut rng, 16);
            let sys = build_block_system(&a, cfg.dt(), &c).unwrap();
            let h = build_hamiltonian(&sys);
            assert!(h.operator().max_asymmetry() <= 1e-12);
            let x = sys.solve_normalized();
            let residual = linalg::norm2(&h.operator().mul_vec(&x));
            assert!(residual <= 1e-12, "null residual {residual}");
        }
    }

    #[test]
    fn hamiltonian_spectrum_is_psd_with_one_null_direction() {
        // Small grid keeps the eigensolve cheap; the acceptance suite covers
        // the paper-scale spectrum.
        let cfg = PdeConfig::new(32.0, 2, 0.002, 1.0).unwrap();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, cfg.dt(), &c0).unwrap();
        let h = build_hamiltonian(&sys);
        let eigs = linalg::symmetric_eigenvalues(h.operator()).unwrap();
        assert!(eigs[0] >= -1e-10);
        let near_null = eigs.iter().filter(|&&e| e <= 1e-10).count();
        assert_eq!(near_null, 1, "eigenvalues {eigs:?}");
    }

    #[test]
    fn cost_vanishes_when_the_ansatz_reaches_the_target() {
        // One qubit, H = I - |b><b| with |b> = RY(theta)|0>.
        let theta = 0.731f64;
        let b = [
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::new((theta / 2.0).sin(), 0.0),
        ];
        let mut h = DenseOperator::identity(2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = h.entry(i, j) - b[i] * b[j].conj();
                h.set_entry(i, j, e);
            }
        }
        let h = StepHamiltonian::new(h).unwrap();
        let spec = AnsatzSpec::new(1, 0).unwrap();
        let at_target = cost(&[theta], &h, &spec).unwrap();
        assert!(at_target.abs() < 1e-12);
        let off_target = cost(&[theta + 1.0], &h, &spec).unwrap();
        assert!(off_target > 1e-3);
    }

    #[test]
    fn cost_is_nonnegative_for_random_parameters() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let cfg = PdeConfig::new(32.0, 3, 0.002, 1.0).unwrap();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, cfg.dt(), &c0).unwrap();
        let h = build_hamiltonian(&sys);
        let spec = AnsatzSpec::new(4, 2).unwrap();
        for _ in 0..20 {
            let params: Vec<f64> = (0..spec.parameter_count())
                .map(|_| {
                    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                    core::f64::consts::PI * (2.0 * u - 1.0)
                })
                .collect();
            let value = cost(&params, &h, &spec).unwrap();
            assert!(value >= -1e-10, "cost {value}");
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        let cfg = PdeConfig::new(32.0, 2, 0.002, 1.0).unwrap();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, cfg.dt(), &c0).unwrap();
        let h = build_hamiltonian(&sys);
        let spec = AnsatzSpec::new(3, 2).unwrap();

        let params: Vec<f64> = (0..spec.parameter_count())
            .map(|_| {
                let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                core::f64::consts::PI * (2.0 * u - 1.0)
            })
            .collect();
        let analytic = gradient(&params, &h, &spec).unwrap();
        let hstep = 1e-5;
        for j in 0..params.len() {
            let mut plus = params.clone();
            plus[j] += hstep;
            let mut minus = params.clone();
            minus[j] -= hstep;
            let fd = (cost(&plus, &h, &spec).unwrap() - cost(&minus, &h, &spec).unwrap())
                / (2.0 * hstep);
            assert!(
                (analytic[j] - fd).abs() <= 1e-6,
                "component {j}: shift {} vs fd {fd}",
                analytic[j]
            );
        }
    }

    #[test]
    fn gradient_is_zero_for_scaled_identity() {
        let h = StepHamiltonian::new(DenseOperator::identity(8).unwrap().scaled(2.5)).unwrap();
        let spec = AnsatzSpec::new(3, 1).unwrap();
        let params = vec![0.3; spec.parameter_count()];
        let grad = gradient(&params, &h, &spec).unwrap();
        assert!(grad.iter().all(|g| g.abs() < 1e-12), "gradient {grad:?}");
    }

    #[test]
    fn minimize_converges_immediately_from_the_solution() {
        let theta = -1.234f64;
        let b = [
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::new((theta / 2.0).sin(), 0.0),
        ];
        let mut h = DenseOperator::identity(2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = h.entry(i, j) - b[i] * b[j].conj();
                h.set_entry(i, j, e);
            }
        }
        let h = StepHamiltonian::new(h).unwrap();
        let spec = AnsatzSpec::new(1, 0).unwrap();
        let result = minimize(&h, &spec, &[theta], &VqeOptions::default()).unwrap();
        assert!(result.converged);
        assert!(result.iterations <= 2);
        assert!(result.cost <= 1e-12);
    }

    #[test]
    fn minimize_solves_a_step_hamiltonian_from_cold_start() {
        let cfg = PdeConfig::new(32.0, 2, 0.002, 1.0).unwrap();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, cfg.dt(), &c0).unwrap();
        let h = build_hamiltonian(&sys);
        let spec = AnsatzSpec::new(3, 3).unwrap();
        let opts = VqeOptions {
            restarts: 4,
            seed: 7,
            ..VqeOptions::default()
        };
        let result = minimize(&h, &spec, &vec![0.0; spec.parameter_count()], &opts).unwrap();
        assert!(result.converged, "cost {}", result.cost);
        // cost == expectation(state, H) at return.
        let recomputed =
            crate::sim::expectation(&result.state, h.operator()).unwrap();
        assert!((result.cost - recomputed).abs() <= 1e-12);
    }

    #[test]
    fn warm_started_zero_dt_step_stays_converged() {
        let cfg = PdeConfig::new(32.0, 2, 0.002, 1.0).unwrap();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, 0.0, &c0).unwrap();
        let h = build_hamiltonian(&sys);
        let spec = AnsatzSpec::new(3, 3).unwrap();
        let opts = VqeOptions {
            restarts: 4,
            seed: 11,
            ..VqeOptions::default()
        };
        let first = minimize(&h, &spec, &vec![0.0; spec.parameter_count()], &opts).unwrap();
        assert!(first.converged);
        // Re-solving the same system from the optimum is instant.
        let second = minimize(&h, &spec, &first.params, &VqeOptions::default()).unwrap();
        assert!(second.converged);
        assert!(second.cost <= 1e-10);
        assert!(second.iterations <= 2);
    }

    #[test]
    fn extraction_recovers_the_euler_step_from_the_exact_solution() {
        let cfg = paper_config();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);
        let sys = build_block_system(&a, cfg.dt(), &c0).unwrap();
        let x = sys.solve_normalized();
        let result = VqeResult {
            params: vec![],
            cost: 0.0,
            iterations: 0,
            converged: true,
            state: Statevector::from_amplitudes(x.clone()).unwrap(),
        };
        let field = extract_next_field(&result, &a, cfg.dt(), &c0).unwrap();
        let expected = pde::dns_step(&a, cfg.dt(), &c0).unwrap();
        assert!((field.norm() - expected.norm()).abs() < 1e-12);
        for (f, e) in field.values().iter().zip(expected.values()) {
            assert!((f - e).abs() < 1e-12);
        }

        // A global sign flip extracts to the identical field.
        let flipped = VqeResult {
            state: Statevector::from_amplitudes(x.iter().map(|v| -v).collect()).unwrap(),
            ..result
        };
        let field_flipped = extract_next_field(&flipped, &a, cfg.dt(), &c0).unwrap();
        assert_eq!(field.values(), field_flipped.values());
    }

    #[test]
    fn extraction_rejects_degenerate_and_complex_states() {
        let cfg = paper_config();
        let a = pde::build_operator(&cfg);
        let c0 = pde::initial_condition(&cfg);

        let mut amps = vec![Complex64::new(0.0, 0.0); 32];
        amps[0] = Complex64::new(1.0, 0.0);
        let top_only = VqeResult {
            params: vec![],
            cost: 0.0,
            iterations: 0,
            converged: true,
            state: Statevector::from_amplitudes(amps.clone()).unwrap(),
        };
        assert!(matches!(
            extract_next_field(&top_only, &a, cfg.dt(), &c0),
            Err(Error::DegenerateState { .. })
        ));

        amps[20] = Complex64::new(0.0, 0.5);
        let complex_tail = VqeResult {
            state: Statevector::from_amplitudes(amps).unwrap(),
            ..top_only
        };
        assert!(matches!(
            extract_next_field(&complex_tail, &a, cfg.dt(), &c0),
            Err(Error::ImaginaryResidue { .. })
        ));
    }

    #[test]
    fn zero_step_march_reports_zero_infidelity() {
        let cfg = PdeConfig::new(32.0, 2, 0.002, 0.0).unwrap();
        let spec = AnsatzSpec::new(3, 2).unwrap();
        let traj = time_march(&cfg, &spec, &VqeOptions::default()).unwrap();
        assert_eq!(traj.infidelity(), &[0.0]);
        assert_eq!(traj.steps().len(), 0);
        assert!(traj.all_converged());
    }

    #[test]
    fn march_rejects_mismatched_ansatz_width() {
        let cfg = PdeConfig::new(32.0, 2, 0.002, 0.0).unwrap();
        let spec = AnsatzSpec::new(2, 2).unwrap();
        assert!(matches!(
            time_march(&cfg, &spec, &VqeOptions::default()),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn short_march_tracks_dns_closely() {
        // Ten steps on a 4-point grid: small enough to run in a unit test,
        // large enough to exercise warm starts and the norm ledger.
        let cfg = PdeConfig::new(32.0, 2, 0.002, 0.02).unwrap();
        let spec = AnsatzSpec::new(3, 3).unwrap();
        let opts = VqeOptions {
            restarts: 4,
            seed: 3,
            ..VqeOptions::default()
        };
        let traj = time_march(&cfg, &spec, &opts).unwrap();
        assert_eq!(traj.infidelity().len(), 11);
        assert!(traj.all_converged());
        assert!(
            traj.final_infidelity() <= 1e-8,
            "final infidelity {}",
            traj.final_infidelity()
        );
        // Physical norms follow the classical ledger: strictly positive and
        // decaying under diffusion.
        for pair in traj.fields().windows(2) {
            assert!(pair[1].norm() > 0.0);
            assert!(pair[1].norm() <= pair[0].norm() * (1.0 + 1e-9));
        }
    }
}

//! Crate-wide error type.

use alloc::boxed::Box;
use alloc::string::String;

/// Errors produced by solver, simulator and transpiler operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// Operand dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Dimension required by the operation.
        expected: usize,
        /// Dimension that was supplied.
        got: usize,
    },

    /// A gate addresses a qubit outside the register.
    #[error("qubit index {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange {
        /// Offending qubit index.
        qubit: usize,
        /// Register size.
        n_qubits: usize,
    },

    /// A parameterized gate was executed without a bound angle.
    #[error("gate {gate_index} has an unbound rotation angle")]
    UnboundParameter {
        /// Index of the gate in the circuit.
        gate_index: usize,
    },

    /// A parameter vector does not match the circuit's slot count.
    #[error("parameter count mismatch: circuit has {expected} slots, got {got} values")]
    ParameterCount {
        /// Slot count of the circuit.
        expected: usize,
        /// Length of the supplied vector.
        got: usize,
    },

    /// An operator that must be Hermitian is not.
    #[error("operator is not Hermitian: max |H - H^dag| entry is {max_asymmetry:e}")]
    NonHermitian {
        /// Largest elementwise asymmetry found.
        max_asymmetry: f64,
    },

    /// A configuration value violates its constraints.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The explicit scheme is unstable for the requested step size.
    #[error("unstable time step: dt={dt} exceeds the stability limit {limit}")]
    Unstable {
        /// Requested time step.
        dt: f64,
        /// Tightest violated limit.
        limit: f64,
    },

    /// A field value became non-finite during time marching.
    #[error("non-finite field value at step {step}")]
    NonFiniteField {
        /// Step index at which the value appeared.
        step: usize,
    },

    /// The cost function evaluated to NaN or infinity.
    #[error("non-finite cost at optimizer iteration {iteration}")]
    NonFiniteCost {
        /// Optimizer iteration at which it happened.
        iteration: usize,
    },

    /// A field that must be nonzero is numerically zero.
    #[error("field norm {norm:e} is too small to normalize")]
    ZeroField {
        /// Norm that was found.
        norm: f64,
    },

    /// The block system matrix is numerically singular.
    #[error("block system is near-singular: smallest singular value {sigma_min:e}")]
    NearSingular {
        /// Smallest singular value found.
        sigma_min: f64,
    },

    /// The extracted VQE sub-state carries no weight.
    #[error("degenerate VQE state: extracted sub-vector norm {norm:e}")]
    DegenerateState {
        /// Norm of the extracted half of the statevector.
        norm: f64,
    },

    /// The extracted field has a non-negligible imaginary part.
    #[error("imaginary residue {max_imag:e} exceeds tolerance in extracted field")]
    ImaginaryResidue {
        /// Largest imaginary magnitude found.
        max_imag: f64,
    },

    /// A two-qubit gate spans non-adjacent qubits on the linear topology.
    #[error("two-qubit gate on non-adjacent qubits ({a}, {b}); routing is unsupported")]
    NonAdjacentQubits {
        /// First qubit.
        a: usize,
        /// Second qubit.
        b: usize,
    },

    /// A circuit contains a gate outside the hardware basis.
    #[error("gate {kind} is not in the {{X, SX, RZ, CZ}} basis")]
    NonBasisGate {
        /// Name of the offending gate kind.
        kind: &'static str,
    },

    /// A time-marching step failed; carries the underlying cause.
    #[error("time step {step} failed: {source}")]
    StepFailed {
        /// Index of the failed step.
        step: usize,
        /// Underlying error.
        #[source]
        source: Box<Error>,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

//! Exact statevector simulation: amplitude vectors, gates, circuits,
//! expectation values and fidelity.
//!
//! There is no shot sampling and no noise anywhere in this module; all
//! quantities are computed from the full wavefunction. Gates act through
//! in-place strided amplitude updates costing `O(2^n)` each; the dense
//! matrix route exists only in [`crate::reference`] as a test oracle.
//!
//! Qubit ordering is little-endian: qubit 0 is the least-significant bit of
//! the amplitude index. All modules and file outputs share this convention.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;
use crate::linalg::{self, DenseOperator};

/// A quantum gate with its qubit operands and (possibly unbound) angle.
///
/// `RY` is the only parameterized slot the ansatz uses; `RZ` always carries a
/// concrete angle. `H` appears transiently during CNOT-to-CZ conversion and
/// is eliminated before resource counting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Pauli X (bit flip).
    X {
        /// Target qubit.
        qubit: usize,
    },
    /// Square root of X.
    Sx {
        /// Target qubit.
        qubit: usize,
    },
    /// Hadamard.
    H {
        /// Target qubit.
        qubit: usize,
    },
    /// Rotation about Z, `diag(exp(-i a/2), exp(i a/2))`.
    Rz {
        /// Target qubit.
        qubit: usize,
        /// Rotation angle in radians.
        angle: f64,
    },
    /// Rotation about Y; `None` marks an unbound parameter slot.
    Ry {
        /// Target qubit.
        qubit: usize,
        /// Rotation angle in radians, when bound.
        angle: Option<f64>,
    },
    /// Controlled X.
    Cnot {
        /// Control qubit.
        control: usize,
        /// Target qubit.
        target: usize,
    },
    /// Controlled Z (symmetric in its operands).
    Cz {
        /// First qubit.
        a: usize,
        /// Second qubit.
        b: usize,
    },
}

impl Gate {
    /// Qubits the gate acts on.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::X { qubit }
            | Gate::Sx { qubit }
            | Gate::H { qubit }
            | Gate::Rz { qubit, .. }
            | Gate::Ry { qubit, .. } => (qubit, None),
            Gate::Cnot { control, target } => (control, Some(target)),
            Gate::Cz { a, b } => (a, Some(b)),
        }
    }

    /// Short name of the gate kind.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::X { .. } => "X",
            Gate::Sx { .. } => "SX",
            Gate::H { .. } => "H",
            Gate::Rz { .. } => "RZ",
            Gate::Ry { .. } => "RY",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz { .. } => "CZ",
        }
    }

    /// True when the gate carries no unbound parameter.
    pub fn is_bound(&self) -> bool {
        !matches!(self, Gate::Ry { angle: None, .. })
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let (q0, q1) = self.qubits();
        if q0 >= n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q0,
                n_qubits,
            });
        }
        if let Some(q1) = q1 {
            if q1 >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q1,
                    n_qubits,
                });
            }
            if q0 == q1 {
                return Err(Error::QubitOutOfRange {
                    qubit: q1,
                    n_qubits,
                });
            }
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed register, with parameter slots.
///
/// `parameter_slots` records, in order, the gate indices whose `RY` angles
/// are adjustable; a circuit is executable only once every slot is bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    parameter_slots: Vec<usize>,
}

impl Circuit {
    /// Empty circuit over `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            parameter_slots: Vec::new(),
        }
    }

    /// Appends a gate, validating its qubit operands.
    ///
    /// An `RY` pushed without an angle registers a new parameter slot.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        if let Gate::Ry { angle: None, .. } = gate {
            self.parameter_slots.push(self.gates.len());
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Register size.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Gate list in application order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of gates.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    /// True when the circuit has no gates.
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gate indices of the adjustable `RY` slots, in binding order.
    pub fn parameter_slots(&self) -> &[usize] {
        &self.parameter_slots
    }

    /// Number of adjustable parameters.
    pub fn parameter_count(&self) -> usize {
        self.parameter_slots.len()
    }

    /// True when every gate carries a concrete angle.
    pub fn is_fully_bound(&self) -> bool {
        self.gates.iter().all(Gate::is_bound)
    }

    /// Writes `params` into the parameter slots in place.
    pub fn set_parameters(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.parameter_slots.len() {
            return Err(Error::ParameterCount {
                expected: self.parameter_slots.len(),
                got: params.len(),
            });
        }
        for (&slot, &value) in self.parameter_slots.iter().zip(params) {
            match &mut self.gates[slot] {
                Gate::Ry { angle, .. } => *angle = Some(value),
                other => unreachable!("slot {slot} points at non-RY gate {other:?}"),
            }
        }
        Ok(())
    }

    /// Reads the current slot angles back; `None` entries are unbound.
    pub fn parameters(&self) -> Vec<Option<f64>> {
        self.parameter_slots
            .iter()
            .map(|&slot| match self.gates[slot] {
                Gate::Ry { angle, .. } => angle,
                _ => unreachable!("slot points at non-RY gate"),
            })
            .collect()
    }
}

/// A register of `n` qubits stored as `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros basis state `|0...0>`.
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    /// A computational basis state.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps an amplitude vector whose length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: amps.len().next_power_of_two().max(1),
                got: amps.len(),
            });
        }
        Ok(Self {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    /// Encodes a real unit vector as amplitudes.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Register size.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Amplitude dimension, `2^n_qubits`.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Amplitudes, index `i` little-endian over the qubits.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        linalg::norm2(&self.amps)
    }

    /// Applies one bound gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        self.apply_indexed(gate, usize::MAX)
    }

    fn apply_indexed(&mut self, gate: &Gate, gate_index: usize) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let dim = self.amps.len();
        match *gate {
            Gate::X { qubit } => {
                let mask = 1usize << qubit;
                for i in 0..dim {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Gate::Sx { qubit } => {
                // sqrt(X) = [[1+i, 1-i], [1-i, 1+i]] / 2
                let h0 = Complex64::new(0.5, 0.5);
                let h1 = Complex64::new(0.5, -0.5);
                let mask = 1usize << qubit;
                for i in 0..dim {
                    if i & mask == 0 {
                        let j = i | mask;
                        let a = self.amps[i];
                        let b = self.amps[j];
                        self.amps[i] = h0 * a + h1 * b;
                        self.amps[j] = h1 * a + h0 * b;
                    }
                }
            }
            Gate::H { qubit } => {
                let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
                let mask = 1usize << qubit;
                for i in 0..dim {
                    if i & mask == 0 {
                        let j = i | mask;
                        let a = self.amps[i];
                        let b = self.amps[j];
                        self.amps[i] = (a + b) * inv_sqrt2;
                        self.amps[j] = (a - b) * inv_sqrt2;
                    }
                }
            }
            Gate::Rz { qubit, angle } => {
                let half = angle / 2.0;
                let phase0 = Complex64::new(fmath::cos(half), -fmath::sin(half));
                let phase1 = phase0.conj();
                let mask = 1usize << qubit;
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    *amp *= if i & mask == 0 { phase0 } else { phase1 };
                }
            }
            Gate::Ry { qubit, angle } => {
                let angle = angle.ok_or(Error::UnboundParameter { gate_index })?;
                let c = fmath::cos(angle / 2.0);
                let s = fmath::sin(angle / 2.0);
                let mask = 1usize << qubit;
                for i in 0..dim {
                    if i & mask == 0 {
                        let j = i | mask;
                        let a = self.amps[i];
                        let b = self.amps[j];
                        self.amps[i] = c * a - s * b;
                        self.amps[j] = s * a + c * b;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in 0..dim {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amps.swap(i, i | tmask);
                    }
                }
            }
            Gate::Cz { a, b } => {
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies a fully bound circuit in place.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                got: 1 << circuit.n_qubits(),
            });
        }
        for (idx, gate) in circuit.gates().iter().enumerate() {
            self.apply_indexed(gate, idx)?;
        }
        Ok(())
    }
}

/// Applies one gate, returning the new state.
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Applies a fully bound circuit, returning the new state.
pub fn apply_circuit(state: &Statevector, circuit: &Circuit) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply_circuit(circuit)?;
    Ok(out)
}

/// Real expectation value `<psi|H|psi>` of a Hermitian operator.
///
/// `H` must be Hermitian within `1e-10` elementwise; the (tiny) imaginary
/// part of the quadratic form is discarded.
pub fn expectation(state: &Statevector, h: &DenseOperator) -> Result<f64> {
    if h.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: h.dim(),
        });
    }
    let asym = h.max_asymmetry();
    if asym > 1e-10 {
        return Err(Error::NonHermitian {
            max_asymmetry: asym,
        });
    }
    let image = h.mul_vec(state.amplitudes());
    let value = linalg::inner(state.amplitudes(), &image);
    debug_assert!(
        fmath::abs(value.im) <= 1e-10,
        "expectation of Hermitian operator has imaginary part {:e}",
        value.im
    );
    Ok(value.re)
}

/// Squared overlap `|<a|b>|^2` of two normalized states.
pub fn fidelity(a: &Statevector, b: &Statevector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    debug_assert!(fmath::abs(a.norm() - 1.0) < 1e-10, "lhs not normalized");
    debug_assert!(fmath::abs(b.norm() - 1.0) < 1e-10, "rhs not normalized");
    Ok(linalg::inner(a.amplitudes(), b.amplitudes()).norm_sqr())
}

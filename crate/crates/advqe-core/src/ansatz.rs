//! RealAmplitudes ansatz: RY rotation layers interleaved with CNOT chains.
//!
//! The circuit opens with an RY rotation on every qubit and then repeats,
//! per layer, a nearest-neighbor CNOT chain followed by another RY layer, so
//! a depth-`L` ansatz carries `(L + 1) * n` parameters. RY and CNOT are real
//! matrices, so states prepared from `|0...0>` stay real for any parameters;
//! that is what makes the ansatz a natural fit for real-valued PDE fields.
//!
//! The entanglement map is an open-ended chain (no wraparound), which
//! transpiles to a linear qubit topology without any routing.

use alloc::format;

use crate::error::{Error, Result};
use crate::sim::{Circuit, Gate};

/// Shape of a RealAmplitudes circuit: register size and layer count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzSpec {
    n_qubits: usize,
    layers: usize,
}

impl AnsatzSpec {
    /// Validates and builds a spec; `layers` may be zero.
    pub fn new(n_qubits: usize, layers: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidConfig(format!(
                "ansatz needs at least one qubit, got {n_qubits}"
            )));
        }
        Ok(Self { n_qubits, layers })
    }

    /// Register size.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of entangle-rotate layers after the initial rotation layer.
    pub fn layers(&self) -> usize {
        self.layers
    }

    /// Total adjustable parameters, `(layers + 1) * n_qubits`.
    pub fn parameter_count(&self) -> usize {
        (self.layers + 1) * self.n_qubits
    }
}

/// Builds the unbound circuit template for a spec.
///
/// Parameter slots are ordered layer-major, qubit-ascending, so warm-start
/// vectors are portable across runs.
pub fn build_template(spec: &AnsatzSpec) -> Circuit {
    let n = spec.n_qubits();
    let mut circuit = Circuit::new(n);
    let rotation_layer = |circuit: &mut Circuit| {
        for q in 0..n {
            circuit
                .push(Gate::Ry {
                    qubit: q,
                    angle: None,
                })
                .expect("qubit index in range by construction");
        }
    };
    rotation_layer(&mut circuit);
    for _ in 0..spec.layers() {
        for q in 0..n.saturating_sub(1) {
            circuit
                .push(Gate::Cnot {
                    control: q,
                    target: q + 1,
                })
                .expect("qubit index in range by construction");
        }
        rotation_layer(&mut circuit);
    }
    debug_assert_eq!(circuit.parameter_count(), spec.parameter_count());
    circuit
}

/// Binds a parameter vector to a template, leaving the template unmodified.
pub fn bind(template: &Circuit, params: &[f64]) -> Result<Circuit> {
    let mut bound = template.clone();
    bound.set_parameters(params)?;
    Ok(bound)
}

//! Slow reference implementations used by the test suites as independent
//! oracles.
//!
//! Everything here deliberately takes the heavyweight route the production
//! paths avoid: circuits become dense unitaries assembled from Kronecker
//! products and multiplied out in full, and linear systems go through a
//! plain Gauss-Jordan elimination written separately from
//! [`crate::linalg::lu_solve`]. None of this is called by the solver code;
//! it exists so the fast paths have something independent to be checked
//! against.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;
use crate::linalg::DenseOperator;
use crate::sim::{Circuit, Gate};

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_qubit_matrix(gate: &Gate, gate_index: usize) -> Result<Mat2> {
    Ok(match *gate {
        Gate::X { .. } => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Gate::Sx { .. } => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        Gate::H { .. } => {
            let s = core::f64::consts::FRAC_1_SQRT_2;
            [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
        }
        Gate::Rz { angle, .. } => {
            let (cos, sin) = (fmath::cos(angle / 2.0), fmath::sin(angle / 2.0));
            [
                [c(cos, -sin), c(0.0, 0.0)],
                [c(0.0, 0.0), c(cos, sin)],
            ]
        }
        Gate::Ry { angle, .. } => {
            let angle = angle.ok_or(Error::UnboundParameter { gate_index })?;
            let (cos, sin) = (fmath::cos(angle / 2.0), fmath::sin(angle / 2.0));
            [[c(cos, 0.0), c(-sin, 0.0)], [c(sin, 0.0), c(cos, 0.0)]]
        }
        _ => unreachable!("two-qubit gates handled separately"),
    })
}

/// Kronecker product; the right factor indexes the low bits.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = DenseOperator::zeros(na * nb).expect("product of powers of two");
    for i1 in 0..na {
        for j1 in 0..na {
            let scale = a.entry(i1, j1);
            for i2 in 0..nb {
                for j2 in 0..nb {
                    out.set_entry(i1 * nb + i2, j1 * nb + j2, scale * b.entry(i2, j2));
                }
            }
        }
    }
    out
}

/// Places 2x2 matrices on selected qubits and identities elsewhere, in
/// little-endian order (qubit 0 is the least-significant index bit).
fn place(n_qubits: usize, factors: &[(usize, Mat2)]) -> DenseOperator {
    let ident2 = DenseOperator::identity(2).expect("power of two");
    let mut out = DenseOperator::identity(1).expect("power of two");
    for q in (0..n_qubits).rev() {
        let factor = match factors.iter().find(|(fq, _)| *fq == q) {
            Some((_, m)) => DenseOperator::from_entries(
                2,
                vec![m[0][0], m[0][1], m[1][0], m[1][1]],
            )
            .expect("2x2"),
            None => ident2.clone(),
        };
        out = kron(&out, &factor);
    }
    out
}

/// Dense unitary of a single gate on an `n_qubits` register.
pub fn gate_unitary(gate: &Gate, n_qubits: usize, gate_index: usize) -> Result<DenseOperator> {
    let p0: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
    let p1: Mat2 = [[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let x: Mat2 = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
    let z: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
    match *gate {
        Gate::Cnot { control, target } => Ok(place(n_qubits, &[(control, p0)])
            .add(&place(n_qubits, &[(control, p1), (target, x)]))),
        Gate::Cz { a, b } => {
            Ok(place(n_qubits, &[(a, p0)]).add(&place(n_qubits, &[(a, p1), (b, z)])))
        }
        ref single => Ok(place(
            n_qubits,
            &[(single.qubits().0, single_qubit_matrix(single, gate_index)?)],
        )),
    }
}

/// Dense unitary of a whole circuit (later gates multiply from the left).
pub fn circuit_unitary(circuit: &Circuit) -> Result<DenseOperator> {
    let mut total = DenseOperator::identity(1 << circuit.n_qubits())?;
    for (index, gate) in circuit.gates().iter().enumerate() {
        total = gate_unitary(gate, circuit.n_qubits(), index)?.mul_mat(&total);
    }
    Ok(total)
}

/// Whether two operators agree up to a single global phase.
pub fn equal_up_to_phase(a: &DenseOperator, b: &DenseOperator, tol: f64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let n = a.dim();
    // Anchor the phase on the largest entry of `a`.
    let mut anchor = (0, 0);
    let mut anchor_mag = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mag = a.entry(i, j).norm();
            if mag > anchor_mag {
                anchor_mag = mag;
                anchor = (i, j);
            }
        }
    }
    if anchor_mag < tol {
        return b.one_norm() < tol;
    }
    let phase = b.entry(anchor.0, anchor.1) / a.entry(anchor.0, anchor.1);
    if (phase.norm() - 1.0).abs() > tol {
        return false;
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((b.entry(i, j) - phase * a.entry(i, j)).norm());
        }
    }
    worst <= tol
}

/// Solves `mat x = rhs` by Gauss-Jordan elimination with partial pivoting.
pub fn solve_linear_system(mat: &DenseOperator, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = mat.dim();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut a: Vec<Complex64> = mat.entries().to_vec();
    let mut x: Vec<Complex64> = rhs.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                a[r1 * n + col]
                    .norm()
                    .partial_cmp(&a[r2 * n + col].norm())
                    .expect("finite entries")
            })
            .expect("non-empty range");
        if a[pivot_row * n + col].norm() == 0.0 {
            return Err(Error::NearSingular { sigma_min: 0.0 });
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            x.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= pivot;
        }
        x[col] /= pivot;
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row * n + col];
            if factor.norm() == 0.0 {
                continue;
            }
            for k in 0..n {
                let sub = factor * a[col * n + k];
                a[row * n + k] -= sub;
            }
            let sub = factor * x[col];
            x[row] -= sub;
        }
    }
    Ok(x)
}

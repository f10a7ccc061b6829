//! Dense linear algebra on power-of-two dimensions.
//!
//! Everything in the pipeline lives in dimension `2^N` (fields, the finite
//! difference operator) or `2^(N+1)` (the block system and its Hamiltonian),
//! with `N = 4` at reference scale, so dense row-major storage is used
//! throughout. The module provides the little that is needed: products,
//! adjoints, an LU solver with partial pivoting, a Pade scaling-and-squaring
//! matrix exponential, and a cyclic Jacobi eigensolver for real symmetric
//! matrices (used to certify Hamiltonian spectra and singular values).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;

/// Dense square matrix of complex scalars with power-of-two dimension.
///
/// Hosts the finite-difference operator (real-valued entries), the block
/// system matrix and the per-step Hamiltonians.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    /// Zero matrix of dimension `dim`; `dim` must be a power of two.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "operator dimension {dim} is not a power of two"
            )));
        }
        Ok(Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    /// Identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds an operator from row-major complex entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut m = Self::zeros(dim)?;
        m.entries = entries;
        Ok(m)
    }

    /// Builds a real-valued operator from row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut m = Self::zeros(dim)?;
        for (dst, &src) in m.entries.iter_mut().zip(entries) {
            *dst = Complex64::new(src, 0.0);
        }
        Ok(m)
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at row `i`, column `j`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// Overwrites the entry at row `i`, column `j`.
    #[inline]
    pub fn set_entry(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
    }

    /// Row-major view of all entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "operand length must match operator dim");
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (i, out_i) in out.iter_mut().enumerate() {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            *out_i = acc;
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul_mat(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator dims must match");
        let n = self.dim;
        let mut out = Self::zeros(n).expect("dim already validated");
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row_k = &rhs.entries[k * n..(k + 1) * n];
                let out_row = &mut out.entries[i * n..(i + 1) * n];
                for (o, b) in out_row.iter_mut().zip(row_k) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n).expect("dim already validated");
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    /// Entrywise scaling by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= factor;
        }
        out
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator dims must match");
        let mut out = self.clone();
        for (o, b) in out.entries.iter_mut().zip(&rhs.entries) {
            *o += b;
        }
        out
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator dims must match");
        let mut out = self.clone();
        for (o, b) in out.entries.iter_mut().zip(&rhs.entries) {
            *o -= b;
        }
        out
    }

    /// Largest elementwise deviation from Hermiticity, `max |a_ij - conj(a_ji)|`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = self.entries[i * n + j] - self.entries[j * n + i].conj();
                let mag = fmath::hypot(d.re, d.im);
                if mag > worst {
                    worst = mag;
                }
            }
        }
        worst
    }

    /// Largest imaginary magnitude over all entries.
    pub fn max_imag(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| fmath::abs(e.im))
            .fold(0.0, f64::max)
    }

    /// Per-column entry sums.
    pub fn column_sums(&self) -> Vec<Complex64> {
        let n = self.dim;
        let mut sums = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            for (j, s) in sums.iter_mut().enumerate() {
                *s += self.entries[i * n + j];
            }
        }
        sums
    }

    /// Induced 1-norm (max absolute column sum).
    pub fn one_norm(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for j in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                let e = self.entries[i * n + j];
                s += fmath::hypot(e.re, e.im);
            }
            if s > worst {
                worst = s;
            }
        }
        worst
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2(v: &[Complex64]) -> f64 {
    fmath::sqrt(v.iter().map(|e| e.norm_sqr()).sum())
}

/// Inner product `<a|b>` (conjugate-linear in the first argument).
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "operand lengths must match");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// LU factorization with partial pivoting, in place.
///
/// Returns the pivot permutation and its sign; `Err` if a pivot collapses.
fn lu_factor(a: &mut [Complex64], n: usize) -> Result<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = fmath::hypot(a[col * n + col].re, a[col * n + col].im);
        for row in col + 1..n {
            let mag = fmath::hypot(a[row * n + col].re, a[row * n + col].im);
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag == 0.0 {
            return Err(Error::NearSingular { sigma_min: 0.0 });
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            perm.swap(col, pivot_row);
            sign = -sign;
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            a[row * n + col] = factor;
            for k in col + 1..n {
                let sub = factor * a[col * n + k];
                a[row * n + k] -= sub;
            }
        }
    }
    Ok((perm, sign))
}

/// Solves `mat * x = rhs` by LU factorization with partial pivoting.
pub fn lu_solve(mat: &DenseOperator, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = mat.dim;
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut a = mat.entries.clone();
    let (perm, _) = lu_factor(&mut a, n)?;

    let mut x: Vec<Complex64> = perm.iter().map(|&p| rhs[p]).collect();
    // Forward substitution with unit lower-triangular L.
    for i in 1..n {
        for k in 0..i {
            let sub = a[i * n + k] * x[k];
            x[i] -= sub;
        }
    }
    // Back substitution with U.
    for i in (0..n).rev() {
        for k in i + 1..n {
            let sub = a[i * n + k] * x[k];
            x[i] -= sub;
        }
        x[i] /= a[i * n + i];
    }
    Ok(x)
}

/// Determinant via LU factorization.
pub fn determinant(mat: &DenseOperator) -> Complex64 {
    let n = mat.dim;
    let mut a = mat.entries.clone();
    match lu_factor(&mut a, n) {
        Err(_) => Complex64::new(0.0, 0.0),
        Ok((_, sign)) => {
            let mut det = Complex64::new(sign, 0.0);
            for i in 0..n {
                det *= a[i * n + i];
            }
            det
        }
    }
}

// Pade numerator coefficients for the diagonal approximants of exp; the
// denominator reuses them with alternating signs.
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const PADE9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

// 1-norm thresholds below which each approximant meets double precision
// (Higham, "The Scaling and Squaring Method ... Revisited").
const THETA3: f64 = 1.495_585_217_958_292e-2;
const THETA5: f64 = 2.539_398_330_063_23e-1;
const THETA7: f64 = 9.504_178_996_162_932e-1;
const THETA9: f64 = 2.097_847_961_257_068;
const THETA13: f64 = 5.371_920_351_148_152;

fn pade_uv(a: &DenseOperator, coeffs: &[f64]) -> (DenseOperator, DenseOperator) {
    let n = a.dim;
    let ident = DenseOperator::identity(n).expect("dim already validated");
    // Even powers a^2, a^4, ...
    let a2 = a.mul_mat(a);
    let mut even_pows = vec![ident.clone(), a2.clone()];
    while even_pows.len() < coeffs.len() / 2 {
        let next = even_pows.last().unwrap().mul_mat(&a2);
        even_pows.push(next);
    }
    let mut u_inner = DenseOperator::zeros(n).expect("dim already validated");
    let mut v = DenseOperator::zeros(n).expect("dim already validated");
    for (k, pow) in even_pows.iter().enumerate() {
        u_inner = u_inner.add(&pow.scaled(coeffs[2 * k + 1]));
        v = v.add(&pow.scaled(coeffs[2 * k]));
    }
    (a.mul_mat(&u_inner), v)
}

// Order 13 uses the factored evaluation scheme to avoid forming a^12.
fn pade13_uv(a: &DenseOperator) -> (DenseOperator, DenseOperator) {
    let n = a.dim;
    let b = &PADE13;
    let ident = DenseOperator::identity(n).expect("dim already validated");
    let a2 = a.mul_mat(a);
    let a4 = a2.mul_mat(&a2);
    let a6 = a4.mul_mat(&a2);

    let u_high = a6
        .scaled(b[13])
        .add(&a4.scaled(b[11]))
        .add(&a2.scaled(b[9]));
    let u_low = a6
        .scaled(b[7])
        .add(&a4.scaled(b[5]))
        .add(&a2.scaled(b[3]))
        .add(&ident.scaled(b[1]));
    let u = a.mul_mat(&a6.mul_mat(&u_high).add(&u_low));

    let v_high = a6
        .scaled(b[12])
        .add(&a4.scaled(b[10]))
        .add(&a2.scaled(b[8]));
    let v = a6
        .mul_mat(&v_high)
        .add(&a6.scaled(b[6]))
        .add(&a4.scaled(b[4]))
        .add(&a2.scaled(b[2]))
        .add(&ident.scaled(b[0]));
    (u, v)
}

/// Matrix exponential by Pade approximation with scaling and squaring.
pub fn expm(a: &DenseOperator) -> DenseOperator {
    let norm = a.one_norm();
    let (u, v, squarings) = if norm <= THETA3 {
        let (u, v) = pade_uv(a, &PADE3);
        (u, v, 0u32)
    } else if norm <= THETA5 {
        let (u, v) = pade_uv(a, &PADE5);
        (u, v, 0)
    } else if norm <= THETA7 {
        let (u, v) = pade_uv(a, &PADE7);
        (u, v, 0)
    } else if norm <= THETA9 {
        let (u, v) = pade_uv(a, &PADE9);
        (u, v, 0)
    } else {
        let squarings = fmath::ceil(fmath::log2(norm / THETA13)).max(0.0) as u32;
        let scaled = a.scaled(fmath::powi(0.5, squarings as i32));
        let (u, v) = pade13_uv(&scaled);
        (u, v, squarings)
    };

    // r(a) = (v - u)^-1 (v + u), solved column by column.
    let n = a.dim;
    let denom = v.sub(&u);
    let numer = v.add(&u);
    let mut result = DenseOperator::zeros(n).expect("dim already validated");
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for (i, c) in col.iter_mut().enumerate() {
            *c = numer.entry(i, j);
        }
        let x = lu_solve(&denom, &col).expect("Pade denominator is well conditioned");
        for (i, value) in x.into_iter().enumerate() {
            result.set_entry(i, j, value);
        }
    }
    for _ in 0..squarings {
        result = result.mul_mat(&result);
    }
    result
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
///
/// The operator must be real within `1e-9` and symmetric within `1e-9`;
/// eigenvalues are returned in ascending order.
pub fn symmetric_eigenvalues(mat: &DenseOperator) -> Result<Vec<f64>> {
    let imag = mat.max_imag();
    if imag > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "matrix has imaginary entries up to {imag:e}; expected real symmetric"
        )));
    }
    let asym = mat.max_asymmetry();
    if asym > 1e-9 {
        return Err(Error::NonHermitian {
            max_asymmetry: asym,
        });
    }

    let n = mat.dim;
    let mut a: Vec<f64> = mat.entries.iter().map(|e| e.re).collect();
    // Symmetrize so rotations preserve symmetry exactly.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }

    let scale = a
        .iter()
        .map(|&x| fmath::abs(x))
        .fold(0.0, f64::max)
        .max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(fmath::abs(a[p * n + q]));
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if fmath::abs(apq) <= 1e-18 * scale {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + fmath::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + fmath::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / fmath::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(eigs)
}

/// Smallest singular value, computed from the spectrum of `A^dag A`.
pub fn smallest_singular_value(mat: &DenseOperator) -> Result<f64> {
    let gram = mat.adjoint().mul_mat(mat);
    let eigs = symmetric_eigenvalues(&gram)?;
    Ok(fmath::sqrt(eigs[0].max(0.0)))
}

//! Naive dense-matrix reference implementations.
//!
//! Nothing in here shares code with the statevector simulator: operators are
//! expanded by explicit Kronecker products, and exponentials are taken by
//! eigendecomposition or Taylor series. Test suites use these as independent
//! oracles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{jordan_wigner, spin_squared};
use crate::pauli::{Axis, PauliSum};

pub const DEFAULT_ORACLE_CAP: usize = 12;

pub type DenseMatrix = DMatrix<Complex64>;
pub type DenseVector = DVector<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn axis_matrix(axis: Option<Axis>) -> DenseMatrix {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let entries = match axis {
        None => [o, z, z, o],
        Some(Axis::X) => [z, o, o, z],
        Some(Axis::Y) => [z, -i, i, z],
        Some(Axis::Z) => [o, z, z, -o],
    };
    DenseMatrix::from_row_slice(2, 2, &entries)
}

/// Dense `2^n × 2^n` matrix of `a`. Qubit 0 is the leftmost Kronecker factor
/// (most significant bit of the basis index).
pub fn to_dense(a: &PauliSum, n_qubits: usize) -> Result<DenseMatrix> {
    to_dense_with_cap(a, n_qubits, DEFAULT_ORACLE_CAP)
}

pub fn to_dense_with_cap(a: &PauliSum, n_qubits: usize, cap: usize) -> Result<DenseMatrix> {
    if n_qubits > cap {
        return Err(Error::OracleCapExceeded {
            requested: n_qubits,
            cap,
        });
    }
    if let Some(q) = a.max_qubit() {
        if q >= n_qubits {
            return Err(Error::IndexOutOfRange {
                index: q,
                size: n_qubits,
            });
        }
    }
    let dim = 1usize << n_qubits;
    let mut out = DenseMatrix::zeros(dim, dim);
    for (s, coef) in a.iter() {
        let mut m = DenseMatrix::from_element(1, 1, c(1.0, 0.0));
        for q in 0..n_qubits {
            m = m.kronecker(&axis_matrix(s.axis_at(q)));
        }
        out += m * *coef;
    }
    Ok(out)
}

/// Eigenvalues and eigenvectors of a hermitian matrix, ascending.
pub fn hermitian_eigen(m: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DenseMatrix::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// `exp(-i t M)` for hermitian `M`, by eigendecomposition.
pub fn expm_hermitian(m: &DenseMatrix, t: f64) -> DenseMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let phases = DenseVector::from_iterator(
        values.len(),
        values.iter().map(|&l| Complex64::from_polar(1.0, -t * l)),
    );
    &vectors * DenseMatrix::from_diagonal(&phases) * vectors.adjoint()
}

/// `exp(-i t M) v` by a Taylor series of matrix-vector products, run until
/// the next term drops below machine precision.
pub fn expm_apply_taylor(m: &DenseMatrix, t: f64, v: &DenseVector) -> DenseVector {
    let mut term = v.clone();
    let mut sum = v.clone();
    let factor = c(0.0, -t);
    for k in 1..400 {
        term = (m * term) * (factor / k as f64);
        sum += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    sum
}

/// Basis vector `|index⟩` of dimension `2^n`.
pub fn basis_vector(n_qubits: usize, index: usize) -> DenseVector {
    let mut v = DenseVector::zeros(1 << n_qubits);
    v[index] = c(1.0, 0.0);
    v
}

/// Eigenvalues of a particle-conserving Hamiltonian restricted to basis states
/// with `electrons` occupied orbitals and, when `singlet` is set, to the
/// `S² = 0` subspace. Ascending.
pub fn sector_eigenvalues(
    h: &PauliSum,
    n_qubits: usize,
    electrons: Option<usize>,
    singlet: bool,
) -> Result<Vec<f64>> {
    let full = to_dense(h, n_qubits)?;
    let keep: Vec<usize> = (0..full.nrows())
        .filter(|i| electrons.is_none_or(|n| i.count_ones() as usize == n))
        .collect();
    let restrict = |m: &DenseMatrix| DenseMatrix::from_fn(keep.len(), keep.len(), |r, c| m[(keep[r], keep[c])]);
    let hs = restrict(&full);
    if !singlet {
        return Ok(hermitian_eigenvalues(&hs));
    }
    let s2 = jordan_wigner(&spin_squared(n_qubits), n_qubits)?;
    let (spins, vectors) = hermitian_eigen(&restrict(&to_dense(&s2, n_qubits)?));
    let cols: Vec<DenseVector> = spins
        .iter()
        .enumerate()
        .filter(|(_, s)| s.abs() < 1e-8)
        .map(|(k, _)| vectors.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let v = DenseMatrix::from_columns(&cols);
    Ok(hermitian_eigenvalues(&(v.adjoint() * hs * &v)))
}

/// Lowest eigenvalues by shifted power iteration (`(σ - M)` has its dominant
/// eigenvalue at the bottom of the spectrum), with deflation of converged
/// vectors. Slow but independent of the LAPACK-style solver above.
pub fn lowest_eigenvalues_power(m: &DenseMatrix, k: usize, iters: usize) -> Vec<f64> {
    let n = m.nrows();
    let bound: f64 = (0..n)
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let shifted = DenseMatrix::identity(n, n) * c(bound, 0.0) - m;
    let mut found: Vec<DenseVector> = Vec::new();
    let mut values = Vec::new();
    for j in 0..k.min(n) {
        let mut v = DenseVector::from_iterator(
            n,
            (0..n).map(|i| c(1.0 + ((i * 7 + j * 13) % 11) as f64 * 0.1, 0.0)),
        );
        for _ in 0..iters {
            for u in &found {
                let proj = u.dotc(&v);
                v -= u * proj;
            }
            v = &shifted * &v;
            let norm = v.norm();
            v /= c(norm, 0.0);
        }
        for u in &found {
            let proj = u.dotc(&v);
            v -= u * proj;
        }
        let norm = v.norm();
        v /= c(norm, 0.0);
        values.push(v.dotc(&(m * &v)).re);
        found.push(v);
    }
    values
}

//! Dense matrix oracles and Hermitian spectra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const DEFAULT_MAX_DENSE_QUBITS: usize = 14;
pub const MAX_DENSE_ENV: &str = "FERTAPER_MAX_DENSE_QUBITS";

/// Qubit cap for dense oracles, overridable through `FERTAPER_MAX_DENSE_QUBITS`.
pub fn max_dense_qubits() -> usize {
    std::env::var(MAX_DENSE_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DENSE_QUBITS)
}

pub fn guard(qubits: usize) -> Result<()> {
    let limit = max_dense_qubits();
    if qubits > limit {
        return Err(Error::SizeGuard { qubits, limit });
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Ascending eigenvalues with matching eigenvectors as columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Largest elementwise gap between two sorted spectra, or `None` if their
/// lengths differ.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    Some(
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

pub fn spectra_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    spectrum_distance(a, b).is_some_and(|d| d <= tol)
}

pub fn hermiticity_error(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `P m P^T` where `P` is the permutation matrix sending basis index `i` to
/// `perm[i]`.
pub fn permute_basis(m: &CMatrix, perm: &[usize]) -> CMatrix {
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            out[(perm[r], perm[c])] = m[(r, c)];
        }
    }
    out
}

/// Submatrix on the given row/column indices.
pub fn restrict(m: &CMatrix, indices: &[usize]) -> CMatrix {
    CMatrix::from_fn(indices.len(), indices.len(), |r, c| {
        m[(indices[r], indices[c])]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_z_spectrum() {
        let z = CMatrix::from_diagonal(&CVector::from_vec(vec![1.0.into(), (-1.0).into()]));
        assert_eq!(eigenvalues(&z), vec![-1.0, 1.0]);
    }

    #[test]
    fn guard_respects_limit() {
        assert!(guard(3).is_ok());
        assert!(guard(64).is_err());
    }
}

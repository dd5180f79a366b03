use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use super::{ensure_finite, ensure_square, ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

const MAX_SWEEPS: usize = 10_000;

/// Eigenvalues (ascending) and the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<V> {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: V,
}

impl SpectralDecomposition<RealMatrix> {
    pub fn reconstruct(&self) -> RealMatrix {
        let d = RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        &self.eigenvectors * d * self.eigenvectors.transpose()
    }
}

impl SpectralDecomposition<ComplexMatrix> {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }
}

fn sorted<T: nalgebra::Scalar>(values: &nalgebra::DVector<f64>, vectors: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let vals = order.iter().map(|&k| values[k]).collect();
    let vecs = DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])].clone());
    (vals, vecs)
}

/// Spectral decomposition of a Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: &Tolerances) -> Result<SpectralDecomposition<ComplexMatrix>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let residual = (m - m.adjoint()).norm();
    if residual > tol.structural * m.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitian { residual });
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig =
        SymmetricEigen::try_new(h, f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence("hermitian eigensolver"))?;
    let (eigenvalues, eigenvectors) = sorted(&eig.eigenvalues, &eig.eigenvectors);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// Spectral decomposition of a real symmetric matrix.
pub fn symmetric_eigen(m: &RealMatrix, tol: &Tolerances) -> Result<SpectralDecomposition<RealMatrix>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let residual = (m - m.transpose()).norm();
    if residual > tol.structural * m.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitian { residual });
    }
    let s = (m + m.transpose()) * 0.5;
    let eig =
        SymmetricEigen::try_new(s, f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence("symmetric eigensolver"))?;
    let (eigenvalues, eigenvectors) = sorted(&eig.eigenvalues, &eig.eigenvectors);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// Eigenvalues of a general complex matrix (complex Schur form).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence("complex Schur"))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|k| t[(k, k)]).collect())
}

/// Eigenvalues of a real matrix, possibly complex.
pub fn real_eigenvalues(m: &RealMatrix) -> Result<Vec<Complex64>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let schur = Schur::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence("real Schur"))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

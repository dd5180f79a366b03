//! Dense small-matrix primitives shared by the rest of the crate.
//!
//! Everything here is domain agnostic: real and complex matrices, spectral
//! decompositions, matrix logarithm/exponential and the polar decomposition.
//! Matrices are `nalgebra::DMatrix`; the design envelope is n ≤ 32.

mod eigen;
mod functions;

pub use eigen::{eigenvalues, hermitian_eigen, real_eigenvalues, symmetric_eigen, SpectralDecomposition};
pub use functions::{matrix_exp, polar_decompose, real_matrix_log, unitary_log_trace};

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// The standard symplectic matrix `J = (0 I; -I 0)` of size 2n×2n.
pub fn symplectic_j(n: usize) -> RealMatrix {
    let mut j = RealMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = 1.0;
        j[(n + k, k)] = -1.0;
    }
    j
}

/// Embeds `u = A + iB` into Sp(n) as `(A -B; B A)`.
pub fn embed_unitary(u: &ComplexMatrix) -> RealMatrix {
    let n = u.nrows();
    let mut s = RealMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = u[(r, c)];
            s[(r, c)] = z.re;
            s[(r, n + c)] = -z.im;
            s[(n + r, c)] = z.im;
            s[(n + r, n + c)] = z.re;
        }
    }
    s
}

/// Inverse of [`embed_unitary`]: reads `A + iB` off the blocks of `s`.
///
/// No structure check; callers decide whether `s` is orthogonal-symplectic.
pub fn unitary_part(s: &RealMatrix) -> ComplexMatrix {
    let n = s.nrows() / 2;
    ComplexMatrix::from_fn(n, n, |r, c| Complex64::new(s[(r, c)], s[(n + r, c)]))
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Frobenius norm.
pub fn norm<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.norm()
}

/// `‖a − b‖ / max(‖b‖, 1)`.
pub fn relative_residual<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn ensure_square<T: ComplexField>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub fn ensure_finite<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<()> {
    if m.iter().all(|z| z.clone().modulus().is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix has non-finite entries".into()))
    }
}

/// Singular values, largest first.
pub fn singular_values<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
        .ok_or(Error::NoConvergence("singular value decomposition"))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Number of singular values above `tol` times the largest one.
pub fn rank_with_tolerance<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, tol: f64) -> Result<usize> {
    let sv = singular_values(m)?;
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * largest).count())
}

/// Number of singular values above `tol * scale` for a caller-supplied scale.
pub fn rank_with_scale<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, tol: f64, scale: f64) -> Result<usize> {
    let sv = singular_values(m)?;
    Ok(sv.iter().filter(|&&s| s > tol * scale).count())
}

/// `‖SᵀJS − J‖` relative to `‖J‖`.
pub fn symplectic_residual(s: &RealMatrix) -> f64 {
    let n = s.nrows() / 2;
    let j = symplectic_j(n);
    (s.transpose() * &j * s - &j).norm() / j.norm()
}

pub fn orthogonality_residual(s: &RealMatrix) -> f64 {
    let id = RealMatrix::identity(s.nrows(), s.ncols());
    (s.transpose() * s - id).norm()
}

pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let id = ComplexMatrix::identity(u.nrows(), u.ncols());
    (u * u.adjoint() - id).norm()
}

/// Determinant of a small complex matrix via LU.
pub fn det(m: &ComplexMatrix) -> Complex64 {
    m.clone().lu().determinant()
}

/// Maps an angle to the principal interval (−π, π].
pub fn principal_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Rounds `x` to an integer, failing if it is further than `tol` away.
pub fn to_integer(x: f64, tol: f64) -> Result<(i64, f64)> {
    let r = x.round();
    let residual = (x - r).abs();
    if !x.is_finite() || residual > tol {
        return Err(Error::NonIntegerResult { value: x });
    }
    Ok((r as i64, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_squares_to_minus_identity() {
        let j = symplectic_j(3);
        assert_eq!(&j * &j, -RealMatrix::identity(6, 6));
        assert_eq!(symplectic_residual(&j), 0.0);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let a = ComplexMatrix::from_fn(2, 2, |r, c| Complex64::new(r as f64 + 0.5, c as f64 - 0.25));
        let b = ComplexMatrix::from_fn(2, 2, |r, c| Complex64::new((r * c) as f64, 1.0 - r as f64));
        let lhs = embed_unitary(&(&a * &b));
        let rhs = embed_unitary(&a) * embed_unitary(&b);
        assert!((lhs - rhs).norm() < 1e-13);
        assert_eq!(unitary_part(&embed_unitary(&a)), a);
    }

    #[test]
    fn rank_edge_cases() {
        assert_eq!(rank_with_tolerance(&RealMatrix::zeros(3, 3), 1e-9).unwrap(), 0);
        assert_eq!(rank_with_tolerance(&RealMatrix::identity(4, 4), 1e-9).unwrap(), 4);
        // w − w' for the momentum and position planes: I − (−I) = 2I
        let d = ComplexMatrix::identity(3, 3) * Complex64::new(2.0, 0.0);
        assert_eq!(rank_with_tolerance(&d, 1e-9).unwrap(), 3);
        let noise = RealMatrix::from_element(2, 2, 1e-16);
        assert_eq!(rank_with_scale(&noise, 1e-9, 1.0).unwrap(), 0);
    }

    #[test]
    fn principal_angle_range() {
        use std::f64::consts::PI;
        assert_eq!(principal_angle(PI), PI);
        assert!((principal_angle(-PI) - PI).abs() < 1e-15);
        assert!((principal_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((principal_angle(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn integer_extraction() {
        assert_eq!(to_integer(2.0000000001, 1e-6).unwrap().0, 2);
        assert!(to_integer(2.4, 1e-6).is_err());
        assert!(to_integer(f64::NAN, 1e-6).is_err());
    }
}

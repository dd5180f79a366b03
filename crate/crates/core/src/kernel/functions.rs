use std::f64::consts::PI;

use num_complex::Complex64;

use super::{
    eigenvalues, ensure_finite, ensure_square, real_eigenvalues, unitarity_residual, ComplexMatrix, RealMatrix,
};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// `Tr Log M` for a unitary `M`, using the principal logarithm.
///
/// Fails when an eigenvalue is within `tol.branch_cut` of the negative real
/// axis, which for Leray-index evaluations means the planes are (nearly)
/// non-transversal.
pub fn unitary_log_trace(m: &ComplexMatrix, tol: &Tolerances) -> Result<Complex64> {
    let n = ensure_square(m)?;
    let residual = unitarity_residual(m);
    if residual > tol.structural * (n as f64).sqrt().max(1.0) {
        return Err(Error::NotUnitary { residual });
    }
    let mut trace = Complex64::new(0.0, 0.0);
    for lambda in eigenvalues(m)? {
        let arg = lambda.arg();
        if arg.abs() > PI - tol.branch_cut {
            return Err(Error::EigenvalueOnBranchCut { arg });
        }
        trace += Complex64::new(lambda.norm().ln(), arg);
    }
    Ok(trace)
}

/// Matrix exponential (Padé scaling and squaring).
pub fn matrix_exp(m: &RealMatrix) -> RealMatrix {
    if m.is_empty() {
        return m.clone();
    }
    m.exp()
}

fn inverse(m: &RealMatrix) -> Result<RealMatrix> {
    m.clone().try_inverse().ok_or(Error::Singular)
}

/// Principal square root by the Denman–Beavers iteration.
fn sqrtm(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = RealMatrix::identity(n, n);
    for _ in 0..100 {
        let y_inv = inverse(&y)?;
        let z_inv = inverse(&z)?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta <= 4.0 * f64::EPSILON * y.norm() {
            return Ok(y);
        }
    }
    Err(Error::NoConvergence("matrix square root"))
}

/// Principal real logarithm of a real matrix with no eigenvalue on the
/// closed negative real axis.
///
/// Inverse scaling and squaring: take square roots until the matrix is close
/// to the identity, sum the Mercator series, then scale back.
pub fn real_matrix_log(m: &RealMatrix, tol: &Tolerances) -> Result<RealMatrix> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    let scale = m.norm();
    for lambda in real_eigenvalues(m)? {
        if lambda.norm() <= f64::EPSILON * scale {
            return Err(Error::Singular);
        }
        if lambda.arg().abs() > PI - tol.branch_cut {
            return Err(Error::EigenvalueOnBranchCut { arg: lambda.arg() });
        }
    }
    let id = RealMatrix::identity(n, n);
    let mut a = m.clone();
    let mut squarings = 0u32;
    while (&a - &id).norm() > 0.25 {
        if squarings > 64 {
            return Err(Error::NoConvergence("inverse scaling and squaring"));
        }
        a = sqrtm(&a)?;
        squarings += 1;
    }
    let e = &a - &id;
    let mut power = e.clone();
    let mut log = RealMatrix::zeros(n, n);
    for k in 1..=200 {
        let term = &power / k as f64;
        if k % 2 == 1 {
            log += &term;
        } else {
            log -= &term;
        }
        if term.norm() < 1e-18 {
            break;
        }
        power = &power * &e;
    }
    let result = log * 2f64.powi(squarings as i32);
    let back = matrix_exp(&result);
    if (&back - m).norm() > tol.log_roundtrip * scale {
        return Err(Error::NoConvergence("matrix logarithm round trip"));
    }
    Ok(result)
}

/// Polar decomposition `M = Q R`, `Q` orthogonal and `R = (MᵀM)^{1/2}` SPD.
pub fn polar_decompose(m: &RealMatrix, tol: &Tolerances) -> Result<(RealMatrix, RealMatrix)> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let svd = nalgebra::SVD::try_new(m.clone(), true, true, f64::EPSILON, 0)
        .ok_or(Error::NoConvergence("singular value decomposition"))?;
    let sigma_max = svd.singular_values.max();
    let sigma_min = svd.singular_values.min();
    if sigma_max == 0.0 || sigma_min <= tol.rank * sigma_max {
        return Err(Error::Singular);
    }
    let u = svd.u.as_ref().ok_or(Error::NoConvergence("svd u"))?;
    let v_t = svd.v_t.as_ref().ok_or(Error::NoConvergence("svd v"))?;
    let q = u * v_t;
    let sigma = RealMatrix::from_diagonal(&svd.singular_values);
    let r = v_t.transpose() * sigma * v_t;
    let r = (&r + r.transpose()) * 0.5;
    Ok((q, r))
}

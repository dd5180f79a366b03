//! Kashiwara signature, index of inertia and the Leray index.
//!
//! Functions taking planes accept anything implementing [`Plane`]: frames,
//! Souriau points or lifts (the lift angle is ignored where only the plane
//! matters).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernel::{self, symmetric_eigen, symplectic_j, unitary_log_trace, RealMatrix};
use crate::lagrangian::{find_common_transversal, intersection_dim, LagrangianLift, Plane};
use crate::tolerances::Tolerances;

/// Signature of the triple form together with its conditioning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignatureReport {
    pub tau: i64,
    /// Zero threshold actually used.
    pub epsilon: f64,
    /// Smallest eigenvalue magnitude counted as non-zero (∞ if none).
    pub margin: f64,
    /// Some eigenvalue fell in the guard band `(ε, 10ε)`.
    pub near_threshold: bool,
}

/// `τ`, `∂dim` and `Inert = (τ − ∂dim + n)/2` of a triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleIndexReport {
    pub n: usize,
    pub tau: i64,
    pub ddim: i64,
    pub inert: i64,
    pub signature: SignatureReport,
}

/// How a Leray index was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LerayRoute {
    /// Closed form for transversal planes.
    Transversal,
    /// Through an auxiliary transversal plane.
    Cocycle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LerayValue {
    pub value: i64,
    /// Largest distance from an integer among the real-valued evaluations.
    pub residual: f64,
    pub route: LerayRoute,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    let n = dims[0];
    if dims.iter().any(|&d| d != n) {
        return Err(Error::DimensionMismatch(format!("planes of dimensions {dims:?}")));
    }
    Ok(n)
}

/// Symmetric 3n×3n matrix of `σ(z,z') + σ(z',z'') + σ(z'',z)` in orthonormal
/// frame coordinates.
pub fn triple_form<A: Plane, B: Plane, C: Plane>(a: &A, b: &B, c: &C, tol: &Tolerances) -> Result<RealMatrix> {
    let n = check_dims(&[a.plane_dim(), b.plane_dim(), c.plane_dim()])?;
    let frames =
        [a.frame(tol)?.orthonormalize(tol)?, b.frame(tol)?.orthonormalize(tol)?, c.frame(tol)?.orthonormalize(tol)?];
    let j = symplectic_j(n);
    let mut q = RealMatrix::zeros(3 * n, 3 * n);
    // σ(Z_x ζ_x, Z_y ζ_y) = ζ_yᵀ (Z_yᵀ J Z_x) ζ_x for (x, y) = (a, b), (b, c), (c, a)
    for (x, y) in [(0, 1), (1, 2), (2, 0)] {
        let g = frames[y].matrix().transpose() * &j * frames[x].matrix();
        let half = g * 0.5;
        let mut block = q.view_mut((y * n, x * n), (n, n));
        block += &half;
        let mut block = q.view_mut((x * n, y * n), (n, n));
        block += half.transpose();
    }
    Ok(q)
}

pub fn signature_report<A: Plane, B: Plane, C: Plane>(
    a: &A,
    b: &B,
    c: &C,
    tol: &Tolerances,
) -> Result<SignatureReport> {
    let q = triple_form(a, b, c, tol)?;
    let eig = symmetric_eigen(&q, tol)?;
    let largest = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let epsilon = tol.signature * largest.max(1.0);
    let (mut pos, mut neg) = (0i64, 0i64);
    let mut margin = f64::INFINITY;
    let mut near_threshold = false;
    for &lambda in &eig.eigenvalues {
        let size = lambda.abs();
        if size > epsilon {
            if lambda > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
            margin = margin.min(size);
            if size < 10.0 * epsilon {
                near_threshold = true;
            }
        }
    }
    if near_threshold {
        log::warn!("signature eigenvalue {margin:e} is within 10x of the zero threshold {epsilon:e}");
    }
    Ok(SignatureReport { tau: pos - neg, epsilon, margin, near_threshold })
}

/// Kashiwara signature `τ(ℓ, ℓ', ℓ'')`.
pub fn signature<A: Plane, B: Plane, C: Plane>(a: &A, b: &B, c: &C, tol: &Tolerances) -> Result<i64> {
    Ok(signature_report(a, b, c, tol)?.tau)
}

fn dim_between<A: Plane, B: Plane>(a: &A, b: &B, tol: &Tolerances) -> Result<i64> {
    Ok(intersection_dim(&*a.souriau(tol)?, &*b.souriau(tol)?, tol)? as i64)
}

/// `∂dim(ℓ,ℓ',ℓ'') = dim ℓ∩ℓ' − dim ℓ∩ℓ'' + dim ℓ'∩ℓ''`.
pub fn ddim<A: Plane, B: Plane, C: Plane>(a: &A, b: &B, c: &C, tol: &Tolerances) -> Result<i64> {
    check_dims(&[a.plane_dim(), b.plane_dim(), c.plane_dim()])?;
    Ok(dim_between(a, b, tol)? - dim_between(a, c, tol)? + dim_between(b, c, tol)?)
}

pub fn inertia_index<A: Plane, B: Plane, C: Plane>(a: &A, b: &B, c: &C, tol: &Tolerances) -> Result<TripleIndexReport> {
    let sig = signature_report(a, b, c, tol)?;
    let d = ddim(a, b, c, tol)?;
    let n = a.plane_dim();
    let twice = sig.tau - d + n as i64;
    if twice.rem_euclid(2) != 0 {
        return Err(Error::NonIntegerInertia { tau: sig.tau, ddim: d, n });
    }
    Ok(TripleIndexReport { n, tau: sig.tau, ddim: d, inert: twice / 2, signature: sig })
}

pub fn inert<A: Plane, B: Plane, C: Plane>(a: &A, b: &B, c: &C, tol: &Tolerances) -> Result<i64> {
    Ok(inertia_index(a, b, c, tol)?.inert)
}

/// Real value of the transversal closed form, before rounding.
pub fn leray_transversal_value(a: &LagrangianLift, b: &LagrangianLift, tol: &Tolerances) -> Result<f64> {
    let n = check_dims(&[a.dim(), b.dim()])?;
    let (wa, wb) = (a.point(), b.point());
    let dim = intersection_dim(wa, wb, tol)?;
    if dim != 0 {
        return Err(Error::NotTransversal { dim });
    }
    // w'⁻¹ = conj(w') for a symmetric unitary w'
    let m = -(wa.matrix() * wb.matrix().map(|z| z.conj()));
    let trace = unitary_log_trace(&m, tol)?;
    Ok((a.theta() - b.theta() - trace.im) / (2.0 * PI) + n as f64 / 2.0)
}

/// Leray index of a transversal pair.
pub fn leray_transversal(a: &LagrangianLift, b: &LagrangianLift, tol: &Tolerances) -> Result<LerayValue> {
    let (value, residual) = kernel::to_integer(leray_transversal_value(a, b, tol)?, tol.integer)?;
    Ok(LerayValue { value, residual, route: LerayRoute::Transversal })
}

/// Leray index `m(ℓ_∞, ℓ'_∞)` of an arbitrary pair.
///
/// Non-transversal pairs go through `m(ℓ,ℓ'') − m(ℓ',ℓ'') + Inert(ℓ,ℓ',ℓ'')`
/// with ℓ'' drawn by [`find_common_transversal`] from `seed`. The integer does
/// not depend on the seed.
pub fn leray(a: &LagrangianLift, b: &LagrangianLift, seed: u64, tol: &Tolerances) -> Result<LerayValue> {
    check_dims(&[a.dim(), b.dim()])?;
    match leray_transversal(a, b, tol) {
        Ok(v) => return Ok(v),
        Err(Error::NotTransversal { .. } | Error::EigenvalueOnBranchCut { .. }) => {}
        Err(e) => return Err(e),
    }
    let c = find_common_transversal(a.point(), b.point(), seed, tol)?;
    let ac = leray_transversal(a, &c, tol)?;
    let bc = leray_transversal(b, &c, tol)?;
    let tri = inertia_index(a, b, &c, tol)?;
    Ok(LerayValue {
        value: ac.value - bc.value + tri.inert,
        residual: ac.residual.max(bc.residual),
        route: LerayRoute::Cocycle,
    })
}

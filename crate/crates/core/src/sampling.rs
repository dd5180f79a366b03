//! Seeded random generators for matrices, planes and lifts.
//!
//! Used by the transversal search, the `verify` job and the test suites.
//! Every generator is a pure function of the RNG state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::kernel::{embed_unitary, matrix_exp, symplectic_j, ComplexMatrix, RealMatrix};
use crate::lagrangian::{LagrangianFrame, LagrangianLift, SouriauPoint, SymplecticMatrix};
use crate::tolerances::Tolerances;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_real<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, scale: f64) -> RealMatrix {
    let a = random_real(rng, n, n);
    (&a + a.transpose()) * (0.5 * scale)
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Symmetric positive definite matrix `exp(scale · sym)`.
pub fn random_spd<R: Rng>(rng: &mut R, n: usize, scale: f64) -> RealMatrix {
    let s = random_symmetric(rng, n, scale / (n as f64).sqrt());
    matrix_exp(&s)
}

/// Haar-distributed unitary matrix (QR of a complex Gaussian with phase fix).
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// `exp(J H) · embed(u)` with `H` symmetric of size `scale` and `u` Haar unitary.
pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize, scale: f64) -> RealMatrix {
    let h = random_symmetric(rng, 2 * n, scale / (2.0 * n as f64).sqrt());
    let u = random_unitary(rng, n);
    matrix_exp(&(symplectic_j(n) * h)) * embed_unitary(&u)
}

pub fn random_symplectic_matrix<R: Rng>(rng: &mut R, n: usize, scale: f64) -> SymplecticMatrix {
    SymplecticMatrix::new(random_symplectic(rng, n, scale), &Tolerances::default())
        .expect("exp(JH)·embed(u) is symplectic")
}

/// Normal-form type of a quadratic Hamiltonian, mode by mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalForm {
    /// Every mode is `½ω(x² + p²)`.
    Elliptic,
    /// Every mode is `λxp`.
    Hyperbolic,
    /// Elliptic and hyperbolic modes alternate.
    Mixed,
}

/// A random normal form conjugated by a random symplectic matrix, with a
/// period for which `S_{2T}` keeps away from the eigenvalue −1.
pub fn random_quadratic_hamiltonian<R: Rng>(rng: &mut R, n: usize, form: NormalForm) -> (RealMatrix, f64) {
    use std::f64::consts::PI;
    let period = rng.random_range(0.5..2.0);
    let mut h = RealMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let elliptic = match form {
            NormalForm::Elliptic => true,
            NormalForm::Hyperbolic => false,
            NormalForm::Mixed => k % 2 == 0,
        };
        if elliptic {
            let omega = loop {
                let omega: f64 = rng.random_range(0.3..2.5);
                if ((2.0 * omega * period).rem_euclid(2.0 * PI) - PI).abs() > 0.3 {
                    break omega;
                }
            };
            h[(k, k)] = omega;
            h[(n + k, n + k)] = omega;
        } else {
            let lambda = rng.random_range(0.1..0.8);
            h[(k, n + k)] = lambda;
            h[(n + k, k)] = lambda;
        }
    }
    let s = random_symplectic(rng, n, 0.5);
    let h = s.transpose() * h * &s;
    ((&h + h.transpose()) * 0.5, period)
}

/// A loop `t ↦ W diag(e^{2πikt}, 1, …) W* · e^{i sin(2πt) H}` in U(n), `t ∈ [0, 1]`,
/// embedded in Sp(n). Its determinant winds `k` times.
pub fn random_unitary_loop<R: Rng>(rng: &mut R, n: usize, k: i64, intervals: usize) -> crate::paths::SymplecticPath {
    use std::f64::consts::PI;
    let tol = Tolerances::default();
    let w = random_unitary(rng, n);
    let h = random_hermitian(rng, n) * Complex64::new(0.5, 0.0);
    let spectral = crate::kernel::hermitian_eigen(&h, &tol).expect("Hermitian");
    let v = spectral.eigenvectors;
    crate::paths::SymplecticPath::uniform(
        1.0,
        intervals,
        |t| {
            let mut d = ComplexMatrix::identity(n, n);
            d[(0, 0)] = Complex64::from_polar(1.0, 2.0 * PI * k as f64 * t);
            let wiggle = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                spectral.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, (2.0 * PI * t).sin() * l)),
            ));
            let u = &w * d * w.adjoint() * &v * wiggle * v.adjoint();
            embed_unitary(&u)
        },
        &tol,
    )
    .expect("unitary loops are symplectic")
}

/// A random Lagrangian plane, with a random (non-orthonormal) basis.
pub fn random_frame<R: Rng>(rng: &mut R, n: usize) -> LagrangianFrame {
    let u = random_unitary(rng, n);
    let frame = LagrangianFrame::momentum(n).transformed_by_unitary(&u);
    let basis = random_real(rng, n, n) + RealMatrix::identity(n, n) * 2.0;
    LagrangianFrame::new(frame.matrix() * basis, &Tolerances::default()).unwrap_or(frame)
}

/// A random plane meeting `base` in a subspace of dimension exactly `shared`.
pub fn random_frame_meeting<R: Rng>(rng: &mut R, base: &LagrangianFrame, shared: usize) -> LagrangianFrame {
    let n = base.dim();
    let tol = Tolerances::default();
    // w = u uᵀ; w' = u D uᵀ with exactly `shared` unit entries in D shares that many directions
    let half = base.unitary_representative(&tol).expect("valid frame");
    let phases: Vec<Complex64> = (0..n)
        .map(|k| {
            if k < shared {
                Complex64::new(1.0, 0.0)
            } else {
                let phi = rng.random_range(0.3..(2.0 * std::f64::consts::PI - 0.3));
                Complex64::from_polar(1.0, phi)
            }
        })
        .collect();
    let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    let w2 = &half * d * half.transpose();
    SouriauPoint::new(w2, &tol).and_then(|p| p.to_frame(&tol)).expect("symmetric unitary by construction")
}

/// A random lift of a random plane on sheet `principal + 2π·k`, |k| ≤ `sheets`.
pub fn random_lift<R: Rng>(rng: &mut R, n: usize, sheets: i64) -> LagrangianLift {
    let frame = random_frame(rng, n);
    lift_on_random_sheet(rng, &frame, sheets)
}

pub fn lift_on_random_sheet<R: Rng>(rng: &mut R, frame: &LagrangianFrame, sheets: i64) -> LagrangianLift {
    let tol = Tolerances::default();
    let point = frame.to_souriau(&tol).expect("valid frame");
    let k = rng.random_range(-sheets..=sheets);
    LagrangianLift::principal(point).on_sheet(k)
}

//! Lagrangian planes of R²ⁿ = Rⁿ_x × Rⁿ_p and the group actions on them.
//!
//! A plane is carried either as a [`LagrangianFrame`] (2n×n basis, x-block on
//! top, p-block below) or as its Souriau point `w = u uᵀ`, a symmetric unitary
//! matrix, where `u ∈ U(n)` is any unitary with `u ℓ_p = ℓ`. The unitary group
//! sits inside Sp(n) through `A + iB ↦ (A −B; B A)`, so an orthonormal frame
//! `(X; P)` corresponds to `u = P − iX`.
//!
//! Planes carry no orientation.

use std::borrow::Cow;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::{
    self, embed_unitary, rank_with_scale, symmetric_eigen, symplectic_j, unitarity_residual, ComplexMatrix, RealMatrix,
    I,
};
use crate::sampling;
use crate::tolerances::Tolerances;

/// Attempts made by [`find_common_transversal`].
pub const TRANSVERSAL_ATTEMPTS: usize = 64;
/// Smallest singular value of `w'' − w` accepted for a constructed transversal.
pub const TRANSVERSAL_MARGIN: f64 = 1e-2;

/// A 2n×n matrix whose columns span a Lagrangian plane.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    z: RealMatrix,
}

/// Symmetric unitary matrix identified with a Lagrangian plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SouriauPoint {
    w: ComplexMatrix,
}

/// A point `(w, θ)` of the universal cover, `det w = e^{iθ}`.
///
/// `theta` is not reduced modulo 2π: it selects the sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianLift {
    point: SouriauPoint,
    theta: f64,
}

/// A 2n×2n matrix with `SᵀJS = J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(RealMatrix);

impl LagrangianFrame {
    /// Validates rank and isotropy (`ZᵀJZ = 0`).
    pub fn new(z: RealMatrix, tol: &Tolerances) -> Result<Self> {
        let n = z.ncols();
        if n == 0 || z.nrows() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "a Lagrangian frame is 2n×n, got {}x{}",
                z.nrows(),
                z.ncols()
            )));
        }
        kernel::ensure_finite(&z)?;
        let rank = kernel::rank_with_tolerance(&z, tol.rank)?;
        if rank < n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        let scale = z.norm_squared().max(f64::MIN_POSITIVE);
        let residual = (z.transpose() * symplectic_j(n) * &z).norm() / scale;
        if residual > tol.structural {
            return Err(Error::NotLagrangian { residual });
        }
        Ok(Self { z })
    }

    fn trusted(z: RealMatrix) -> Self {
        Self { z }
    }

    /// ℓ_p = 0 × Rⁿ_p.
    pub fn momentum(n: usize) -> Self {
        let mut z = RealMatrix::zeros(2 * n, n);
        for k in 0..n {
            z[(n + k, k)] = 1.0;
        }
        Self::trusted(z)
    }

    /// ℓ_x = Rⁿ_x × 0.
    pub fn position(n: usize) -> Self {
        let mut z = RealMatrix::zeros(2 * n, n);
        for k in 0..n {
            z[(k, k)] = 1.0;
        }
        Self::trusted(z)
    }

    /// The line `x cos θ + p sin θ = 0` in the phase plane (n = 1).
    pub fn line(theta: f64) -> Self {
        Self::trusted(RealMatrix::from_column_slice(2, 1, &[-theta.sin(), theta.cos()]))
    }

    pub fn dim(&self) -> usize {
        self.z.ncols()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.z
    }

    pub fn x_block(&self) -> RealMatrix {
        let n = self.dim();
        self.z.rows(0, n).into_owned()
    }

    pub fn p_block(&self) -> RealMatrix {
        let n = self.dim();
        self.z.rows(n, n).into_owned()
    }

    /// Euclidean-orthonormal basis of the same plane.
    pub fn orthonormalize(&self, tol: &Tolerances) -> Result<Self> {
        let n = self.dim();
        let svd = nalgebra::SVD::try_new(self.z.clone(), true, false, f64::EPSILON, 0)
            .ok_or(Error::NoConvergence("frame orthonormalization"))?;
        let largest = svd.singular_values.max();
        let rank = svd.singular_values.iter().filter(|&&s| s > tol.rank * largest).count();
        if largest == 0.0 || rank < n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        let u = svd.u.ok_or(Error::NoConvergence("frame orthonormalization"))?;
        Ok(Self::trusted(u.columns(0, n).into_owned()))
    }

    /// A unitary `u = P − iX` with `u ℓ_p = ℓ`, from an orthonormal basis.
    pub fn unitary_representative(&self, tol: &Tolerances) -> Result<ComplexMatrix> {
        let f = self.orthonormalize(tol)?;
        let (x, p) = (f.x_block(), f.p_block());
        Ok(ComplexMatrix::from_fn(self.dim(), self.dim(), |r, c| Complex64::new(p[(r, c)], -x[(r, c)])))
    }

    /// Souriau map `ℓ = uℓ_p ↦ u uᵀ`.
    pub fn to_souriau(&self, tol: &Tolerances) -> Result<SouriauPoint> {
        let u = self.unitary_representative(tol)?;
        let w = &u * u.transpose();
        Ok(SouriauPoint { w: (&w + w.transpose()) * Complex64::new(0.5, 0.0) })
    }

    /// Frame `S·Z` of the image plane.
    pub fn transformed(&self, s: &SymplecticMatrix) -> Result<Self> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "symplectic matrix of dimension {} acting on a plane of dimension {}",
                s.dim(),
                self.dim()
            )));
        }
        Ok(Self::trusted(s.matrix() * &self.z))
    }

    pub fn transformed_by_unitary(&self, u: &ComplexMatrix) -> Self {
        Self::trusted(embed_unitary(u) * &self.z)
    }

    /// Whether both frames span the same plane.
    pub fn same_plane(&self, other: &Self, tol: &Tolerances) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        let a = self.to_souriau(tol)?;
        let b = other.to_souriau(tol)?;
        Ok(intersection_dim(&a, &b, tol)? == self.dim())
    }
}

impl SouriauPoint {
    /// Validates symmetry (`w = wᵀ`) and unitarity.
    pub fn new(w: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let n = kernel::ensure_square(&w)?;
        kernel::ensure_finite(&w)?;
        let sym = (&w - w.transpose()).norm();
        if sym > tol.structural * (n as f64).sqrt() {
            return Err(Error::NotSymmetric { residual: sym });
        }
        let residual = unitarity_residual(&w);
        if residual > tol.structural * (n as f64).sqrt() {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { w })
    }

    pub fn identity(n: usize) -> Self {
        Self { w: ComplexMatrix::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn det(&self) -> Complex64 {
        kernel::det(&self.w)
    }

    /// Orthonormal frame of the plane `{ζ = x + ip : ζ + w ζ̄ = 0}`.
    ///
    /// In real coordinates this is the −1 eigenspace of the symmetric
    /// involution `(A B; B −A)`, `w = A + iB`.
    pub fn to_frame(&self, tol: &Tolerances) -> Result<LagrangianFrame> {
        let n = self.dim();
        let mut k = RealMatrix::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                let z = self.w[(r, c)];
                k[(r, c)] = z.re;
                k[(r, n + c)] = z.im;
                k[(n + r, c)] = z.im;
                k[(n + r, n + c)] = -z.re;
            }
        }
        let eig = symmetric_eigen(&k, &Tolerances { structural: tol.structural.max(1e-8), ..*tol })?;
        // ascending: the first n eigenvalues are ≈ −1
        if eig.eigenvalues[n - 1] > 0.0 || eig.eigenvalues[n] < 0.0 {
            return Err(Error::NotUnitary { residual: eig.eigenvalues[n - 1] + 1.0 });
        }
        Ok(LagrangianFrame::trusted(eig.eigenvectors.columns(0, n).into_owned()))
    }

    /// `u·w·uᵀ`.
    pub fn act_unitary(&self, u: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        act_unitary_on_souriau(u, self, tol)
    }
}

impl LagrangianLift {
    /// Validates `det w = e^{iθ}`.
    pub fn new(point: SouriauPoint, theta: f64, tol: &Tolerances) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidInput("lift angle must be finite".into()));
        }
        let residual = (point.det() - Complex64::from_polar(1.0, theta)).norm();
        if residual > tol.structural.max(1e-12) * 1e3 {
            return Err(Error::InconsistentLift { residual });
        }
        Ok(Self { point, theta })
    }

    pub(crate) fn trusted(point: SouriauPoint, theta: f64) -> Self {
        Self { point, theta }
    }

    /// The lift on the principal sheet, `θ = arg det w ∈ (−π, π]`.
    pub fn principal(point: SouriauPoint) -> Self {
        let theta = point.det().arg();
        Self { point, theta }
    }

    /// ℓ_{p,∞} ≡ (I, 0).
    pub fn momentum(n: usize) -> Self {
        Self { point: SouriauPoint::identity(n), theta: 0.0 }
    }

    /// ℓ_{x,∞} ≡ (−I, nπ).
    pub fn position(n: usize) -> Self {
        let w = -ComplexMatrix::identity(n, n);
        Self { point: SouriauPoint { w }, theta: n as f64 * PI }
    }

    /// The lift `(e^{iθ}, θ)` of an n = 1 line.
    pub fn scalar(theta: f64) -> Self {
        let w = ComplexMatrix::from_element(1, 1, Complex64::from_polar(1.0, theta));
        Self { point: SouriauPoint { w }, theta }
    }

    /// Same plane, angle shifted by `2π·k`.
    pub fn on_sheet(&self, k: i64) -> Self {
        Self { point: self.point.clone(), theta: self.theta + 2.0 * PI * k as f64 }
    }

    pub fn point(&self) -> &SouriauPoint {
        &self.point
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.point.dim()
    }
}

impl SymplecticMatrix {
    pub fn new(s: RealMatrix, tol: &Tolerances) -> Result<Self> {
        let n2 = kernel::ensure_square(&s)?;
        if n2 % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("symplectic matrices are 2n×2n, got {n2}x{n2}")));
        }
        kernel::ensure_finite(&s)?;
        let residual = kernel::symplectic_residual(&s) / s.norm_squared().max(1.0) * (n2 as f64);
        if residual > tol.structural {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(Self(s))
    }

    pub(crate) fn trusted(s: RealMatrix) -> Self {
        Self(s)
    }

    pub fn identity(n: usize) -> Self {
        Self(RealMatrix::identity(2 * n, 2 * n))
    }

    pub fn j(n: usize) -> Self {
        Self(symplectic_j(n))
    }

    pub fn from_unitary(u: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let residual = unitarity_residual(u);
        if residual > tol.structural * (u.nrows() as f64).sqrt() {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self(embed_unitary(u)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.0
    }

    /// `S⁻¹ = −J Sᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = symplectic_j(self.dim());
        Self(-(&j * self.0.transpose() * &j))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn pow(&self, r: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..r {
            out = out.compose(self);
        }
        out
    }

    /// Image of ℓ_p.
    pub fn image_of_momentum(&self) -> LagrangianFrame {
        LagrangianFrame::trusted(&self.0 * LagrangianFrame::momentum(self.dim()).z)
    }

    pub fn residual(&self) -> f64 {
        kernel::symplectic_residual(&self.0)
    }
}

/// Anything that names a Lagrangian plane.
pub trait Plane {
    fn plane_dim(&self) -> usize;
    fn frame(&self, tol: &Tolerances) -> Result<Cow<'_, LagrangianFrame>>;
    fn souriau(&self, tol: &Tolerances) -> Result<Cow<'_, SouriauPoint>>;
}

impl Plane for LagrangianFrame {
    fn plane_dim(&self) -> usize {
        self.dim()
    }
    fn frame(&self, _: &Tolerances) -> Result<Cow<'_, LagrangianFrame>> {
        Ok(Cow::Borrowed(self))
    }
    fn souriau(&self, tol: &Tolerances) -> Result<Cow<'_, SouriauPoint>> {
        self.to_souriau(tol).map(Cow::Owned)
    }
}

impl Plane for SouriauPoint {
    fn plane_dim(&self) -> usize {
        self.dim()
    }
    fn frame(&self, tol: &Tolerances) -> Result<Cow<'_, LagrangianFrame>> {
        self.to_frame(tol).map(Cow::Owned)
    }
    fn souriau(&self, _: &Tolerances) -> Result<Cow<'_, SouriauPoint>> {
        Ok(Cow::Borrowed(self))
    }
}

impl Plane for LagrangianLift {
    fn plane_dim(&self) -> usize {
        self.dim()
    }
    fn frame(&self, tol: &Tolerances) -> Result<Cow<'_, LagrangianFrame>> {
        self.point.to_frame(tol).map(Cow::Owned)
    }
    fn souriau(&self, _: &Tolerances) -> Result<Cow<'_, SouriauPoint>> {
        Ok(Cow::Borrowed(&self.point))
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("planes of dimension {a} and {b}")));
    }
    Ok(())
}

/// `dim ℓ∩ℓ′ = n − rank(w − w′)`.
pub fn intersection_dim(a: &SouriauPoint, b: &SouriauPoint, tol: &Tolerances) -> Result<usize> {
    same_dim(a.dim(), b.dim())?;
    // w − w′ has spectral norm ≤ 2; unitary scale 1 is the reference
    let rank = rank_with_scale(&(&a.w - &b.w), tol.rank, 1.0)?;
    Ok(a.dim() - rank)
}

pub fn is_transversal(a: &SouriauPoint, b: &SouriauPoint, tol: &Tolerances) -> Result<bool> {
    Ok(intersection_dim(a, b, tol)? == 0)
}

pub fn act_symplectic(s: &SymplecticMatrix, f: &LagrangianFrame) -> Result<LagrangianFrame> {
    f.transformed(s)
}

/// `u·ℓ ≡ u w uᵀ`.
pub fn act_unitary_on_souriau(u: &ComplexMatrix, w: &SouriauPoint, tol: &Tolerances) -> Result<SouriauPoint> {
    same_dim(u.nrows(), w.dim())?;
    let residual = unitarity_residual(u);
    if residual > tol.structural * (u.nrows() as f64).sqrt() {
        return Err(Error::NotUnitary { residual });
    }
    let m = u * &w.w * u.transpose();
    Ok(SouriauPoint { w: (&m + m.transpose()) * Complex64::new(0.5, 0.0) })
}

fn smallest_singular_value(m: &ComplexMatrix) -> Result<f64> {
    Ok(kernel::singular_values(m)?.last().copied().unwrap_or(0.0))
}

/// A lifted plane transversal to both `a` and `b`, on the principal sheet.
///
/// Candidates `v vᵀ` come from a seeded sequence of Haar unitaries; the first
/// one clearing [`TRANSVERSAL_MARGIN`] against both planes wins.
pub fn find_common_transversal(
    a: &SouriauPoint,
    b: &SouriauPoint,
    seed: u64,
    tol: &Tolerances,
) -> Result<LagrangianLift> {
    same_dim(a.dim(), b.dim())?;
    let n = a.dim();
    let mut rng = sampling::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x5851_F42D));
    for _ in 0..TRANSVERSAL_ATTEMPTS {
        let v = sampling::random_unitary(&mut rng, n);
        // random overall phase keeps the n = 1 search from repeating
        let phase = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
        let v = v * phase;
        let candidate = SouriauPoint { w: &v * v.transpose() };
        let margin =
            smallest_singular_value(&(&candidate.w - &a.w))?.min(smallest_singular_value(&(&candidate.w - &b.w))?);
        if margin >= TRANSVERSAL_MARGIN.max(tol.rank) {
            let sym = (&candidate.w + candidate.w.transpose()) * Complex64::new(0.5, 0.0);
            return Ok(LagrangianLift::principal(SouriauPoint { w: sym }));
        }
    }
    Err(Error::SearchExhausted { attempts: TRANSVERSAL_ATTEMPTS })
}

/// `e^{iφ}` as a 1×1 unitary.
pub fn phase(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_element(1, 1, (I * phi).exp())
}

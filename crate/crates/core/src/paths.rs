//! Sampled symplectic paths, their lifted Lagrangian images and Maslov indices.
//!
//! A [`SymplecticPath`] is a list of samples `S_{t_0} = I, S_{t_1}, …` chosen
//! by the caller. The path is never interpolated: lifting follows
//! `arg det w(t)` sample to sample and refuses steps of π/2 or more, which is
//! the only way the homotopy class can be read off reliably. Callers that can
//! evaluate their path at any time use [`with_refinement`] to retry on a finer
//! grid.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::indices::{inertia_index, leray, LerayRoute, LerayValue};
use crate::kernel::{self, matrix_exp, orthogonality_residual, principal_angle, unitary_part, RealMatrix};
use crate::lagrangian::{intersection_dim, LagrangianFrame, LagrangianLift, SouriauPoint, SymplecticMatrix};
use crate::tolerances::Tolerances;

/// Tolerances and the seed used to pick auxiliary transversal planes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Settings {
    pub tol: Tolerances,
    pub seed: u64,
}

impl Settings {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// An integer identity between two independently computed sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self { name: name.into(), lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn into_result(self) -> Result<Self> {
        if self.holds() {
            Ok(self)
        } else {
            Err(Error::IdentityViolated { name: self.name, lhs: self.lhs, rhs: self.rhs })
        }
    }
}

/// `t ↦ S_t`, sampled at strictly increasing times from `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPath {
    times: Vec<f64>,
    samples: Vec<SymplecticMatrix>,
}

fn time_matches(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn uniform_times(t_end: f64, intervals: usize) -> Result<Vec<f64>> {
    if intervals == 0 || !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidPath(format!("need t_end > 0 and at least one interval, got {t_end}, {intervals}")));
    }
    Ok((0..=intervals).map(|k| t_end * k as f64 / intervals as f64).collect())
}

impl SymplecticPath {
    pub fn new(times: Vec<f64>, samples: Vec<SymplecticMatrix>, tol: &Tolerances) -> Result<Self> {
        if times.is_empty() || times.len() != samples.len() {
            return Err(Error::InvalidPath(format!("{} times for {} samples", times.len(), samples.len())));
        }
        if times[0].abs() > 1e-12 {
            return Err(Error::InvalidPath(format!("path must start at t = 0, starts at {}", times[0])));
        }
        if let Some(w) =
            times.windows(2).find(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater) || !w[1].is_finite())
        {
            return Err(Error::InvalidPath(format!("times must increase strictly ({} then {})", w[0], w[1])));
        }
        let n = samples[0].dim();
        if samples.iter().any(|s| s.dim() != n) {
            return Err(Error::DimensionMismatch("path samples of different sizes".into()));
        }
        let start = kernel::relative_residual(samples[0].matrix(), SymplecticMatrix::identity(n).matrix());
        if start > tol.structural {
            return Err(Error::InvalidPath(format!("path must start at the identity (residual {start:e})")));
        }
        Ok(Self { times, samples })
    }

    /// Samples `f` at the given times; every value is checked to be symplectic.
    pub fn from_fn(times: Vec<f64>, mut f: impl FnMut(f64) -> RealMatrix, tol: &Tolerances) -> Result<Self> {
        let samples = times.iter().map(|&t| SymplecticMatrix::new(f(t), tol)).collect::<Result<Vec<_>>>()?;
        Self::new(times, samples, tol)
    }

    /// `f` on `intervals` equal steps of `[0, t_end]`.
    pub fn uniform(t_end: f64, intervals: usize, f: impl FnMut(f64) -> RealMatrix, tol: &Tolerances) -> Result<Self> {
        Self::from_fn(uniform_times(t_end, intervals)?, f, tol)
    }

    /// `t ↦ exp(tX)` for a Hamiltonian matrix `X` (`XᵀJ + JX = 0`).
    pub fn from_generator(x: &RealMatrix, t_end: f64, intervals: usize, tol: &Tolerances) -> Result<Self> {
        kernel::ensure_square(x)?;
        if !x.nrows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!("generator must be 2n×2n, got {}", x.nrows())));
        }
        let j = kernel::symplectic_j(x.nrows() / 2);
        let residual = (x.transpose() * &j + &j * x).norm() / x.norm().max(1.0);
        if residual > tol.structural {
            return Err(Error::NotSymplectic { residual });
        }
        Self::uniform(t_end, intervals, |t| matrix_exp(&(x * t)), tol)
    }

    /// `R(t) = (cos t −sin t; sin t cos t)` on each of the n planes, for `t ∈ [0, α]`.
    ///
    /// A negative `alpha` runs the rotation clockwise.
    pub fn rotation(n: usize, alpha: f64, intervals: usize, tol: &Tolerances) -> Result<Self> {
        if alpha == 0.0 {
            return Ok(Self::constant_identity(n));
        }
        let sign = alpha.signum();
        Self::uniform(alpha.abs(), intervals, |t| rotation_matrix(n, sign * t), tol)
    }

    /// A rotation path with enough samples for any angle (steps of at most π/8).
    pub fn rotation_auto(n: usize, alpha: f64, tol: &Tolerances) -> Result<Self> {
        Self::rotation(n, alpha, ((alpha.abs() / (PI / 8.0)).ceil() as usize).max(4), tol)
    }

    pub fn constant_identity(n: usize) -> Self {
        Self { times: vec![0.0], samples: vec![SymplecticMatrix::identity(n)] }
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[SymplecticMatrix] {
        &self.samples
    }

    pub fn end(&self) -> &SymplecticMatrix {
        self.samples.last().expect("non-empty path")
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("non-empty path")
    }

    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| time_matches(s, t))
    }

    pub fn sample_at(&self, t: f64) -> Option<&SymplecticMatrix> {
        self.index_of(t).map(|i| &self.samples[i])
    }

    /// The path restricted to `[0, t]`; `t` must be a sample time.
    pub fn truncated(&self, t: f64) -> Result<Self> {
        let i = self.index_of(t).ok_or_else(|| Error::InvalidPath(format!("{t} is not a sample time of the path")))?;
        Ok(Self { times: self.times[..=i].to_vec(), samples: self.samples[..=i].to_vec() })
    }

    /// `t ↦ S_t S'_t`; both paths must share their sample times.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a.compose(b)).collect();
        Ok(Self { times: self.times.clone(), samples })
    }

    /// `t ↦ S_t` on `[0, T]` followed by `t ↦ S_{t−T} S_T` on `[T, T + T']`.
    pub fn concatenate(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("paths of different sizes".into()));
        }
        let (t0, s0) = (self.t_end(), self.end().clone());
        let mut out = self.clone();
        for (t, s) in other.times.iter().zip(&other.samples).skip(1) {
            out.times.push(t0 + t);
            out.samples.push(s.compose(&s0));
        }
        Ok(out)
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("paths of different sizes".into()));
        }
        if self.len() != other.len() || self.times.iter().zip(&other.times).any(|(&a, &b)| !time_matches(a, b)) {
            return Err(Error::InvalidPath("paths are sampled at different times".into()));
        }
        Ok(())
    }

    /// Pointwise `S₀⁻¹ S_t S₀`.
    pub fn conjugated_by(&self, s0: &SymplecticMatrix) -> Result<Self> {
        if s0.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "conjugating a path of dimension {} by a matrix of dimension {}",
                self.dim(),
                s0.dim()
            )));
        }
        let inv = s0.inverse();
        let samples = self.samples.iter().map(|s| inv.compose(s).compose(s0)).collect();
        Ok(Self { times: self.times.clone(), samples })
    }
}

/// Block rotation `embed(e^{it} I)`.
pub fn rotation_matrix(n: usize, t: f64) -> RealMatrix {
    let (s, c) = t.sin_cos();
    let mut r = RealMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        r[(k, k)] = c;
        r[(n + k, n + k)] = c;
        r[(k, n + k)] = -s;
        r[(n + k, k)] = s;
    }
    r
}

/// `t ↦ (w(t), θ(t))` with θ continuous and `e^{iθ} = det w`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedLagrangianPath {
    times: Vec<f64>,
    points: Vec<SouriauPoint>,
    theta: Vec<f64>,
}

impl LiftedLagrangianPath {
    /// Lifts a sampled Lagrangian path starting from the angle `theta0`.
    ///
    /// `theta0` must be an argument of `det w(t_0)`.
    pub fn from_points(times: Vec<f64>, points: Vec<SouriauPoint>, theta0: f64, tol: &Tolerances) -> Result<Self> {
        if points.is_empty() || times.len() != points.len() {
            return Err(Error::InvalidPath(format!("{} times for {} planes", times.len(), points.len())));
        }
        if let Some(w) = times.windows(2).find(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater)) {
            return Err(Error::InvalidPath(format!("times must increase strictly ({} then {})", w[0], w[1])));
        }
        let n = points[0].dim();
        if points.iter().any(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch("Lagrangian path with planes of different dimension".into()));
        }
        LagrangianLift::new(points[0].clone(), theta0, tol)?;
        let mut theta = Vec::with_capacity(points.len());
        theta.push(theta0);
        for i in 1..points.len() {
            let ratio = points[i].det() / points[i - 1].det();
            let increment = principal_angle(ratio.arg());
            if increment.abs() >= PI / 2.0 {
                return Err(Error::StepTooCoarse { t0: times[i - 1], t1: times[i], increment });
            }
            theta.push(theta[i - 1] + increment);
        }
        Ok(Self { times, points, theta })
    }

    /// Lifts a sampled loop of frames, starting on the principal sheet.
    pub fn from_frames(times: Vec<f64>, frames: &[LagrangianFrame], tol: &Tolerances) -> Result<Self> {
        let points = frames.iter().map(|f| f.to_souriau(tol)).collect::<Result<Vec<_>>>()?;
        let theta0 = points.first().map(|p| p.det().arg()).unwrap_or(0.0);
        Self::from_points(times, points, theta0, tol)
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[SouriauPoint] {
        &self.points
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn lift_at(&self, i: usize) -> LagrangianLift {
        LagrangianLift::trusted(self.points[i].clone(), self.theta[i])
    }

    pub fn start(&self) -> LagrangianLift {
        self.lift_at(0)
    }

    pub fn end(&self) -> LagrangianLift {
        self.lift_at(self.len() - 1)
    }
}

/// The lifted image `t ↦ S_t ℓ` of `seed_plane`, θ(0) on the principal sheet.
pub fn lift_lagrangian_path(
    p: &SymplecticPath,
    seed_plane: &LagrangianFrame,
    tol: &Tolerances,
) -> Result<LiftedLagrangianPath> {
    let start = LagrangianLift::principal(seed_plane.to_souriau(tol)?);
    transport_lift(p, &start, tol)
}

/// `t ↦ S_{t,∞} ℓ_∞` for an arbitrary starting lift.
pub fn transport_lift(p: &SymplecticPath, start: &LagrangianLift, tol: &Tolerances) -> Result<LiftedLagrangianPath> {
    if start.dim() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "lifting a plane of dimension {} along a path of dimension {}",
            start.dim(),
            p.dim()
        )));
    }
    let frame = start.point().to_frame(tol)?;
    let points = p
        .samples()
        .iter()
        .enumerate()
        .map(|(i, s)| if i == 0 { Ok(start.point().clone()) } else { frame.transformed(s)?.to_souriau(tol) })
        .collect::<Result<Vec<_>>>()?;
    LiftedLagrangianPath::from_points(p.times().to_vec(), points, start.theta(), tol)
}

/// An index together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaslovResult {
    pub index: i64,
    /// Distance of the underlying real value from `index`.
    pub residual: f64,
    /// Number of grid doublings needed before the path lifted.
    pub refinement_depth: usize,
    /// Whether the end plane is transversal to the reference plane.
    pub end_transversal: bool,
    pub route: LerayRoute,
}

impl MaslovResult {
    fn from_leray(v: LerayValue, end_transversal: bool) -> Self {
        Self { index: v.value, residual: v.residual, refinement_depth: 0, end_transversal, route: v.route }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.refinement_depth = depth;
        self
    }
}

fn leray_result(a: &LagrangianLift, b: &LagrangianLift, settings: &Settings) -> Result<MaslovResult> {
    let transversal = intersection_dim(a.point(), b.point(), &settings.tol)? == 0;
    let v = leray(a, b, settings.seed, &settings.tol)?;
    Ok(MaslovResult::from_leray(v, transversal))
}

/// `μ(S_∞) = m(S_∞ ℓ_{p,∞}, ℓ_{p,∞})`.
pub fn maslov_index(p: &SymplecticPath, settings: &Settings) -> Result<MaslovResult> {
    let n = p.dim();
    let lifted = transport_lift(p, &LagrangianLift::momentum(n), &settings.tol)?;
    leray_result(&lifted.end(), &LagrangianLift::momentum(n), settings)
}

/// `μ_ℓ(S_∞) = m(S_∞ ℓ_∞, ℓ_∞)`, ℓ_∞ on the principal sheet.
pub fn maslov_index_rel(p: &SymplecticPath, l: &LagrangianFrame, settings: &Settings) -> Result<MaslovResult> {
    let lifted = lift_lagrangian_path(p, l, &settings.tol)?;
    leray_result(&lifted.end(), &lifted.start(), settings)
}

/// `μ(S_∞S'_∞) = μ(S_∞) + μ(S'_∞) − Inert(SS'ℓ_p, Sℓ_p, ℓ_p)`.
pub fn maslov_product_check(p: &SymplecticPath, q: &SymplecticPath, settings: &Settings) -> Result<IdentityCheck> {
    let tol = &settings.tol;
    let product = p.pointwise_product(q)?;
    let lhs = maslov_index(&product, settings)?.index;
    let (s, s2) = (p.end(), q.end());
    let lp = LagrangianFrame::momentum(p.dim());
    let correction = inertia_index(&s.compose(s2).image_of_momentum(), &s.image_of_momentum(), &lp, tol)?.inert;
    let rhs = maslov_index(p, settings)?.index + maslov_index(q, settings)?.index - correction;
    Ok(IdentityCheck::new("product formula", lhs, rhs))
}

/// Winding data of a unitary loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopWinding {
    /// Winding number of `det u_t`.
    pub k: i64,
    /// `2k`.
    pub mu: i64,
    pub residual: f64,
    /// The same index computed as a Maslov index of the path.
    pub cross_check: MaslovResult,
}

/// Unwrapped `arg det u_t` along a path of orthogonal symplectic matrices.
pub fn unitary_det_angles(p: &SymplecticPath, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = p.dim();
    let mut angles = Vec::with_capacity(p.len());
    let mut prev: Option<num_complex::Complex64> = None;
    for (i, (&t, s)) in p.times().iter().zip(p.samples()).enumerate() {
        let residual = orthogonality_residual(s.matrix());
        if residual > tol.structural * (2.0 * n as f64).sqrt().max(1.0) * 10.0 {
            return Err(Error::NotUnitaryPath { time: t, residual });
        }
        let det = kernel::det(&unitary_part(s.matrix()));
        match prev {
            None => angles.push(det.arg()),
            Some(previous) => {
                let increment = principal_angle((det / previous).arg());
                if increment.abs() >= PI / 2.0 {
                    return Err(Error::StepTooCoarse { t0: p.times()[i - 1], t1: t, increment });
                }
                angles.push(angles[i - 1] + increment);
            }
        }
        prev = Some(det);
    }
    Ok(angles)
}

/// `μ(U_∞) = 2k` for a closed loop in U(n), `k` the winding of `det u_t`.
pub fn loop_winding_index(p: &SymplecticPath, settings: &Settings) -> Result<LoopWinding> {
    let tol = &settings.tol;
    let n = p.dim();
    let closure = kernel::relative_residual(p.end().matrix(), SymplecticMatrix::identity(n).matrix());
    if closure > tol.relation {
        return Err(Error::NotClosed { residual: closure });
    }
    let angles = unitary_det_angles(p, tol)?;
    let turns = (angles[angles.len() - 1] - angles[0]) / (2.0 * PI);
    let (k, residual) = kernel::to_integer(turns, tol.integer)?;
    let cross_check = maslov_index(p, settings)?;
    IdentityCheck::new("unitary loop index", cross_check.index, 2 * k).into_result()?;
    Ok(LoopWinding { k, mu: 2 * k, residual, cross_check })
}

/// `t ↦ S₀⁻¹ S_t S₀`.
pub fn conjugate_path(s0: &SymplecticMatrix, p: &SymplecticPath) -> Result<SymplecticPath> {
    p.conjugated_by(s0)
}

/// `μ_ℓ(S_∞) − μ_ℓ'(S_∞) = Inert(Sℓ,ℓ,ℓ') − Inert(Sℓ,Sℓ',ℓ')`.
pub fn rel_index_difference(
    p: &SymplecticPath,
    l1: &LagrangianFrame,
    l2: &LagrangianFrame,
    settings: &Settings,
) -> Result<IdentityCheck> {
    let tol = &settings.tol;
    let lhs = maslov_index_rel(p, l1, settings)?.index - maslov_index_rel(p, l2, settings)?.index;
    let s = p.end();
    let (sl1, sl2) = (l1.transformed(s)?, l2.transformed(s)?);
    let rhs = inertia_index(&sl1, l1, l2, tol)?.inert - inertia_index(&sl1, &sl2, l2, tol)?.inert;
    Ok(IdentityCheck::new("reference plane change", lhs, rhs))
}

fn check_closed(lam: &LiftedLagrangianPath, tol: &Tolerances) -> Result<()> {
    let (a, b) = (&lam.points()[0], &lam.points()[lam.len() - 1]);
    if intersection_dim(a, b, tol)? != lam.dim() {
        return Err(Error::NotClosed { residual: (a.matrix() - b.matrix()).norm() });
    }
    Ok(())
}

/// `Mas(λ) = m(ℓ_∞(T), ℓ_∞(0))` for a closed lifted Lagrangian loop.
pub fn arnold_maslov_loop_index(lam: &LiftedLagrangianPath, settings: &Settings) -> Result<MaslovResult> {
    check_closed(lam, &settings.tol)?;
    leray_result(&lam.end(), &lam.start(), settings)
}

/// `m(ℓ_∞(T), ℓ_∞) − m(ℓ_∞(0), ℓ_∞)` for an arbitrary reference lift.
pub fn arnold_maslov_loop_index_with_reference(
    lam: &LiftedLagrangianPath,
    reference: &LagrangianLift,
    settings: &Settings,
) -> Result<MaslovResult> {
    check_closed(lam, &settings.tol)?;
    let end = leray_result(&lam.end(), reference, settings)?;
    let start = leray_result(&lam.start(), reference, settings)?;
    Ok(MaslovResult {
        index: end.index - start.index,
        residual: end.residual.max(start.residual),
        refinement_depth: 0,
        end_transversal: end.end_transversal && start.end_transversal,
        route: if end.route == LerayRoute::Transversal && start.route == LerayRoute::Transversal {
            LerayRoute::Transversal
        } else {
            LerayRoute::Cocycle
        },
    })
}

/// Runs `attempt(intervals)` with `intervals, 2·intervals, …` until it stops
/// failing with [`Error::StepTooCoarse`]; returns the value and the number of
/// doublings.
pub fn with_refinement<T>(
    intervals: usize,
    max_doublings: usize,
    mut attempt: impl FnMut(usize) -> Result<T>,
) -> Result<(T, usize)> {
    let mut depth = 0;
    loop {
        match attempt(intervals << depth) {
            Err(Error::StepTooCoarse { .. }) if depth < max_doublings => {
                log::info!("lift step too coarse at {} intervals, refining", intervals << depth);
                depth += 1;
            }
            other => return other.map(|v| (v, depth)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::inert;
    use crate::kernel::{embed_unitary, symplectic_j, ComplexMatrix};
    use crate::sampling::{random_frame, random_symmetric, random_symplectic_matrix, rng};
    use nalgebra::DVector;
    use num_complex::Complex64;
    use rand::Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn settings() -> Settings {
        Settings::default()
    }

    /// `exp(t J H)` on a grid fine enough for the lift.
    fn quadratic_flow(h: &RealMatrix, t_end: f64) -> SymplecticPath {
        let n = h.nrows() / 2;
        let x = symplectic_j(n) * h;
        let intervals = ((x.norm() * t_end * 8.0).ceil() as usize).max(16);
        SymplecticPath::from_generator(&x, t_end, intervals, &tol()).unwrap()
    }

    fn random_flow<R: Rng>(rng: &mut R, n: usize, t_end: f64) -> SymplecticPath {
        quadratic_flow(&random_symmetric(rng, 2 * n, 1.0), t_end)
    }

    /// Oracle for the counter-clockwise rotation path: the end lift is
    /// `(e^{2iα}, 2α)` against `(1, 0)`.
    fn rotation_oracle(alpha: f64) -> i64 {
        let turns = alpha / PI;
        if (turns - turns.round()).abs() < 1e-12 {
            turns.round() as i64
        } else {
            turns.floor() as i64 + 1
        }
    }

    #[test]
    fn path_validation() {
        let t = tol();
        let id = SymplecticMatrix::identity(1);
        assert!(SymplecticPath::new(vec![0.0, 1.0], vec![id.clone()], &t).is_err());
        assert!(SymplecticPath::new(vec![0.0, 0.0], vec![id.clone(), id.clone()], &t).is_err());
        assert!(SymplecticPath::new(vec![0.5], vec![id.clone()], &t).is_err());
        let j = SymplecticMatrix::j(1);
        assert!(SymplecticPath::new(vec![0.0], vec![j], &t).is_err());
        assert!(SymplecticPath::uniform(1.0, 4, |_| RealMatrix::identity(2, 2) * 2.0, &t).is_err());
        let p = SymplecticPath::rotation(1, 1.0, 10, &t).unwrap();
        assert_eq!(p.len(), 11);
        assert!(p.truncated(0.5).is_ok());
        assert!(p.truncated(0.55).is_err());
    }

    #[test]
    fn lifting_examples() {
        let t = tol();
        let constant = SymplecticPath::uniform(1.0, 5, |_| RealMatrix::identity(2, 2), &t).unwrap();
        let lifted = lift_lagrangian_path(&constant, &LagrangianFrame::momentum(1), &t).unwrap();
        assert!(lifted.theta().iter().all(|&x| x.abs() < 1e-14));

        let quarter = SymplecticPath::rotation(1, PI / 2.0, 16, &t).unwrap();
        let lifted = lift_lagrangian_path(&quarter, &LagrangianFrame::momentum(1), &t).unwrap();
        assert!((lifted.theta()[16] - lifted.theta()[0] - PI).abs() < 1e-12);

        let full = SymplecticPath::rotation(1, 2.0 * PI, 64, &t).unwrap();
        let lifted = lift_lagrangian_path(&full, &LagrangianFrame::momentum(1), &t).unwrap();
        assert!((lifted.theta()[64] - 4.0 * PI).abs() < 1e-12);
        for (i, w) in lifted.points().iter().enumerate() {
            assert!((w.det() - Complex64::from_polar(1.0, lifted.theta()[i])).norm() < 1e-12);
        }
    }

    #[test]
    fn coarse_steps_are_refused() {
        let t = tol();
        let coarse = SymplecticPath::rotation(1, 2.0 * PI, 4, &t).unwrap();
        let err = lift_lagrangian_path(&coarse, &LagrangianFrame::momentum(1), &t).unwrap_err();
        assert!(matches!(err, Error::StepTooCoarse { t0, .. } if t0 == 0.0));
        let ((), depth) = with_refinement(4, 5, |k| {
            let p = SymplecticPath::rotation(1, 2.0 * PI, k, &t)?;
            lift_lagrangian_path(&p, &LagrangianFrame::momentum(1), &t).map(|_| ())
        })
        .unwrap();
        assert_eq!(depth, 2);
    }

    #[test]
    fn rotation_indices() {
        for alpha in [PI / 4.0, PI / 2.0, PI, 3.0 * PI / 2.0, 2.0 * PI, 3.0 * PI, 4.0 * PI, -PI / 3.0, -2.0 * PI] {
            let p = SymplecticPath::rotation_auto(1, alpha, &tol()).unwrap();
            let got = maslov_index(&p, &settings()).unwrap();
            assert_eq!(got.index, rotation_oracle(alpha), "α={alpha}");
            assert!(got.residual < 1e-9);
        }
        assert_eq!(maslov_index(&SymplecticPath::constant_identity(3), &settings()).unwrap().index, 0);
    }

    #[test]
    fn hyperbolic_path_has_index_zero() {
        let p = SymplecticPath::uniform(
            2.0,
            20,
            |t| RealMatrix::from_diagonal(&DVector::from_vec(vec![(0.7 * t).exp(), (-0.7 * t).exp()])),
            &tol(),
        )
        .unwrap();
        let r = maslov_index(&p, &settings()).unwrap();
        assert_eq!(r.index, 0);
        assert!(!r.end_transversal);
        assert_eq!(r.route, LerayRoute::Cocycle);
    }

    #[test]
    fn relative_index_examples() {
        let p = SymplecticPath::rotation(1, PI / 2.0, 16, &tol()).unwrap();
        let mu = maslov_index(&p, &settings()).unwrap().index;
        assert_eq!(maslov_index_rel(&p, &LagrangianFrame::momentum(1), &settings()).unwrap().index, mu);
        // ℓ_x lifts to (−1, π) and ends at (1, 2π)
        assert_eq!(maslov_index_rel(&p, &LagrangianFrame::position(1), &settings()).unwrap().index, 1);
        let c = SymplecticPath::constant_identity(2);
        let l = random_frame(&mut rng(1), 2);
        assert_eq!(maslov_index_rel(&c, &l, &settings()).unwrap().index, 0);
    }

    #[test]
    fn product_formula() {
        let c = SymplecticPath::constant_identity(2);
        let check = maslov_product_check(&c, &c, &settings()).unwrap();
        assert_eq!((check.lhs, check.rhs), (0, 0));

        for (a, b) in [(0.7, 1.9), (2.5, 2.5), (4.0, -1.1), (PI / 2.0, PI)] {
            let p = SymplecticPath::uniform(1.0, 64, |t| rotation_matrix(1, a * t), &tol()).unwrap();
            let q = SymplecticPath::uniform(1.0, 64, |t| rotation_matrix(1, b * t), &tol()).unwrap();
            let check = maslov_product_check(&p, &q, &settings()).unwrap();
            assert!(check.holds(), "{check:?}");
            // both sides against the rotation oracle and the sector rule
            assert_eq!(check.lhs, rotation_oracle(a + b));
            let sector =
                inert(&LagrangianFrame::line(a + b), &LagrangianFrame::line(a), &LagrangianFrame::line(0.0), &tol())
                    .unwrap();
            assert_eq!(check.rhs, rotation_oracle(a) + rotation_oracle(b) - sector);
        }

        let mut rng = rng(2);
        for _ in 0..10 {
            let n = rng.random_range(1..=2);
            let h1 = random_symmetric(&mut rng, 2 * n, 1.0);
            let h2 = random_symmetric(&mut rng, 2 * n, 1.0);
            let x1 = symplectic_j(n) * h1;
            let x2 = symplectic_j(n) * h2;
            let p = SymplecticPath::from_generator(&x1, 2.0, 200, &tol()).unwrap();
            let q = SymplecticPath::from_generator(&x2, 2.0, 200, &tol()).unwrap();
            assert!(maslov_product_check(&p, &q, &settings()).unwrap().holds());
        }
    }

    #[test]
    fn unitary_loops() {
        let c = SymplecticPath::constant_identity(2);
        let w = loop_winding_index(&c, &settings()).unwrap();
        assert_eq!((w.k, w.mu), (0, 0));

        let double = SymplecticPath::rotation(1, 4.0 * PI, 64, &tol()).unwrap();
        let w = loop_winding_index(&double, &settings()).unwrap();
        assert_eq!((w.k, w.mu), (2, 4));

        let block = SymplecticPath::uniform(
            4.0 * PI,
            64,
            |t| {
                embed_unitary(&ComplexMatrix::from_diagonal(&DVector::from_vec(vec![
                    (crate::kernel::I * t).exp(),
                    Complex64::new(1.0, 0.0),
                ])))
            },
            &tol(),
        )
        .unwrap();
        assert_eq!(loop_winding_index(&block, &settings()).unwrap().k, 2);

        let open = SymplecticPath::rotation(1, PI, 16, &tol()).unwrap();
        assert!(matches!(loop_winding_index(&open, &settings()), Err(Error::NotClosed { .. })));
        let hyperbolic = SymplecticPath::uniform(
            1.0,
            4,
            |t| RealMatrix::from_diagonal(&DVector::from_vec(vec![(t * (1.0 - t)).exp(), (-t * (1.0 - t)).exp()])),
            &tol(),
        )
        .unwrap();
        assert!(matches!(loop_winding_index(&hyperbolic, &settings()), Err(Error::NotUnitaryPath { .. })));
    }

    #[test]
    fn conjugation() {
        let p = SymplecticPath::rotation(1, 1.2, 16, &tol()).unwrap();
        assert_eq!(conjugate_path(&SymplecticMatrix::identity(1), &p).unwrap(), p);
        let lp = LagrangianFrame::momentum(1);
        let j = SymplecticMatrix::j(1);
        let conj = conjugate_path(&j, &p).unwrap();
        assert_eq!(
            maslov_index_rel(&conj, &lp, &settings()).unwrap().index,
            maslov_index_rel(&p, &LagrangianFrame::position(1), &settings()).unwrap().index
        );

        let mut rng = rng(3);
        for _ in 0..15 {
            let n = rng.random_range(1..=2);
            let p = random_flow(&mut rng, n, 2.0);
            let s0 = random_symplectic_matrix(&mut rng, n, 0.5);
            let l = random_frame(&mut rng, n);
            let lhs = maslov_index_rel(&conjugate_path(&s0, &p).unwrap(), &l, &settings()).unwrap().index;
            let rhs = maslov_index_rel(&p, &l.transformed(&s0).unwrap(), &settings()).unwrap().index;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reference_plane_change() {
        let p = SymplecticPath::rotation(1, 2.3, 32, &tol()).unwrap();
        let lp = LagrangianFrame::momentum(1);
        let check = rel_index_difference(&p, &lp, &lp, &settings()).unwrap();
        assert_eq!((check.lhs, check.rhs), (0, 0));
        assert!(rel_index_difference(&p, &lp, &LagrangianFrame::position(1), &settings()).unwrap().holds());
        let mut rng = rng(4);
        for _ in 0..10 {
            let p = random_flow(&mut rng, 2, 1.5);
            let (a, b) = (random_frame(&mut rng, 2), random_frame(&mut rng, 2));
            assert!(rel_index_difference(&p, &a, &b, &settings()).unwrap().holds());
        }
    }

    #[test]
    fn leray_is_invariant_under_a_common_path() {
        let mut rng = rng(5);
        for _ in 0..5 {
            let n = rng.random_range(1..=2);
            let p = random_flow(&mut rng, n, 1.5);
            let a = crate::sampling::random_lift(&mut rng, n, 1);
            let b = crate::sampling::random_lift(&mut rng, n, 1);
            let la = transport_lift(&p, &a, &tol()).unwrap();
            let lb = transport_lift(&p, &b, &tol()).unwrap();
            let m0 = leray(&a, &b, 0, &tol()).unwrap().value;
            for i in 0..p.len() {
                assert_eq!(leray(&la.lift_at(i), &lb.lift_at(i), 0, &tol()).unwrap().value, m0);
            }
        }
    }

    #[test]
    fn arnold_loop_examples() {
        let t = tol();
        let times: Vec<f64> = (0..=32).map(|k| PI * k as f64 / 32.0).collect();
        let frames: Vec<_> = times.iter().map(|&s| LagrangianFrame::line(s)).collect();
        let lam = LiftedLagrangianPath::from_frames(times.clone(), &frames, &t).unwrap();
        let mas = arnold_maslov_loop_index(&lam, &settings()).unwrap();
        let winding = (lam.theta()[32] - lam.theta()[0]) / (2.0 * PI);
        assert_eq!(mas.index, 1);
        assert!((winding - 1.0).abs() < 1e-12);

        let constant =
            LiftedLagrangianPath::from_frames(vec![0.0, 1.0], &[frames[0].clone(), frames[0].clone()], &t).unwrap();
        assert_eq!(arnold_maslov_loop_index(&constant, &settings()).unwrap().index, 0);

        let mut rng = rng(6);
        for _ in 0..10 {
            let r = crate::sampling::random_lift(&mut rng, 1, 3);
            assert_eq!(arnold_maslov_loop_index_with_reference(&lam, &r, &settings()).unwrap().index, 1);
        }
        let open = LiftedLagrangianPath::from_frames(times[..10].to_vec(), &frames[..10], &t).unwrap();
        assert!(matches!(arnold_maslov_loop_index(&open, &settings()), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn refinement_is_stable() {
        for alpha in [0.9, 3.0 * PI / 2.0, 2.0 * PI] {
            let coarse = SymplecticPath::rotation(1, alpha, 32, &tol()).unwrap();
            let fine = SymplecticPath::rotation(1, alpha, 64, &tol()).unwrap();
            assert_eq!(
                maslov_index(&coarse, &settings()).unwrap().index,
                maslov_index(&fine, &settings()).unwrap().index
            );
        }
    }
}

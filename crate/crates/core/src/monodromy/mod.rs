//! Periodic quadratic flows: monodromy matrices, the splitting
//! `S_t = P_t e^{tX}` and the index identities it supports.
//!
//! [`analyze`] is the one-call entry point: it integrates the variational
//! equation over two periods, splits it and evaluates every index.

mod hamiltonian;
mod integrate;

pub use hamiltonian::{
    Builtin, ConstantQuadratic, HamiltonianSpec, HessianSample, Interpolation, PeriodicQuadratic, Profile, Schedule,
    BUILTINS,
};
pub use integrate::{
    flow_generator, integrate_on_grid, integrate_variational, resymplectify, symplectic_drift, time_grid, Integrated,
    MIN_STEPS_PER_PERIOD,
};

use crate::error::{Error, Result};
use crate::indices::inertia_index;
use crate::kernel::{self, matrix_exp, polar_decompose, real_matrix_log, symplectic_j, RealMatrix};
use crate::lagrangian::{LagrangianFrame, SymplecticMatrix};
use crate::paths::{
    arnold_maslov_loop_index, lift_lagrangian_path, maslov_index, maslov_index_rel, unitary_det_angles,
    with_refinement, IdentityCheck, MaslovResult, Settings, SymplecticPath,
};
use crate::tolerances::Tolerances;

/// Grid doublings tried when a lift step is too coarse.
pub const MAX_DOUBLINGS: usize = 5;

fn sample(path: &SymplecticPath, t: f64) -> Result<&SymplecticMatrix> {
    path.sample_at(t)
        .ok_or_else(|| Error::InvalidPath(format!("time {t} is not sampled (path ends at {})", path.t_end())))
}

fn relative_gap(a: &RealMatrix, b: &RealMatrix) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// `S_T`, after checking `S_{t+T} = S_t S_T` on every sampled pair.
pub fn monodromy_matrix(path: &SymplecticPath, period: f64, tol: &Tolerances) -> Result<SymplecticMatrix> {
    let s_t = sample(path, period)?.clone();
    let times = path.times();
    let mut j = 0;
    for (i, &t) in times.iter().enumerate() {
        let target = t + period;
        while j < times.len() && times[j] < target - 1e-9 * target.max(1.0) {
            j += 1;
        }
        if j >= times.len() {
            break;
        }
        if (times[j] - target).abs() > 1e-9 * target.max(1.0) {
            continue;
        }
        let residual = relative_gap(path.samples()[j].matrix(), &(path.samples()[i].matrix() * s_t.matrix()));
        if residual > tol.relation {
            return Err(Error::MonodromyRelationViolated { time: t, residual });
        }
    }
    Ok(s_t)
}

/// The data of `S_t = P_t e^{tX}`, `P_t = U_t e^{Y_t}` over `[0, 2T]`.
#[derive(Debug, Clone)]
pub struct MonodromyDecomposition {
    pub period: f64,
    /// `t ↦ S_t` on `[0, 2T]`.
    pub path: SymplecticPath,
    pub s_t: SymplecticMatrix,
    pub s_2t: SymplecticMatrix,
    /// Real generator in sp(n) with `e^{2TX} = S_{2T}`.
    pub x: RealMatrix,
    /// `‖X − X_raw‖ / max(‖X_raw‖, 1)` for the projection onto sp(n).
    pub projection_residual: f64,
    /// `t ↦ P_t = S_t e^{−tX}`, a loop at I.
    pub p: SymplecticPath,
    /// Orthogonal factor of `P_t`.
    pub u: SymplecticPath,
    /// Positive factor `e^{Y_t}` of `P_t`.
    pub yexp: Vec<RealMatrix>,
    /// Winding number of `det u_t` over `[0, 2T]`.
    pub k: i64,
    pub k_residual: f64,
}

fn loop_closure(m: &RealMatrix) -> f64 {
    (m - RealMatrix::identity(m.nrows(), m.ncols())).norm()
}

/// Splits a path covering `[0, 2T]`.
pub fn split_monodromy(path: &SymplecticPath, period: f64, tol: &Tolerances) -> Result<MonodromyDecomposition> {
    let two = 2.0 * period;
    let s_t = monodromy_matrix(path, period, tol)?;
    let s_2t = sample(path, two)?.clone();
    let square = relative_gap(s_2t.matrix(), &(s_t.matrix() * s_t.matrix()));
    if square > tol.relation {
        return Err(Error::MonodromyRelationViolated { time: period, residual: square });
    }
    let log = match real_matrix_log(s_2t.matrix(), tol) {
        Ok(l) => l,
        Err(Error::EigenvalueOnBranchCut { .. } | Error::Singular) => return Err(Error::NonGenericMonodromy),
        Err(e) => return Err(e),
    };
    let x_raw = log / two;
    let j = symplectic_j(s_t.dim());
    let x = (&x_raw + &j * x_raw.transpose() * &j) * 0.5;
    let projection_residual = (&x - &x_raw).norm() / x_raw.norm().max(1.0);
    if projection_residual > tol.projection {
        return Err(Error::ProjectionResidualTooLarge { residual: projection_residual });
    }

    let n = s_t.dim();
    let scale = s_2t.matrix().norm().max(1.0);
    let (mut p, mut u, mut yexp) = (Vec::new(), Vec::new(), Vec::new());
    for (&t, s) in path.times().iter().zip(path.samples()) {
        let pt = s.matrix() * matrix_exp(&(&x * -t));
        let (q, r) = polar_decompose(&pt, tol)?;
        p.push(SymplecticMatrix::new(pt, &tol.with_structural(tol.structural.max(tol.log_roundtrip * scale)))?);
        u.push(SymplecticMatrix::new(q, tol)?);
        yexp.push(r);
    }
    let end = path.index_of(two).expect("sampled above");
    let (p_end, u_end) = (p[end].matrix().clone(), u[end].matrix().clone());
    let closure = loop_closure(&p_end).max(loop_closure(&u_end)) / (2.0 * n as f64).sqrt();
    if closure > tol.log_roundtrip * scale * 10.0 {
        return Err(Error::MonodromyRelationViolated { time: two, residual: closure });
    }
    let times = path.times()[..=end].to_vec();
    p.truncate(end + 1);
    u.truncate(end + 1);
    yexp.truncate(end + 1);
    let p = SymplecticPath::new(times.clone(), p, tol)?;
    let u = SymplecticPath::new(times, u, tol)?;
    let angles = unitary_det_angles(&u, tol)?;
    let turns = (angles[angles.len() - 1] - angles[0]) / (2.0 * std::f64::consts::PI);
    let (k, k_residual) = kernel::to_integer(turns, tol.integer)?;
    Ok(MonodromyDecomposition {
        period,
        path: path.truncated(two)?,
        s_t,
        s_2t,
        x,
        projection_residual,
        p,
        u,
        yexp,
        k,
        k_residual,
    })
}

/// The indices entering the splitting identities, each computed on its own path.
#[derive(Debug, Clone)]
pub struct Theorem1Report {
    /// μ of `t ↦ S_t`, `0 ≤ t ≤ T`.
    pub mu_s_t: MaslovResult,
    /// μ of `t ↦ S_t`, `0 ≤ t ≤ 2T`.
    pub mu_s_2t: MaslovResult,
    /// μ of the loop `t ↦ P_t`.
    pub mu_p_2t: MaslovResult,
    /// μ of the loop `t ↦ U_t`.
    pub mu_u_2t: MaslovResult,
    /// μ of `t ↦ e^{tX}`, `0 ≤ t ≤ 2T`.
    pub mu_exp_2tx: MaslovResult,
    /// μ of `t ↦ e^{tX}`, `0 ≤ t ≤ T`.
    pub mu_exp_tx: MaslovResult,
    pub k: i64,
    /// `Inert(S_{2T}ℓ_p, S_Tℓ_p, ℓ_p)`.
    pub inert_s: i64,
    /// `Inert(e^{2TX}ℓ_p, e^{TX}ℓ_p, ℓ_p)`.
    pub inert_x: i64,
    /// Whether `S_T = e^{TX}`, so the short form of the generator identity applies.
    pub generator_is_root: bool,
    pub generator_root_residual: f64,
    pub checks: Vec<IdentityCheck>,
}

impl Theorem1Report {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }
}

fn inert_of(s2: &SymplecticMatrix, s1: &SymplecticMatrix, tol: &Tolerances) -> Result<i64> {
    let lp = LagrangianFrame::momentum(s1.dim());
    Ok(inertia_index(&s2.image_of_momentum(), &s1.image_of_momentum(), &lp, tol)?.inert)
}

/// μ of `t ↦ e^{tX}` on `[0, T]` and `[0, 2T]`, refining the grid as needed.
fn generator_indices(
    x: &RealMatrix,
    period: f64,
    intervals: usize,
    settings: &Settings,
) -> Result<(MaslovResult, MaslovResult)> {
    let base = intervals.div_ceil(2) * 2;
    let ((short, long), depth) = with_refinement(base, MAX_DOUBLINGS, |k| {
        let path = SymplecticPath::from_generator(x, 2.0 * period, k, &settings.tol)?;
        let long = maslov_index(&path, settings)?;
        let short = maslov_index(&path.truncated(period)?, settings)?;
        Ok((short, long))
    })?;
    Ok((short.with_depth(depth), long.with_depth(depth)))
}

/// Evaluates the splitting identities on a decomposition.
pub fn theorem1_report(d: &MonodromyDecomposition, settings: &Settings) -> Result<Theorem1Report> {
    let tol = &settings.tol;
    let period = d.period;
    let mu_s_t = maslov_index(&d.path.truncated(period)?, settings)?;
    let mu_s_2t = maslov_index(&d.path, settings)?;
    let mu_p_2t = maslov_index(&d.p, settings)?;
    let mu_u_2t = maslov_index(&d.u, settings)?;
    let (mu_exp_tx, mu_exp_2tx) = generator_indices(&d.x, period, d.path.len() - 1, settings)?;

    let e_t = SymplecticMatrix::new(matrix_exp(&(&d.x * period)), &tol.with_structural(1e-6))?;
    let e_2t = e_t.compose(&e_t);
    let inert_s = inert_of(&d.s_2t, &d.s_t, tol)?;
    let inert_x = inert_of(&e_2t, &e_t, tol)?;
    let generator_root_residual = relative_gap(d.s_t.matrix(), e_t.matrix());
    let generator_is_root = generator_root_residual <= 1e-6;
    let k = d.k;

    let mut checks = vec![
        IdentityCheck::new("index over two periods", mu_s_2t.index, 2 * mu_s_t.index - inert_s),
        IdentityCheck::new(
            "index from the doubled period",
            2 * mu_s_t.index,
            mu_p_2t.index + mu_exp_2tx.index + inert_s,
        ),
        IdentityCheck::new("periodic factor equals its unitary part", mu_p_2t.index, mu_u_2t.index),
        IdentityCheck::new("unitary loop equals twice its winding", mu_u_2t.index, 2 * k),
    ];
    if generator_is_root {
        checks.push(IdentityCheck::new("index from the generator", mu_s_t.index, mu_exp_tx.index + k));
    } else {
        checks.push(IdentityCheck::new(
            "index from the generator (general form)",
            2 * mu_s_t.index,
            2 * mu_exp_tx.index + 2 * k + inert_s - inert_x,
        ));
    }
    Ok(Theorem1Report {
        mu_s_t,
        mu_s_2t,
        mu_p_2t,
        mu_u_2t,
        mu_exp_2tx,
        mu_exp_tx,
        k,
        inert_s,
        inert_x,
        generator_is_root,
        generator_root_residual,
        checks,
    })
}

/// μ over `r` periods, directly and through the product formula.
pub fn repetition_index(path: &SymplecticPath, period: f64, r: u32, settings: &Settings) -> Result<IdentityCheck> {
    if r == 0 {
        return Err(Error::InvalidInput("repetition count must be at least 1".into()));
    }
    let direct = maslov_index(&path.truncated(r as f64 * period)?, settings)?.index;
    let s_t = monodromy_matrix(path, period, &settings.tol)?;
    let mu_1 = maslov_index(&path.truncated(period)?, settings)?.index;
    let mut recursive = mu_1;
    let mut power = s_t.clone();
    for _ in 1..r {
        let next = power.compose(&s_t);
        recursive = recursive + mu_1 - inert_of(&next, &power, &settings.tol)?;
        power = next;
    }
    Ok(IdentityCheck::new(format!("repetition r={r}"), direct, recursive))
}

/// Everything [`analyze`] computes for one Hamiltonian.
#[derive(Debug, Clone)]
pub struct MonodromyAnalysis {
    pub period: f64,
    pub steps_per_period: usize,
    pub refinement_depth: usize,
    pub corrections: usize,
    /// Symplectic drift of the monodromy matrix after re-projection.
    pub drift: f64,
    pub decomposition: MonodromyDecomposition,
    pub theorem1: Theorem1Report,
    /// `(r, check)` for the requested repetitions.
    pub repetitions: Vec<IdentityCheck>,
}

/// Integrates `spec` over `max(2, max repetition)` periods, splits and reports.
pub fn analyze(
    spec: &HamiltonianSpec,
    steps_per_period: usize,
    repetitions: &[u32],
    settings: &Settings,
) -> Result<MonodromyAnalysis> {
    let schedule = spec.schedule(&settings.tol)?;
    analyze_schedule(&schedule, steps_per_period, repetitions, settings)
}

pub fn analyze_schedule(
    schedule: &Schedule,
    steps_per_period: usize,
    repetitions: &[u32],
    settings: &Settings,
) -> Result<MonodromyAnalysis> {
    let tol = &settings.tol;
    let period = schedule.period();
    let periods = repetitions.iter().copied().max().unwrap_or(2).max(2);
    let ((integrated, decomposition, theorem1, reps), depth) =
        with_refinement(steps_per_period, MAX_DOUBLINGS, |steps| {
            let integrated = integrate_variational(schedule, periods as f64 * period, steps, tol)?;
            let decomposition = split_monodromy(&integrated.path, period, tol)?;
            let theorem1 = theorem1_report(&decomposition, settings)?;
            let reps = repetitions
                .iter()
                .map(|&r| repetition_index(&integrated.path, period, r, settings))
                .collect::<Result<Vec<_>>>()?;
            Ok((integrated, decomposition, theorem1, reps))
        })?;
    Ok(MonodromyAnalysis {
        period,
        steps_per_period: steps_per_period << depth,
        refinement_depth: depth,
        corrections: integrated.corrections,
        drift: integrated.final_drift,
        decomposition,
        theorem1,
        repetitions: reps,
    })
}

/// `μ_{ℓ(0)}(S_{T,∞})` for a plane `ℓ(0)` at the origin of the orbit, and the
/// Arnol'd–Maslov index of `t ↦ S_t ℓ(0)` when that loop closes.
#[derive(Debug, Clone)]
pub struct TangentLoop {
    pub xi: MaslovResult,
    pub loop_index: Option<MaslovResult>,
}

pub fn tangent_loop(
    path: &SymplecticPath,
    period: f64,
    plane: &LagrangianFrame,
    settings: &Settings,
) -> Result<TangentLoop> {
    let one = path.truncated(period)?;
    let xi = maslov_index_rel(&one, plane, settings)?;
    let lifted = lift_lagrangian_path(&one, plane, &settings.tol)?;
    let loop_index = match arnold_maslov_loop_index(&lifted, settings) {
        Ok(m) => Some(m),
        Err(Error::NotClosed { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TangentLoop { xi, loop_index })
}

/// Comparison of the orbit data at `z` and at `z'`, `z = f_{t'}(z')`.
#[derive(Debug, Clone)]
pub struct ChangeOriginReport {
    pub t_prime: f64,
    pub steps_per_period: usize,
    /// `S' = S_{t'}(z')`.
    pub s_prime: SymplecticMatrix,
    /// `‖S_T(z') − S'⁻¹ S_T(z) S'‖`, relative.
    pub conjugacy_residual: f64,
    /// Largest relative gap in `S_{t+t'}(z') = S_t(z) S_{t'}(z')` over sampled `t`.
    pub cocycle_residual: f64,
    pub mu_z: MaslovResult,
    pub mu_z_prime: MaslovResult,
    /// `μ_{S'ℓ_p}(S_{T,∞}(z))`.
    pub mu_rel: MaslovResult,
    /// `Inert(S_Tℓ_p, ℓ_p, S'ℓ_p)` and `Inert(S_Tℓ_p, S_T S'ℓ_p, S'ℓ_p)`.
    pub inert_terms: (i64, i64),
    pub k_z: i64,
    pub k_z_prime: i64,
    pub checks: Vec<IdentityCheck>,
}

impl ChangeOriginReport {
    pub fn residuals_ok(&self, tol: &Tolerances) -> bool {
        self.conjugacy_residual <= tol.relation && self.cocycle_residual <= tol.relation
    }

    pub fn all_hold(&self, tol: &Tolerances) -> bool {
        self.residuals_ok(tol) && self.checks.iter().all(IdentityCheck::holds)
    }
}

/// Moves the origin of the orbit back by `t' ∈ (0, T)` and compares indices.
pub fn change_origin_report(
    spec: &HamiltonianSpec,
    t_prime: f64,
    steps_per_period: usize,
    settings: &Settings,
) -> Result<ChangeOriginReport> {
    let schedule = spec.schedule(&settings.tol)?;
    change_origin_schedule(&schedule, t_prime, steps_per_period, settings)
}

pub fn change_origin_schedule(
    schedule: &Schedule,
    t_prime: f64,
    steps_per_period: usize,
    settings: &Settings,
) -> Result<ChangeOriginReport> {
    let period = schedule.period();
    if !(t_prime > 0.0 && t_prime < period) {
        return Err(Error::InvalidInput(format!("t_prime must lie in (0, {period}), got {t_prime}")));
    }
    let (report, depth) = with_refinement(steps_per_period, MAX_DOUBLINGS, |steps| {
        change_origin_once(schedule, t_prime, steps, settings)
    })?;
    Ok(ChangeOriginReport { steps_per_period: steps_per_period << depth, ..report })
}

fn change_origin_once(
    schedule: &Schedule,
    t_prime: f64,
    steps: usize,
    settings: &Settings,
) -> Result<ChangeOriginReport> {
    let tol = &settings.tol;
    let period = schedule.period();
    let two = 2.0 * period;
    let shifted = schedule.shifted(t_prime);
    // matching grids: the z' grid from t' on is the z grid moved by t'
    let z = integrate_on_grid(schedule, two, steps, &[-t_prime], tol)?.path;
    let zp = integrate_on_grid(&shifted, two, steps, &[t_prime], tol)?.path;

    let s_prime = sample(&zp, t_prime)?.clone();
    let st_z = sample(&z, period)?.clone();
    let st_zp = sample(&zp, period)?.clone();
    let conjugated = s_prime.inverse().compose(&st_z).compose(&s_prime);
    let conjugacy_residual = relative_gap(st_zp.matrix(), conjugated.matrix());

    let mut cocycle_residual = 0.0f64;
    for (&t, s) in z.times().iter().zip(z.samples()) {
        if t + t_prime > two {
            break;
        }
        if let Some(lhs) = zp.sample_at(t + t_prime) {
            let gap = relative_gap(lhs.matrix(), &(s.matrix() * s_prime.matrix()));
            cocycle_residual = cocycle_residual.max(gap);
        }
    }

    let path_z = z.truncated(period)?;
    let path_zp = zp.truncated(period)?;
    let mu_z = maslov_index(&path_z, settings)?;
    let mu_z_prime = maslov_index(&path_zp, settings)?;
    let s_prime_lp = s_prime.image_of_momentum();
    let mu_rel = maslov_index_rel(&path_z, &s_prime_lp, settings)?;

    let lp = LagrangianFrame::momentum(schedule.dim());
    let st_lp = st_z.image_of_momentum();
    let st_s_prime_lp = st_z.compose(&s_prime).image_of_momentum();
    let inert_a = inertia_index(&st_lp, &lp, &s_prime_lp, tol)?.inert;
    let inert_b = inertia_index(&st_lp, &st_s_prime_lp, &s_prime_lp, tol)?.inert;

    let k_z = split_monodromy(&z, period, tol)?.k;
    let k_z_prime = split_monodromy(&zp, period, tol)?.k;

    let checks = vec![
        IdentityCheck::new("origin change through the reference plane", mu_z_prime.index, mu_rel.index),
        IdentityCheck::new("origin change through inertia indices", mu_z.index - mu_z_prime.index, inert_a - inert_b),
        IdentityCheck::new("winding is independent of the origin", k_z, k_z_prime),
    ];
    Ok(ChangeOriginReport {
        t_prime,
        steps_per_period: steps,
        s_prime,
        conjugacy_residual,
        cocycle_residual,
        mu_z,
        mu_z_prime,
        mu_rel,
        inert_terms: (inert_a, inert_b),
        k_z,
        k_z_prime,
        checks,
    })
}

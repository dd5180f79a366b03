use crate::error::{Error, Result};
use crate::kernel::{matrix_exp, symplectic_j, RealMatrix};
use crate::lagrangian::SymplecticMatrix;
use crate::paths::SymplecticPath;
use crate::tolerances::Tolerances;

use super::hamiltonian::Schedule;

/// Fewest steps per period accepted by [`integrate_variational`].
pub const MIN_STEPS_PER_PERIOD: usize = 64;

/// A solution of `Ṡ = J⁻¹ H''(t) S`, `S_0 = I`, with integration diagnostics.
#[derive(Debug, Clone)]
pub struct Integrated {
    pub path: SymplecticPath,
    /// Number of re-projections onto Sp(n).
    pub corrections: usize,
    /// Largest drift `‖S⁻¹S − I‖` seen before correction.
    pub max_drift: f64,
    /// Largest drift left after correction.
    pub final_drift: f64,
}

fn same_time(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-12 * scale.max(1.0)
}

/// Sorted union of `{j·h}` for each offset, `h = T/steps`, restricted to
/// `[0, horizon]`, plus the schedule's breakpoints.
pub fn time_grid(schedule: &Schedule, horizon: f64, steps_per_period: usize, offsets: &[f64]) -> Vec<f64> {
    let h = schedule.period() / steps_per_period as f64;
    let count = (horizon / h).round() as i64;
    let mut times: Vec<f64> = (0..=count).map(|j| j as f64 * h).collect();
    for &offset in offsets {
        let first = ((0.0 - offset) / h).ceil() as i64;
        let last = ((horizon - offset) / h).floor() as i64;
        times.extend((first..=last).map(|j| offset + j as f64 * h).filter(|&t| t > 0.0 && t < horizon));
    }
    times.extend(schedule.breakpoints(0.0, horizon));
    times.push(horizon);
    times.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(times.len());
    for t in times {
        match out.last() {
            Some(&prev) if same_time(prev, t, horizon) => {}
            _ => out.push(t),
        }
    }
    if let Some(last) = out.last_mut() {
        *last = horizon;
    }
    out
}

/// `‖−J SᵀJ S − I‖`, zero exactly when S is symplectic.
pub fn symplectic_drift(s: &RealMatrix) -> f64 {
    let n = s.nrows() / 2;
    let j = symplectic_j(n);
    let m = -(&j * s.transpose() * &j * s);
    (m - RealMatrix::identity(2 * n, 2 * n)).norm()
}

/// `S (S⁻¹_J S)^{-1/2}` to second order; symplectic up to O(drift³).
pub fn resymplectify(s: &RealMatrix) -> RealMatrix {
    let n = s.nrows() / 2;
    let j = symplectic_j(n);
    let e = -(&j * s.transpose() * &j * s) - RealMatrix::identity(2 * n, 2 * n);
    let correction = RealMatrix::identity(2 * n, 2 * n) - &e * 0.5 + &e * &e * 0.375;
    s * correction
}

/// `J⁻¹ = −J`: with `σ(X_H, ·) = dH` the linearized flow solves `Ṡ = J⁻¹ H''(t) S`.
pub fn flow_generator(n: usize) -> RealMatrix {
    -symplectic_j(n)
}

fn rk4_step(schedule: &Schedule, j: &RealMatrix, s: &RealMatrix, t: f64, h: f64) -> RealMatrix {
    let f = |time: f64, y: &RealMatrix| j * schedule.hessian_at(time) * y;
    let k1 = f(t, s);
    let k2 = f(t + h / 2.0, &(s + &k1 * (h / 2.0)));
    let k3 = f(t + h / 2.0, &(s + &k2 * (h / 2.0)));
    let k4 = f(t + h, &(s + &k3 * h));
    s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Solves the variational equation on `[0, horizon]`.
///
/// Piecewise-constant schedules are propagated by exact exponentials; smooth
/// ones by classical RK4 on the grid from [`time_grid`].
pub fn integrate_variational(
    schedule: &Schedule,
    horizon: f64,
    steps_per_period: usize,
    tol: &Tolerances,
) -> Result<Integrated> {
    integrate_on_grid(schedule, horizon, steps_per_period, &[], tol)
}

/// As [`integrate_variational`], with extra grid offsets (see [`time_grid`]).
pub fn integrate_on_grid(
    schedule: &Schedule,
    horizon: f64,
    steps_per_period: usize,
    offsets: &[f64],
    tol: &Tolerances,
) -> Result<Integrated> {
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::InvalidInput(format!(
            "steps per period must be at least {MIN_STEPS_PER_PERIOD}, got {steps_per_period}"
        )));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidInput(format!("integration horizon must be positive, got {horizon}")));
    }
    let n = schedule.dim();
    let generator = flow_generator(n);
    let times = time_grid(schedule, horizon, steps_per_period, offsets);
    let mut samples = Vec::with_capacity(times.len());
    let mut s = RealMatrix::identity(2 * n, 2 * n);
    samples.push(SymplecticMatrix::identity(n));
    let (mut corrections, mut max_drift, mut final_drift) = (0usize, 0.0f64, 0.0f64);
    let exact = schedule.is_piecewise_constant();
    for w in times.windows(2) {
        let (a, b) = (w[0], w[1]);
        s = if exact {
            let h = schedule.hessian_at(0.5 * (a + b));
            matrix_exp(&(&generator * h * (b - a))) * &s
        } else {
            rk4_step(schedule, &generator, &s, a, b - a)
        };
        let drift = symplectic_drift(&s);
        max_drift = max_drift.max(drift);
        if drift > tol.drift_trigger {
            s = resymplectify(&s);
            corrections += 1;
            let after = symplectic_drift(&s);
            final_drift = final_drift.max(after);
            if after > tol.drift_max {
                return Err(Error::DriftTooLarge { residual: after });
            }
        } else {
            final_drift = final_drift.max(drift);
        }
        samples.push(SymplecticMatrix::trusted(s.clone()));
    }
    if corrections > 0 {
        log::debug!("re-projected onto Sp(n) {corrections} times, max drift {max_drift:e}");
    }
    let path = SymplecticPath::new(times, samples, tol)?;
    Ok(Integrated { path, corrections, max_drift, final_drift })
}

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::RealMatrix;
use crate::tolerances::Tolerances;

/// Declarative description of `H''(z, t)` along a periodic orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianSpec {
    /// Autonomous quadratic Hamiltonian `½ zᵀ H'' z`.
    ConstantQuadratic(ConstantQuadratic),
    /// Hessians sampled along an orbit computed elsewhere.
    PeriodicQuadratic(PeriodicQuadratic),
    /// A named system shipped with the crate.
    Builtin(Builtin),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantQuadratic {
    /// Row-major symmetric 2n×2n matrix.
    pub hessian: Vec<Vec<f64>>,
    pub period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicQuadratic {
    pub period: f64,
    /// Samples from `t = 0` to `t = period`; first and last Hessians agree.
    pub samples: Vec<HessianSample>,
    #[serde(default)]
    pub interpolation: Interpolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HessianSample {
    pub t: f64,
    pub hessian: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Piecewise linear between samples.
    #[default]
    Linear,
    /// Each sample holds until the next one.
    Step,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Builtin {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Point of the orbit taken as origin. The shipped systems are quadratic,
    /// so it does not enter the Hessian.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<f64>>,
}

/// Names accepted by [`Builtin::name`].
pub const BUILTINS: [&str; 5] = [
    "harmonic_oscillator",
    "anisotropic_oscillator",
    "inverted_oscillator",
    "driven_oscillator",
    "parametric_oscillator",
];

impl HamiltonianSpec {
    pub fn constant(hessian: &RealMatrix, period: f64) -> Self {
        Self::ConstantQuadratic(ConstantQuadratic { hessian: rows_of(hessian), period })
    }

    pub fn builtin(name: &str, params: &[(&str, f64)]) -> Self {
        Self::Builtin(Builtin {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            origin: None,
        })
    }

    pub fn harmonic_oscillator(omega: f64) -> Self {
        Self::builtin("harmonic_oscillator", &[("omega", omega)])
    }

    /// Validated schedule `t ↦ H''(t)`.
    pub fn schedule(&self, tol: &Tolerances) -> Result<Schedule> {
        match self {
            Self::ConstantQuadratic(c) => {
                let h = matrix_from_rows(&c.hessian, "hessian")?;
                Schedule::new(Profile::Constant(h), c.period, tol)
            }
            Self::PeriodicQuadratic(p) => {
                let knots = p
                    .samples
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Ok((s.t, matrix_from_rows(&s.hessian, &format!("samples[{i}].hessian"))?)))
                    .collect::<Result<Vec<_>>>()?;
                let profile = match p.interpolation {
                    Interpolation::Linear => Profile::Linear(knots),
                    Interpolation::Step => Profile::Step(knots),
                };
                Schedule::new(profile, p.period, tol)
            }
            Self::Builtin(b) => b.schedule(tol),
        }
    }

    pub fn period(&self, tol: &Tolerances) -> Result<f64> {
        Ok(self.schedule(tol)?.period())
    }
}

fn rows_of(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>], field: &str) -> Result<RealMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::InvalidInput(format!("{field}: rows must be non-empty and of equal length")));
    }
    let m = RealMatrix::from_fn(n, rows[0].len(), |r, c| rows[r][c]);
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{field}: non-finite entry")));
    }
    Ok(m)
}

struct Params<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, f64>,
    used: Vec<String>,
}

impl<'a> Params<'a> {
    fn get(&mut self, key: &str) -> Option<f64> {
        self.used.push(key.to_string());
        self.map.get(key).copied()
    }

    fn or(&mut self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    fn positive(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        let v = match (self.get(key), default) {
            (Some(v), _) | (None, Some(v)) => v,
            (None, None) => return Err(Error::InvalidInput(format!("{}: missing parameter {key}", self.name))),
        };
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidInput(format!("{}: {key} must be positive, got {v}", self.name)));
        }
        Ok(v)
    }

    fn finish(self) -> Result<()> {
        if let Some(k) = self.map.keys().find(|k| !self.used.contains(k)) {
            return Err(Error::InvalidInput(format!("{}: unknown parameter {k}", self.name)));
        }
        Ok(())
    }
}

/// Smallest `T = 2πq/ω₁` (q ≤ 64) that is also a period of every other mode.
fn common_period(omegas: &[f64]) -> Option<f64> {
    let base = omegas[0];
    (1..=64u32).find_map(|q| {
        let ok = omegas.iter().all(|w| {
            let r = q as f64 * w / base;
            (r - r.round()).abs() < 1e-9 * r.max(1.0)
        });
        ok.then(|| 2.0 * PI * q as f64 / base)
    })
}

fn diagonal(entries: &[f64]) -> RealMatrix {
    RealMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(entries))
}

impl Builtin {
    fn schedule(&self, tol: &Tolerances) -> Result<Schedule> {
        let mut p = Params { name: &self.name, map: &self.params, used: Vec::new() };
        let (profile, period) = match self.name.as_str() {
            // H = Σ ½ ω_k (x_k² + p_k²)
            "harmonic_oscillator" => {
                let omegas: Vec<f64> = if self.params.contains_key("omega") {
                    vec![p.positive("omega", None)?]
                } else {
                    let mut v = Vec::new();
                    let mut k = 1;
                    while self.params.contains_key(&format!("omega_{k}")) {
                        v.push(p.positive(&format!("omega_{k}"), None)?);
                        k += 1;
                    }
                    if v.is_empty() {
                        v.push(1.0);
                    }
                    v
                };
                let default = common_period(&omegas);
                let period = p.positive("period", default)?;
                let diag: Vec<f64> = omegas.iter().chain(&omegas).copied().collect();
                (Profile::Constant(diagonal(&diag)), period)
            }
            // n = 2, H = ½ ω_x (x² + p_x²) + ½ ω_y (y² + p_y²)
            "anisotropic_oscillator" => {
                let (wx, wy) = (p.positive("omega_x", Some(1.0))?, p.positive("omega_y", Some(2.0))?);
                let period = p.positive("period", common_period(&[wx, wy]))?;
                (Profile::Constant(diagonal(&[wx, wy, wx, wy])), period)
            }
            // H = λ x p
            "inverted_oscillator" => {
                let lambda = p.or("lambda", 1.0);
                let period = p.positive("period", Some(1.0))?;
                let h = RealMatrix::from_row_slice(2, 2, &[0.0, lambda, lambda, 0.0]);
                (Profile::Constant(h), period)
            }
            // H = ½ (k(t) x² + p²), k = ω²(1 ± ε) on the two halves of the period
            "driven_oscillator" => {
                let omega = p.positive("omega", Some(1.0))?;
                let eps = p.or("epsilon", 0.3);
                let period = p.positive("period", Some(2.0 * PI / omega))?;
                let w2 = omega * omega;
                let knots = vec![
                    (0.0, diagonal(&[w2 * (1.0 + eps), 1.0])),
                    (period / 2.0, diagonal(&[w2 * (1.0 - eps), 1.0])),
                    (period, diagonal(&[w2 * (1.0 + eps), 1.0])),
                ];
                (Profile::Step(knots), period)
            }
            // H = ½ (ω²(1 + ε cos(2πt/T)) x² + p²)
            "parametric_oscillator" => {
                let omega = p.positive("omega", Some(1.0))?;
                let eps = p.or("epsilon", 0.2);
                let period = p.positive("period", Some(2.0 * PI / omega))?;
                let w2 = omega * omega;
                (Profile::Cosine { base: diagonal(&[w2, 1.0]), amplitude: diagonal(&[w2 * eps, 0.0]) }, period)
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown builtin {other:?}; expected one of {}",
                    BUILTINS.join(", ")
                )))
            }
        };
        p.finish()?;
        if let Some(origin) = &self.origin {
            if origin.len() != 2 * profile.dim() || origin.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{}: origin must have {} finite coordinates",
                    self.name,
                    2 * profile.dim()
                )));
            }
        }
        Schedule::new(profile, period, tol)
    }
}

/// How `H''` varies over one period.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(RealMatrix),
    /// `(t_i, H_i)`, `H_i` held on `[t_i, t_{i+1})`.
    Step(Vec<(f64, RealMatrix)>),
    /// `(t_i, H_i)`, linear in between.
    Linear(Vec<(f64, RealMatrix)>),
    /// `base + cos(2πt/T) · amplitude`.
    Cosine {
        base: RealMatrix,
        amplitude: RealMatrix,
    },
}

impl Profile {
    fn dim(&self) -> usize {
        let rows = match self {
            Self::Constant(h) | Self::Cosine { base: h, .. } => h.nrows(),
            Self::Step(k) | Self::Linear(k) => k.first().map_or(0, |(_, h)| h.nrows()),
        };
        rows / 2
    }
}

/// `t ↦ H''(t − shift)`, periodic with period `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    profile: Profile,
    period: f64,
    shift: f64,
    n: usize,
}

fn check_hessian(h: &RealMatrix, n: usize, tol: &Tolerances, what: &str) -> Result<()> {
    if h.nrows() != h.ncols() || h.nrows() != 2 * n || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected a 2n×2n Hessian (n = {n}), got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let residual = (h - h.transpose()).norm();
    if residual > tol.structural * h.norm().max(1.0) {
        return Err(Error::NotSymmetric { residual });
    }
    Ok(())
}

impl Schedule {
    pub fn new(profile: Profile, period: f64, tol: &Tolerances) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        let n = profile.dim();
        match &profile {
            Profile::Constant(h) => check_hessian(h, n, tol, "hessian")?,
            Profile::Cosine { base, amplitude } => {
                check_hessian(base, n, tol, "hessian")?;
                check_hessian(amplitude, n, tol, "hessian")?;
            }
            Profile::Step(knots) | Profile::Linear(knots) => {
                if knots.len() < 2 {
                    return Err(Error::InvalidInput("periodic_quadratic needs at least two samples".into()));
                }
                for (i, (_, h)) in knots.iter().enumerate() {
                    check_hessian(h, n, tol, &format!("samples[{i}]"))?;
                }
                if knots[0].0 != 0.0 {
                    return Err(Error::InvalidInput(format!("samples must start at t = 0, got {}", knots[0].0)));
                }
                if knots.windows(2).any(|w| w[1].0.partial_cmp(&w[0].0) != Some(Ordering::Greater)) {
                    return Err(Error::InvalidInput("sample times must increase strictly".into()));
                }
                let last = knots[knots.len() - 1].0;
                if (last - period).abs() > 1e-12 * period.max(1.0) {
                    return Err(Error::InvalidInput(format!("samples must end at t = period ({period}), got {last}")));
                }
                let (h0, ht) = (&knots[0].1, &knots[knots.len() - 1].1);
                let gap = (h0 - ht).norm();
                if gap > tol.structural * h0.norm().max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "H''(0) and H''(T) differ by {gap:e}; the schedule must be periodic"
                    )));
                }
            }
        }
        Ok(Self { profile, period, shift: 0.0, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// `s ↦ H''(s − t')`: the schedule seen from the orbit point `t'` earlier.
    pub fn shifted(&self, t_prime: f64) -> Self {
        Self { shift: self.shift + t_prime, ..self.clone() }
    }

    pub fn is_autonomous(&self) -> bool {
        matches!(self.profile, Profile::Constant(_))
    }

    /// Whether each grid interval can be propagated by an exact exponential.
    pub fn is_piecewise_constant(&self) -> bool {
        matches!(self.profile, Profile::Constant(_) | Profile::Step(_))
    }

    fn phase(&self, t: f64) -> f64 {
        (t - self.shift).rem_euclid(self.period)
    }

    pub fn hessian_at(&self, t: f64) -> RealMatrix {
        let tau = self.phase(t);
        match &self.profile {
            Profile::Constant(h) => h.clone(),
            Profile::Cosine { base, amplitude } => base + amplitude * (2.0 * PI * tau / self.period).cos(),
            Profile::Step(knots) => {
                let i = knots.iter().rposition(|(s, _)| *s <= tau).unwrap_or(0);
                knots[i].1.clone()
            }
            Profile::Linear(knots) => {
                let i = knots.iter().rposition(|(s, _)| *s <= tau).unwrap_or(0).min(knots.len() - 2);
                let (t0, h0) = &knots[i];
                let (t1, h1) = &knots[i + 1];
                let a = ((tau - t0) / (t1 - t0)).clamp(0.0, 1.0);
                h0 * (1.0 - a) + h1 * a
            }
        }
    }

    /// Times in `(a, b)` where the profile is not smooth.
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let knots = match &self.profile {
            Profile::Step(k) | Profile::Linear(k) => k,
            _ => return Vec::new(),
        };
        let mut out = Vec::new();
        let first = ((a - self.shift) / self.period).floor() as i64 - 1;
        let last = ((b - self.shift) / self.period).ceil() as i64 + 1;
        for cycle in first..=last {
            for (s, _) in knots.iter().skip(1) {
                let t = self.shift + cycle as f64 * self.period + s;
                if t > a && t < b {
                    out.push(t);
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn builtin_defaults() {
        let s = HamiltonianSpec::harmonic_oscillator(1.0).schedule(&tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.period() - 2.0 * PI).abs() < 1e-15);
        assert_eq!(s.hessian_at(0.3), RealMatrix::identity(2, 2));

        let s = HamiltonianSpec::builtin("harmonic_oscillator", &[("omega_1", 1.0), ("omega_2", 1.5)])
            .schedule(&tol())
            .unwrap();
        assert_eq!(s.dim(), 2);
        assert!((s.period() - 4.0 * PI).abs() < 1e-12);

        let s = HamiltonianSpec::builtin("anisotropic_oscillator", &[]).schedule(&tol()).unwrap();
        assert!((s.period() - 2.0 * PI).abs() < 1e-12);
        assert!(HamiltonianSpec::builtin("anisotropic_oscillator", &[("omega_y", 2f64.sqrt())])
            .schedule(&tol())
            .is_err());
    }

    #[test]
    fn builtin_errors() {
        let bad = HamiltonianSpec::builtin("harmonic_oscillator", &[("omegaa", 1.0)]);
        assert!(matches!(bad.schedule(&tol()), Err(Error::InvalidInput(m)) if m.contains("omegaa")));
        let bad = HamiltonianSpec::builtin("duffing", &[]);
        assert!(bad.schedule(&tol()).is_err());
        let bad = HamiltonianSpec::builtin("driven_oscillator", &[("period", -1.0)]);
        assert!(bad.schedule(&tol()).is_err());
    }

    #[test]
    fn driven_schedule_and_shift() {
        let s = HamiltonianSpec::builtin("driven_oscillator", &[("epsilon", 0.5)]).schedule(&tol()).unwrap();
        let t = s.period();
        assert_eq!(s.hessian_at(0.1)[(0, 0)], 1.5);
        assert_eq!(s.hessian_at(t / 2.0 + 0.1)[(0, 0)], 0.5);
        assert_eq!(s.hessian_at(t + 0.1)[(0, 0)], 1.5);
        assert_eq!(s.breakpoints(0.0, 2.0 * t), vec![t / 2.0, t, 1.5 * t]);
        let shifted = s.shifted(t / 4.0);
        assert_eq!(shifted.hessian_at(0.1)[(0, 0)], 0.5);
        assert_eq!(shifted.hessian_at(t / 4.0 + 0.1)[(0, 0)], 1.5);
        let bp = shifted.breakpoints(0.0, t);
        assert_eq!(bp.len(), 2);
        assert!((bp[0] - t / 4.0).abs() < 1e-12 && (bp[1] - 0.75 * t).abs() < 1e-12);
    }

    #[test]
    fn periodic_samples_are_validated() {
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let h2 = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
        let spec = |samples: Vec<HessianSample>| {
            HamiltonianSpec::PeriodicQuadratic(PeriodicQuadratic {
                period: 2.0,
                samples,
                interpolation: Interpolation::Linear,
            })
        };
        let ok = spec(vec![
            HessianSample { t: 0.0, hessian: h.clone() },
            HessianSample { t: 1.0, hessian: h2.clone() },
            HessianSample { t: 2.0, hessian: h.clone() },
        ]);
        let s = ok.schedule(&tol()).unwrap();
        assert!((s.hessian_at(0.5)[(0, 0)] - 1.5).abs() < 1e-15);
        assert!((s.hessian_at(2.5)[(0, 0)] - 1.5).abs() < 1e-15);
        let not_periodic =
            spec(vec![HessianSample { t: 0.0, hessian: h.clone() }, HessianSample { t: 2.0, hessian: h2.clone() }]);
        assert!(not_periodic.schedule(&tol()).is_err());
        let short = spec(vec![HessianSample { t: 0.0, hessian: h.clone() }, HessianSample { t: 1.0, hessian: h }]);
        assert!(short.schedule(&tol()).is_err());
        let asym = HamiltonianSpec::ConstantQuadratic(ConstantQuadratic {
            hessian: vec![vec![1.0, 2.0], vec![0.0, 1.0]],
            period: 1.0,
        });
        assert!(matches!(asym.schedule(&tol()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn serde_round_trip() {
        let spec = HamiltonianSpec::harmonic_oscillator(1.0);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"kind":"builtin","name":"harmonic_oscillator","params":{"omega":1.0}}"#);
        let back: HamiltonianSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let unknown = r#"{"kind":"constant_quadratic","hessian":[[1,0],[0,1]],"period":1,"extra":2}"#;
        assert!(serde_json::from_str::<HamiltonianSpec>(unknown).is_err());
    }
}

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{ComplexMatrix, RealMatrix};
use crate::lagrangian::{LagrangianFrame, LagrangianLift, SouriauPoint};
use crate::monodromy::HamiltonianSpec;
use crate::paths::SymplecticPath;
use crate::tolerances::Tolerances;

/// Steps per period used when a job does not set `steps_per_period`.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Leray,
    Signature,
    Inert,
    MaslovPath,
    Monodromy,
    ChangeOrigin,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Leray => "leray",
            Self::Signature => "signature",
            Self::Inert => "inert",
            Self::MaslovPath => "maslov-path",
            Self::Monodromy => "monodromy",
            Self::ChangeOrigin => "change-origin",
            Self::Verify => "verify",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Self::Leray => &["lifts"],
            Self::Signature | Self::Inert => &["planes"],
            Self::MaslovPath => &["path"],
            Self::Monodromy => &["hamiltonian"],
            Self::ChangeOrigin => &["hamiltonian", "t_prime"],
            Self::Verify => &[],
        }
    }

    fn optional(self) -> &'static [&'static str] {
        match self {
            Self::MaslovPath => &["reference_plane"],
            Self::Monodromy => &["steps_per_period", "repetitions", "invariant_plane"],
            Self::ChangeOrigin => &["steps_per_period"],
            Self::Verify => &["verify"],
            _ => &[],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Complex matrix as rows of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;
/// Real matrix as rows.
pub type RealRows = Vec<Vec<f64>>;

/// A point of the universal covering: `w = u uᵀ` and an angle with `det w = e^{iθ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftDoc {
    pub w: ComplexRows,
    pub theta: f64,
}

/// A Lagrangian plane, given by a 2n×n frame `(X; P)` or by `w`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<RealRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<ComplexRows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathDoc {
    /// Explicit samples `S(t_i)`.
    Samples { times: Vec<f64>, samples: Vec<RealRows> },
    /// `t ↦ e^{tX}` on `[0, t_end]`.
    Generator { generator: RealRows, t_end: f64, intervals: usize },
    /// The rotation `t ↦ (cos t · I, −sin t · I; sin t · I, cos t · I)` on `[0, alpha]`.
    Rotation {
        n: usize,
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        intervals: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDoc {
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default = "default_cases")]
    pub cases: usize,
}

fn default_max_dim() -> usize {
    3
}

fn default_cases() -> usize {
    20
}

impl Default for VerifyDoc {
    fn default() -> Self {
        Self { max_dim: default_max_dim(), cases: default_cases() }
    }
}

/// A validated job document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_per_period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<Vec<LiftDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planes: Option<Vec<PlaneDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_plane: Option<PlaneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_plane: Option<PlaneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyDoc>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

/// Parses and validates a JSON job document.
pub fn parse_job(document: &str) -> Result<JobSpec> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let job: JobSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(if path.is_empty() { ".".into() } else { path }, e.into_inner().to_string())
    })?;
    job.validate()?;
    Ok(job)
}

impl JobSpec {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let fields: [(&'static str, bool); 10] = [
            ("steps_per_period", self.steps_per_period.is_some()),
            ("lifts", self.lifts.is_some()),
            ("planes", self.planes.is_some()),
            ("path", self.path.is_some()),
            ("reference_plane", self.reference_plane.is_some()),
            ("hamiltonian", self.hamiltonian.is_some()),
            ("t_prime", self.t_prime.is_some()),
            ("repetitions", self.repetitions.is_some()),
            ("invariant_plane", self.invariant_plane.is_some()),
            ("verify", self.verify.is_some()),
        ];
        for (name, set) in fields {
            if set {
                out.push(name);
            }
        }
        out
    }

    /// Checks the fields each command needs and rejects those it ignores.
    pub fn validate(&self) -> Result<()> {
        let present = self.present();
        for field in self.command.required() {
            if !present.contains(field) {
                return Err(schema(*field, format!("required by command {}", self.command)));
            }
        }
        for field in &present {
            if !self.command.required().contains(field) && !self.command.optional().contains(field) {
                return Err(schema(*field, format!("not used by command {}", self.command)));
            }
        }
        match self.command {
            Command::Leray if self.lifts.as_ref().is_some_and(|l| l.len() != 2) => {
                Err(schema("lifts", "expected exactly two lifts"))
            }
            Command::Signature | Command::Inert if self.planes.as_ref().is_some_and(|p| p.len() != 3) => {
                Err(schema("planes", "expected exactly three planes"))
            }
            _ => Ok(()),
        }?;
        if let Some(steps) = self.steps_per_period {
            if steps < crate::monodromy::MIN_STEPS_PER_PERIOD {
                return Err(schema(
                    "steps_per_period",
                    format!("must be at least {}", crate::monodromy::MIN_STEPS_PER_PERIOD),
                ));
            }
        }
        if let Some(t) = self.t_prime {
            if !t.is_finite() {
                return Err(schema("t_prime", "must be finite"));
            }
        }
        if self.repetitions.as_ref().is_some_and(|r| r.contains(&0)) {
            return Err(schema("repetitions", "repetition counts start at 1"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.steps_per_period.unwrap_or(DEFAULT_STEPS_PER_PERIOD)
    }
}

pub(crate) fn real_matrix(rows: &RealRows, path: &str) -> Result<RealMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(schema(path, "rows must be non-empty and of equal length"));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(schema(path, "entries must be finite"));
    }
    Ok(RealMatrix::from_fn(rows.len(), cols, |r, c| rows[r][c]))
}

pub(crate) fn complex_matrix(rows: &ComplexRows, path: &str) -> Result<ComplexMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(schema(path, "rows must be non-empty and of equal length"));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(schema(path, "entries must be finite"));
    }
    Ok(ComplexMatrix::from_fn(rows.len(), cols, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1])))
}

pub fn complex_rows(m: &ComplexMatrix) -> ComplexRows {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

pub fn real_rows(m: &RealMatrix) -> RealRows {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

impl LiftDoc {
    pub fn from_lift(l: &LagrangianLift) -> Self {
        Self { w: complex_rows(l.point().matrix()), theta: l.theta() }
    }

    pub fn to_lift(&self, path: &str, tol: &Tolerances) -> Result<LagrangianLift> {
        let w = complex_matrix(&self.w, &format!("{path}.w"))?;
        let point = SouriauPoint::new(w, tol).map_err(|e| schema(format!("{path}.w"), e.to_string()))?;
        LagrangianLift::new(point, self.theta, tol).map_err(|e| schema(format!("{path}.theta"), e.to_string()))
    }
}

impl PlaneDoc {
    pub fn from_frame(f: &LagrangianFrame) -> Self {
        Self { frame: Some(real_rows(f.matrix())), w: None }
    }

    pub fn to_frame(&self, path: &str, tol: &Tolerances) -> Result<LagrangianFrame> {
        match (&self.frame, &self.w) {
            (Some(rows), None) => {
                let z = real_matrix(rows, &format!("{path}.frame"))?;
                LagrangianFrame::new(z, tol).map_err(|e| schema(format!("{path}.frame"), e.to_string()))
            }
            (None, Some(rows)) => {
                let w = complex_matrix(rows, &format!("{path}.w"))?;
                let point = SouriauPoint::new(w, tol).map_err(|e| schema(format!("{path}.w"), e.to_string()))?;
                point.to_frame(tol)
            }
            _ => Err(schema(path, "give exactly one of `frame` or `w`")),
        }
    }
}

impl PathDoc {
    pub fn to_path(&self, tol: &Tolerances) -> Result<SymplecticPath> {
        match self {
            Self::Samples { times, samples } => {
                if times.len() != samples.len() {
                    return Err(schema("path.samples", format!("{} samples for {} times", samples.len(), times.len())));
                }
                let mats = samples
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        let field = format!("path.samples[{i}]");
                        let m = real_matrix(rows, &field)?;
                        crate::lagrangian::SymplecticMatrix::new(m, tol).map_err(|e| schema(field, e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SymplecticPath::new(times.clone(), mats, tol)
            }
            Self::Generator { generator, t_end, intervals } => {
                let x = real_matrix(generator, "path.generator")?;
                SymplecticPath::from_generator(&x, *t_end, *intervals, tol)
            }
            Self::Rotation { n, alpha, intervals } => match intervals {
                Some(k) => SymplecticPath::rotation(*n, *alpha, *k, tol),
                None => SymplecticPath::rotation_auto(*n, *alpha, tol),
            },
        }
    }
}

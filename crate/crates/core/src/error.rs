use thiserror::Error;

/// Errors raised by the index calculus and the periodic-orbit machinery.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian/symmetric (residual {residual:.3e})")]
    NonHermitian { residual: f64 },
    #[error("iterative solver did not converge: {0}")]
    NoConvergence(&'static str),
    #[error("eigenvalue {arg:.9} rad lies on the logarithm branch cut")]
    EigenvalueOnBranchCut { arg: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("frame is rank deficient (rank {rank}, expected {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("frame does not span a Lagrangian plane (isotropy residual {residual:.3e})")]
    NotLagrangian { residual: f64 },
    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },
    #[error("lift angle inconsistent with det w (residual {residual:.3e})")]
    InconsistentLift { residual: f64 },
    #[error("no common transversal found after {attempts} attempts")]
    SearchExhausted { attempts: usize },
    #[error("planes are not transversal (intersection dimension {dim})")]
    NotTransversal { dim: usize },
    #[error("index value {value} is not within tolerance of an integer")]
    NonIntegerResult { value: f64 },
    #[error(
        "inertia index (tau={tau}, ddim={ddim}, n={n}) is not an integer; an eigenvalue sits near the zero threshold"
    )]
    NonIntegerInertia { tau: i64, ddim: i64, n: usize },
    #[error("sampling too coarse on [{t0}, {t1}]: angle increment {increment:.4} rad (resample this interval)")]
    StepTooCoarse { t0: f64, t1: f64, increment: f64 },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("sample at t={time} is not orthogonal-symplectic (residual {residual:.3e})")]
    NotUnitaryPath { time: f64, residual: f64 },
    #[error("path is not closed (endpoint residual {residual:.3e})")]
    NotClosed { residual: f64 },
    #[error("monodromy matrix has eigenvalues on the closed negative real axis after squaring")]
    NonGenericMonodromy,
    #[error("projection onto sp(n) moved the generator by {residual:.3e} (relative)")]
    ProjectionResidualTooLarge { residual: f64 },
    #[error("monodromy relation S(t+T) = S(t) S(T) violated at t={time} (residual {residual:.3e})")]
    MonodromyRelationViolated { time: f64, residual: f64 },
    #[error("symplectic drift {residual:.3e} remains after correction")]
    DriftTooLarge { residual: f64 },
    #[error("identity {name} violated: lhs={lhs}, rhs={rhs}")]
    IdentityViolated { name: String, lhs: i64, rhs: i64 },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

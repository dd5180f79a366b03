/// Numerical thresholds threaded through every computation.
///
/// All values are relative unless noted. `Tolerances::default()` holds the
/// values the test suites are pinned to.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Unitarity, symplecticity, symmetry and isotropy checks.
    pub structural: f64,
    /// Eigen/polar reconstruction.
    pub reconstruction: f64,
    /// Singular-value threshold for ranks and intersection dimensions.
    pub rank: f64,
    /// Zero threshold for signature eigenvalues, relative to the largest.
    pub signature: f64,
    /// Allowed distance of a real-valued index from the nearest integer.
    pub integer: f64,
    /// Minimum distance (rad) of log eigenvalues from the branch cut at ±π.
    pub branch_cut: f64,
    /// Monodromy relation and conjugacy residuals.
    pub relation: f64,
    /// exp(log M) = M round trip.
    pub log_roundtrip: f64,
    /// sp(n) projection residual of the monodromy generator.
    pub projection: f64,
    /// Symplectic drift that triggers re-projection during integration.
    pub drift_trigger: f64,
    /// Symplectic drift tolerated after re-projection.
    pub drift_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-9,
            reconstruction: 1e-10,
            rank: 1e-9,
            signature: 1e-9,
            integer: 1e-6,
            branch_cut: 1e-6,
            relation: 1e-8,
            log_roundtrip: 1e-8,
            projection: 1e-8,
            drift_trigger: 1e-10,
            drift_max: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn with_structural(mut self, structural: f64) -> Self {
        self.structural = structural;
        self
    }
}

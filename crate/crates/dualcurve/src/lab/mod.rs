//! Executable checkers and fuzz suites for the concentration inequalities,
//! the moment Brunn–Minkowski inequality with its equality cases, the
//! quasiconvex translate inequality, and the small-p counterexample.

mod alesker;
mod concentration;
mod moment_bm;
mod random;
mod scalar;
mod suites;

pub use alesker::{alesker_constancy_check, AleskerReport};
pub use concentration::{
    brunn_minkowski_spot_check, cylinder_asymptotics_check, hull_mc_volume,
    parallelotope_bound_check, prism_bound_check, CylinderSweep, CylinderSweepRow,
};
pub use moment_bm::{
    anderson_translate_check, moment_bm_check, reflection_corollary_check, small_p_counterexample,
    small_p_ratio, tightness_factor_probe, AndersonReport,
};
pub use random::{
    random_equal_area_polygon_pair, random_rotation, random_subspace, random_subspace_aligned,
    random_symmetric_polygon, random_symmetric_polytope,
};
pub use scalar::{karamata_check, scalar_combination_check, ConvexFn};
pub use suites::{run_all_suites, run_suite, suite_names};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::measures::MeasureError;
use crate::quadrature::{QuadratureError, RngSeed};

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

/// Equality-case classification of an inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityCase {
    None,
    LambdaEndpoint,
    Antipodal,
    P1Separated,
    Threshold,
    NumericEqual,
}

/// Outcome of a single inequality check. The claim is lhs ≥ rhs unless the
/// checker documents otherwise; `holds` means
/// margin ≥ −(tol_abs + tol_rel·scale) with scale = max(|lhs|, |rhs|).
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    pub equality_case: EqualityCase,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub scale: f64,
}

impl InequalityReport {
    pub fn evaluate(
        lhs: f64,
        rhs: f64,
        tol_abs: f64,
        tol_rel: f64,
        equality_case: EqualityCase,
    ) -> Self {
        let margin = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs());
        InequalityReport {
            lhs,
            rhs,
            margin,
            holds: margin >= -(tol_abs + tol_rel * scale),
            equality_case,
            tol_abs,
            tol_rel,
            scale,
        }
    }

    /// Numeric equality at 1e−12 relative.
    pub fn numerically_equal(&self) -> bool {
        self.margin.abs() <= 1e-12 * self.scale.max(1e-300)
    }
}

/// Base relative tolerance for pure-arithmetic inequality checks.
pub const ARITHMETIC_TOL_REL: f64 = 1e-12;

/// Configuration of a fuzz run.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed: RngSeed,
    pub dim_range: (usize, usize),
    pub vertex_range: (usize, usize),
    pub exponent_range: (f64, f64),
    pub lambda_grid: Vec<f64>,
}

impl FuzzConfig {
    pub fn new(trials: u64, seed: RngSeed) -> Self {
        FuzzConfig {
            trials,
            seed,
            dim_range: (3, 4),
            vertex_range: (4, 10),
            exponent_range: (1.0, 4.0),
            lambda_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        if self.trials == 0 {
            return Err(LabError::InvalidConfig("trials must be ≥ 1".into()));
        }
        if self.dim_range.0 > self.dim_range.1
            || self.vertex_range.0 > self.vertex_range.1
            || self.exponent_range.0 > self.exponent_range.1
            || self.lambda_grid.is_empty()
        {
            return Err(LabError::InvalidConfig("empty range".into()));
        }
        Ok(())
    }
}

/// A confirmed bound violation (after re-evaluation at refined precision).
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub trial: u64,
    pub description: String,
    pub margin: f64,
    pub seed: RngSeed,
}

/// Aggregate result of a fuzz suite.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub suite: String,
    pub trials: u64,
    pub checks: u64,
    pub violations: Vec<Violation>,
    /// Smallest slack observed: distance from the worst check to its bound
    /// (positive means every check cleared its bound).
    pub worst_margin: f64,
    /// Equal-width histogram of the monitored quantity, when the suite
    /// tracks one (e.g. concentration ratios on [0,1]).
    pub histogram: Vec<u64>,
    pub notes: Vec<String>,
}

impl FuzzSummary {
    pub fn new(suite: &str) -> Self {
        FuzzSummary {
            suite: suite.to_string(),
            trials: 0,
            checks: 0,
            violations: Vec::new(),
            worst_margin: f64::INFINITY,
            histogram: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn record_margin(&mut self, margin: f64) {
        self.checks += 1;
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
    }
}

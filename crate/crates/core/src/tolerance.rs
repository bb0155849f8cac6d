use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by all routines.
///
/// `rank_tol` decides when an orthogonalized residual counts as zero;
/// `eq_tol` bounds the relative defect accepted in identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_tol: f64,
    pub eq_tol: f64,
}

impl ToleranceConfig {
    pub const DEFAULT_RANK_TOL: f64 = 1e-9;
    pub const DEFAULT_EQ_TOL: f64 = 1e-7;

    pub fn new(rank_tol: f64, eq_tol: f64) -> Result<Self> {
        for (name, v) in [("rank_tol", rank_tol), ("eq_tol", eq_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(Self { rank_tol, eq_tol })
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rank_tol: Self::DEFAULT_RANK_TOL, eq_tol: Self::DEFAULT_EQ_TOL }
    }
}

//! Frozen pass/fail thresholds, versioned alongside the code.

use serde::{Deserialize, Serialize};

use crate::error::Result;

const FROZEN: &str = include_str!("../thresholds.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub version: u32,
    /// Worst exactness residual of a rule on random zonal polynomials.
    pub quadrature_exactness: f64,
    pub sparsify_residual: f64,
    /// Relative error reproducing a polynomial in `Π_n`.
    pub reproduction: f64,
    /// Fitted log-log slope must be at most this times `r`.
    pub smooth_slope_factor: f64,
    pub analytic_r_squared: f64,
    /// Largest admissible `|σ − σ_local|`; also capped by `n^{-2r}`.
    pub localization_abs: f64,
    pub adaptivity_far_slope_factor: f64,
    pub montecarlo_slope_tolerance: f64,
    /// Max ratio of consecutive `s = 0` Lebesgue estimates.
    pub lebesgue_s0_ratio: f64,
    /// Max/min of `n·L_1` across `n`.
    pub lebesgue_s1_band: f64,
    pub cap_ratio_band: f64,
    pub pipeline_square: f64,
    /// Relative slack when checking monotone decrease of identity errors.
    pub pipeline_identity_slack: f64,
    pub pipeline_zero_input: f64,
    pub pipeline_lipschitz: f64,
}

impl Thresholds {
    pub fn frozen() -> Self {
        serde_json::from_str(FROZEN).expect("embedded thresholds parse")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self::frozen()
    }
}

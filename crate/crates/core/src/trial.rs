//! Uniform access to the two trial-function families.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::ProblemParams;
use crate::trial_one::{TrialOne, TrialOneCoeffs};
use crate::trial_two::{TrialTwo, TrialTwoConfig, TrialTwoOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialKind {
    One,
    Two,
}

/// Construction metadata carried into results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "trial", rename_all = "lowercase")]
pub enum TrialMeta {
    One(TrialOneCoeffs),
    Two(TrialTwoConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrialFunction {
    One(TrialOne),
    Two(TrialTwo),
}

impl TrialFunction {
    pub fn build(params: ProblemParams, kind: TrialKind, opts: TrialTwoOptions) -> Result<Self> {
        Ok(match kind {
            TrialKind::One => Self::One(TrialOne::new(params)),
            TrialKind::Two => Self::Two(TrialTwo::build(params, opts)?),
        })
    }

    pub fn params(&self) -> &ProblemParams {
        match self {
            Self::One(t) => &t.params,
            Self::Two(t) => &t.params,
        }
    }

    pub fn log_phi(&self, r: f64) -> f64 {
        match self {
            Self::One(t) => t.log_phi(r),
            Self::Two(t) => t.log_phi(r),
        }
    }

    /// h(r) for r ≥ 0; the origin uses the extrapolated limit for trial II.
    pub fn h(&self, r: f64) -> Result<f64> {
        match self {
            Self::One(t) => Ok(t.h(r)),
            Self::Two(t) if r == 0.0 => t.h_at_zero(),
            Self::Two(t) => t.h(r),
        }
    }

    pub fn base_energy(&self) -> f64 {
        match self {
            Self::One(t) => t.base_energy(),
            Self::Two(t) => t.base_energy(),
        }
    }

    pub fn meta(&self) -> TrialMeta {
        match self {
            Self::One(t) => TrialMeta::One(t.coeffs),
            Self::Two(t) => TrialMeta::Two(t.cfg),
        }
    }
}

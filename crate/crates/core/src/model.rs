//! Problem parameters, the generalized Sombrero potential and the radial
//! Schrödinger residual used to verify constructed trial functions.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};

/// Central-difference step used by [`schroedinger_residual`] callers.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Physical configuration of one radial problem.
///
/// `k = (N - 1) / 2` and `r0 = ((2 + N) / 3)^(1/4)` are derived from the
/// dimension and never set independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub dim: u32,
    pub k: f64,
    pub g: f64,
    pub a: f64,
    pub r0: f64,
}

impl ProblemParams {
    pub fn new(dim: u32, g: f64, a: f64) -> Result<Self> {
        if dim < 1 {
            return Err(SolverError::ParameterDomain(format!("N must be >= 1, got {dim}")));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(SolverError::ParameterDomain(format!("g must be > 0, got {g}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(SolverError::ParameterDomain(format!("A must be > 0, got {a}")));
        }
        let n = f64::from(dim);
        Ok(Self { dim, k: (n - 1.0) / 2.0, g, a, r0: ((2.0 + n) / 3.0).powf(0.25) })
    }

    #[inline]
    pub fn r0_sq(&self) -> f64 {
        self.r0 * self.r0
    }

    /// V(r) = ½ g² (r² − r0²)² (r² + A r0²).
    #[inline]
    pub fn potential(&self, r: f64) -> f64 {
        let r2 = r * r;
        let r02 = self.r0_sq();
        let d = r2 - r02;
        0.5 * self.g * self.g * d * d * (r2 + self.a * r02)
    }
}

/// Free-function form of [`ProblemParams::new`].
pub fn make_params(dim: u32, g: f64, a: f64) -> Result<ProblemParams> {
    ProblemParams::new(dim, g, a)
}

pub fn potential(p: &ProblemParams, r: f64) -> f64 {
    p.potential(r)
}

/// Kinetic ratio −½(φ'' + (2k/r)φ')/φ from the first two derivatives of
/// s = log φ. Finite wherever s is, which is why everything is kept in the
/// log domain.
#[inline]
pub fn kinetic_ratio(k: f64, r: f64, ds: f64, d2s: f64) -> f64 {
    -0.5 * (d2s + ds * ds + 2.0 * k / r * ds)
}

/// Power of two nearest to `step` from above, so r ± step and r ± 2·step
/// are exact for every r the residual is sampled at.
fn representable_step(step: f64) -> f64 {
    2f64.powi(step.log2().ceil() as i32)
}

/// R(r) = −½(φ'' + (2k/r)φ')/φ + V(r) − h(r) − E_base, with the derivatives
/// of log φ taken by five-point central differences of width ≈ `step`.
///
/// Vanishes identically for an exactly constructed trial function.
pub fn schroedinger_residual<L, H>(
    p: &ProblemParams,
    log_phi: L,
    h: H,
    base_energy: f64,
    r: f64,
    step: f64,
) -> Result<f64>
where
    L: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    if !(r > 0.0) {
        return Err(SolverError::NonPositiveRadius(r));
    }
    let dr = representable_step(step);
    let (s2m, s1m, s0, s1p, s2p) =
        (log_phi(r - 2.0 * dr), log_phi(r - dr), log_phi(r), log_phi(r + dr), log_phi(r + 2.0 * dr));
    let ds = (s2m - 8.0 * s1m + 8.0 * s1p - s2p) / (12.0 * dr);
    let d2s = (-s2m + 16.0 * s1m - 30.0 * s0 + 16.0 * s1p - s2p) / (12.0 * dr * dr);
    Ok(kinetic_ratio(p.k, r, ds, d2s) + p.potential(r) - h(r) - base_energy)
}

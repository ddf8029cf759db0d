//! Truncated radial quadrature on a uniform mesh with log-domain weights.
//!
//! The measure r^{2k} φ² dr is stored as `log_weight` and exponentiated
//! relative to its maximum (`shift`), so integrals of rapidly decaying trial
//! functions never underflow. Results of the weighted routines are
//! *mantissas*: the true integral is the returned value times exp(shift).

use crate::error::{Result, SolverError};
use crate::model::ProblemParams;

pub const DEFAULT_POINTS: usize = 8193;
pub const MIN_POINTS: usize = 64;

/// Natural-log decay of the weight below its peak at the auto-selected r_max.
pub const DECAY_BUDGET: f64 = 120.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub step: f64,
    pub r_max: f64,
    pub k: f64,
    pub log_phi: Vec<f64>,
    /// 2k log r + 2 log φ(r); −∞ at r = 0 when k > 0.
    pub log_weight: Vec<f64>,
    pub shift: f64,
    /// exp(log_weight − shift), in [0, 1].
    pub weight: Vec<f64>,
    pub peak: usize,
    /// (L', L'') of the log weight L at r_max.
    pub edge_slope: (f64, f64),
}

fn log_weight_at(k: f64, r: f64, log_phi: f64) -> f64 {
    if k == 0.0 {
        2.0 * log_phi
    } else if r == 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * k * r.ln() + 2.0 * log_phi
    }
}

/// First and second derivative at r by five-point stencils. The wide step
/// keeps round-off of large log values from being amplified.
fn edge_derivatives<F: Fn(f64) -> f64>(f: F, r: f64) -> (f64, f64) {
    let d = 0.01 * r;
    let (m2, m1, c, p1, p2) = (f(r - 2.0 * d), f(r - d), f(r), f(r + d), f(r + 2.0 * d));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * d);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * d * d);
    (d1, d2)
}

/// Radius where the weight has decayed by [`DECAY_BUDGET`] below its peak.
pub fn auto_r_max<L: Fn(f64) -> f64>(p: &ProblemParams, log_phi: &L) -> Result<f64> {
    let lw = |r: f64| log_weight_at(p.k, r, log_phi(r));
    let (lo, hi) = (p.r0, p.r0 + 20.0);
    // coarse scan of the peak on [0, hi]
    let peak = (1..=4000)
        .map(|i| lw(hi * i as f64 / 4000.0))
        .chain(std::iter::once(lw(0.0)))
        .fold(f64::NEG_INFINITY, f64::max);
    let target = |r: f64| lw(r) - peak + DECAY_BUDGET;
    let (mut a, mut b) = (lo, hi);
    if !(target(b) < 0.0) {
        return Err(SolverError::NoDecay);
    }
    if target(a) <= 0.0 {
        return Ok(a);
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if target(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    Ok(b)
}

impl RadialGrid {
    /// Uniform grid on [0, r_max] with `n_points` nodes (odd, so the interval
    /// count is even). `r_max = None` selects it automatically.
    pub fn build<L: Fn(f64) -> f64>(
        p: &ProblemParams,
        log_phi: L,
        n_points: usize,
        r_max: Option<f64>,
    ) -> Result<Self> {
        if n_points < MIN_POINTS || n_points.is_multiple_of(2) {
            return Err(SolverError::BadGrid(n_points));
        }
        let r_max = match r_max {
            Some(r) if r > 0.0 && r.is_finite() => r,
            Some(r) => return Err(SolverError::ParameterDomain(format!("r_max must be > 0, got {r}"))),
            None => auto_r_max(p, &log_phi)?,
        };
        let intervals = n_points - 1;
        let step = r_max / intervals as f64;
        let nodes: Vec<f64> = (0..n_points).map(|i| i as f64 * step).collect();
        let log_phi_fn = &log_phi;
        let log_phi: Vec<f64> = nodes.iter().map(|&r| log_phi_fn(r)).collect();
        let log_weight: Vec<f64> = nodes.iter().zip(&log_phi).map(|(&r, &l)| log_weight_at(p.k, r, l)).collect();
        let (peak, shift) =
            log_weight
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        if !shift.is_finite() {
            return Err(SolverError::Overflow("grid weight"));
        }
        let weight = log_weight.iter().map(|&l| (l - shift).exp()).collect();
        let edge_slope = edge_derivatives(|r| log_weight_at(p.k, r, log_phi_fn(r)), r_max);
        Ok(Self { nodes, step, r_max, k: p.k, log_phi, log_weight, shift, weight, peak, edge_slope })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn weighted(&self, density: &[f64]) -> Vec<f64> {
        debug_assert_eq!(density.len(), self.len());
        self.weight.iter().zip(density).map(|(w, d)| if *w == 0.0 { 0.0 } else { w * d }).collect()
    }

    /// Mantissa of ∫ r^{2k} φ² · density dr (multiply by exp(shift)).
    pub fn integrate_scaled(&self, density: &[f64]) -> f64 {
        simpson(&self.weighted(density), self.step)
    }

    /// ∫ r^{2k} φ² · density dr as a plain real (may over/underflow for
    /// extreme shifts; ratios should use the scaled form).
    pub fn integrate(&self, density: &[f64]) -> f64 {
        self.integrate_scaled(density) * self.shift.exp()
    }

    /// Mantissas of ∫₀^{r_i} r^{2k} φ² · density dr.
    pub fn cumulative_prefix(&self, density: &[f64]) -> Vec<f64> {
        prefix_integral(&self.weighted(density), self.step)
    }

    /// Mantissas of ∫_{r_i}^{r_max} r^{2k} φ² · density dr, accumulated
    /// backwards from r_max.
    pub fn cumulative_suffix(&self, density: &[f64]) -> Vec<f64> {
        suffix_integral(&self.weighted(density), self.step)
    }

    /// ∫₀^{r_i} of a density whose total integral vanishes: prefix up to the
    /// weight peak, −suffix beyond it, so the tail keeps relative accuracy.
    pub fn balanced_prefix(&self, density: &[f64]) -> Vec<f64> {
        let w = self.weighted(density);
        let mut out = prefix_integral(&w, self.step);
        let suf = suffix_integral(&w, self.step);
        for i in self.peak + 1..out.len() {
            out[i] = -suf[i];
        }
        out
    }
}

/// Composite Simpson over an even number of intervals.
pub fn simpson(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "simpson needs an odd node count");
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in (1..n - 1).step_by(2) {
        odd += values[i];
    }
    for i in (2..n - 1).step_by(2) {
        even += values[i];
    }
    step / 3.0 * (values[0] + values[n - 1] + 4.0 * odd + 2.0 * even)
}

// Each Simpson panel [2j, 2j+2] is split at its midpoint with the same
// parabola: left half h/12 (5f0 + 8f1 − f2), right half h/12 (−f0 + 8f1 + 5f2).
// Prefix and suffix therefore partition the Simpson total exactly.

/// Running ∫₀^{x_i} of sampled values.
pub fn prefix_integral(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "prefix needs an odd node count");
    let mut out = vec![0.0; n];
    let h12 = step / 12.0;
    let h3 = step / 3.0;
    for j in (0..n - 2).step_by(2) {
        let (f0, f1, f2) = (values[j], values[j + 1], values[j + 2]);
        out[j + 1] = out[j] + h12 * (5.0 * f0 + 8.0 * f1 - f2);
        out[j + 2] = out[j] + h3 * (f0 + 4.0 * f1 + f2);
    }
    out
}

/// Running ∫_{x_i}^{x_last} of sampled values.
pub fn suffix_integral(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "suffix needs an odd node count");
    let mut out = vec![0.0; n];
    let h12 = step / 12.0;
    let h3 = step / 3.0;
    for j in (2..n).step_by(2).rev() {
        let (f0, f1, f2) = (values[j - 2], values[j - 1], values[j]);
        out[j - 1] = out[j] + h12 * (-f0 + 8.0 * f1 + 5.0 * f2);
        out[j - 2] = out[j] + h3 * (f0 + 4.0 * f1 + f2);
    }
    out
}

pub fn build_grid<L: Fn(f64) -> f64>(
    p: &ProblemParams,
    log_phi: L,
    n_points: usize,
    r_max: Option<f64>,
) -> Result<RadialGrid> {
    RadialGrid::build(p, log_phi, n_points, r_max)
}

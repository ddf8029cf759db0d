//! f-iteration and τ-iteration for the ground state, ψ = f φ = e^{−τ} φ.
//!
//! Both schemes refine an energy correction Δₙ and a profile (fₙ or τ'ₙ)
//! from the trial pair (φ, h). All weighted integrals are taken as
//! mantissas relative to the grid shift, so only ratios and log-domain
//! pairings of φ² against φ⁻² ever reach the floating-point range.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::model::ProblemParams;
use crate::quadrature::{prefix_integral, suffix_integral, RadialGrid, DEFAULT_POINTS};
use crate::trial::{TrialFunction, TrialKind, TrialMeta};
use crate::trial_two::{RootChoice, TrialTwoOptions, DEFAULT_REVISED_A};

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_ORDERS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    F,
    Tau,
}

/// Normalization point r_C of the f-iteration, where fₙ(r_C) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormPoint {
    Zero,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub orders: usize,
    pub tol: f64,
    pub n_points: usize,
    pub r_max: Option<f64>,
    /// None picks the per-trial default, see [`default_norm_point`].
    pub r_c: Option<NormPoint>,
    pub root_choice: RootChoice,
    pub revised_a: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            orders: DEFAULT_ORDERS,
            tol: DEFAULT_TOL,
            n_points: DEFAULT_POINTS,
            r_max: None,
            r_c: None,
            root_choice: RootChoice::Larger,
            revised_a: DEFAULT_REVISED_A,
        }
    }
}

/// Normalization point that reproduces the published f-iteration
/// sequences: r_C = ∞ for trial I and r_C = 0 for trial II.
pub fn default_norm_point(kind: TrialKind) -> NormPoint {
    match kind {
        TrialKind::One => NormPoint::Infinity,
        TrialKind::Two => NormPoint::Zero,
    }
}

impl SolveOptions {
    pub fn norm_point(&self, kind: TrialKind) -> NormPoint {
        self.r_c.unwrap_or_else(|| default_norm_point(kind))
    }

    pub fn trial_two(&self) -> TrialTwoOptions {
        TrialTwoOptions { root_choice: self.root_choice, revised_a: self.revised_a }
    }
}

/// One order of either scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    pub order: usize,
    pub delta: f64,
    /// fₙ for the f-iteration, τ'ₙ for the τ-iteration.
    pub profile: Vec<f64>,
    pub method: Method,
}

impl IterationState {
    pub fn initial(method: Method, len: usize) -> Self {
        let fill = match method {
            Method::F => 1.0,
            Method::Tau => 0.0,
        };
        Self { order: 0, delta: 0.0, profile: vec![fill; len], method }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub method: Method,
    /// E₀ … Eₙ with Eₙ = gE₀ + Δₙ.
    pub energies: Vec<f64>,
    pub deltas: Vec<f64>,
    pub converged: bool,
    pub iterations_used: usize,
    pub r_max: f64,
    pub nodes: Vec<f64>,
    /// ψ/φ at the nodes (fₙ or e^{−τₙ}), unnormalized.
    pub correction: Vec<f64>,
    /// φ at the nodes, peak-normalized to 1.
    pub phi: Vec<f64>,
    /// ψ at the nodes, peak-normalized to 1.
    pub final_psi: Vec<f64>,
    pub trial_meta: TrialMeta,
}

impl SolveResult {
    pub fn final_energy(&self) -> f64 {
        *self.energies.last().expect("energies never empty")
    }

    pub fn psi_argmax(&self) -> usize {
        argmax(&self.final_psi)
    }
}

fn argmax(v: &[f64]) -> usize {
    v.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc }).0
}

const DEGENERATE_FLOOR: f64 = 1e-300;

fn ratio(num: f64, den: f64) -> Result<f64> {
    if den.abs() < DEGENERATE_FLOOR {
        return Err(SolverError::Degenerate("vanishing normalization integral".into()));
    }
    Ok(num / den)
}

/// Δₙ of the f-iteration: ∫w h fₙ₋₁ / ∫w fₙ₋₁.
pub fn delta_f(grid: &RadialGrid, h_values: &[f64], f_prev: &[f64]) -> Result<f64> {
    let hf: Vec<f64> = h_values.iter().zip(f_prev).map(|(h, f)| h * f).collect();
    ratio(grid.integrate_scaled(&hf), grid.integrate_scaled(f_prev))
}

/// 2 · r^{−2k} φ^{−2}(r) · ∫₀^r w·density, formed in the log domain. The
/// density must integrate to zero over the grid. Beyond the weight peak the
/// integral is taken as −∫_r^∞, with the piece past r_max supplied by its
/// leading asymptotic term w(R)·d(R)/(−L'(R)).
fn divided_inner(grid: &RadialGrid, density: &[f64], what: &'static str) -> Result<Vec<f64>> {
    let mut inner = grid.balanced_prefix(density);
    let n = grid.len();
    let (slope, _) = grid.edge_slope;
    if slope < 0.0 {
        let tail = grid.weight[n - 1] * density[n - 1] / -slope;
        for v in &mut inner[grid.peak + 1..] {
            *v -= tail;
        }
    }
    let mut out = vec![0.0; inner.len()];
    for (i, (&v, &lw)) in inner.iter().zip(&grid.log_weight).enumerate() {
        if v == 0.0 || lw == f64::NEG_INFINITY {
            continue;
        }
        let mag = (v.abs().ln() + grid.shift - lw).exp();
        if !mag.is_finite() {
            return Err(SolverError::Overflow(what));
        }
        out[i] = 2.0 * v.signum() * mag;
    }
    Ok(out)
}

/// ∫_R^∞ of the outer integrand, taken as a power law matched at R. The
/// integrand behaves like 2d/L' there, so its decay exponent is R·L''/L'.
fn outer_tail(grid: &RadialGrid, outer: &[f64]) -> f64 {
    let (d1, d2) = grid.edge_slope;
    let r = grid.r_max;
    let p = r * d2 / d1;
    if !(d1 < 0.0 && p > 1.0) {
        return 0.0;
    }
    outer[grid.len() - 1] * r / (p - 1.0)
}

/// fₙ from fₙ₋₁ and Δₙ, normalized to 1 at `r_c`.
pub fn update_f(grid: &RadialGrid, h_values: &[f64], f_prev: &[f64], delta: f64, r_c: NormPoint) -> Result<Vec<f64>> {
    let density: Vec<f64> = h_values.iter().zip(f_prev).map(|(h, f)| (delta - h) * f).collect();
    let outer = divided_inner(grid, &density, "f-iteration outer integrand")?;
    let f = match r_c {
        NormPoint::Zero => prefix_integral(&outer, grid.step).into_iter().map(|v| 1.0 - v).collect(),
        NormPoint::Infinity => {
            let tail = outer_tail(grid, &outer);
            suffix_integral(&outer, grid.step).into_iter().map(|v| 1.0 + v + tail).collect::<Vec<_>>()
        }
    };
    Ok(f)
}

/// Mantissa of ∫ r^{2k} φ² dr; fixed for a whole τ-iteration.
pub fn tau_norm(grid: &RadialGrid) -> f64 {
    grid.integrate_scaled(&vec![1.0; grid.len()])
}

/// Δₙ of the τ-iteration with the cached normalization `norm`.
pub fn delta_tau(grid: &RadialGrid, h_values: &[f64], tau_prime_prev: &[f64], norm: f64) -> Result<f64> {
    let d: Vec<f64> = h_values.iter().zip(tau_prime_prev).map(|(h, t)| h - 0.5 * t * t).collect();
    ratio(grid.integrate_scaled(&d), norm)
}

/// τ'ₙ from τ'ₙ₋₁ and Δₙ; τ'ₙ(0) = 0.
pub fn update_tau(grid: &RadialGrid, h_values: &[f64], tau_prime_prev: &[f64], delta: f64) -> Result<Vec<f64>> {
    let density: Vec<f64> = h_values.iter().zip(tau_prime_prev).map(|(h, t)| (delta - h) + 0.5 * t * t).collect();
    divided_inner(grid, &density, "tau-iteration profile")
}

/// Samples h on the grid nodes.
pub fn h_on_grid(trial: &TrialFunction, grid: &RadialGrid) -> Result<Vec<f64>> {
    grid.nodes.par_iter().map(|&r| trial.h(r)).collect()
}

/// A trial function together with its grid and sampled correction.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub trial: TrialFunction,
    pub grid: RadialGrid,
    pub h_values: Vec<f64>,
    pub kind: TrialKind,
}

pub fn prepare(p: ProblemParams, kind: TrialKind, opts: &SolveOptions) -> Result<Prepared> {
    let trial = TrialFunction::build(p, kind, opts.trial_two())?;
    let grid = RadialGrid::build(&p, |r| trial.log_phi(r), opts.n_points, opts.r_max)?;
    let h_values = h_on_grid(&trial, &grid)?;
    Ok(Prepared { trial, grid, h_values, kind })
}

/// Runs one scheme from a prepared trial function.
pub fn iterate(prep: &Prepared, method: Method, opts: &SolveOptions) -> Result<SolveResult> {
    if opts.orders < 1 {
        return Err(SolverError::ParameterDomain("orders must be >= 1".into()));
    }
    let Prepared { trial, grid, h_values, kind } = prep;
    let r_c = opts.norm_point(*kind);
    let base = trial.base_energy();
    let mut energies = vec![base];
    let mut deltas = vec![0.0];
    let mut state = IterationState::initial(method, grid.len());
    let mut converged = false;

    let h_scale = h_values.iter().fold(0.0f64, |m, h| m.max(h.abs()));
    if h_scale <= 1e-12 * base.abs().max(1.0) {
        // trial function is already exact
        converged = true;
    } else {
        let norm = tau_norm(grid);
        for order in 1..=opts.orders {
            let (delta, profile) = match method {
                Method::F => {
                    let d = delta_f(grid, h_values, &state.profile)?;
                    (d, update_f(grid, h_values, &state.profile, d, r_c)?)
                }
                Method::Tau => {
                    let d = delta_tau(grid, h_values, &state.profile, norm)?;
                    (d, update_tau(grid, h_values, &state.profile, d)?)
                }
            };
            state = IterationState { order, delta, profile, method };
            let e = base + delta;
            let prev = *energies.last().unwrap();
            energies.push(e);
            deltas.push(delta);
            if !e.is_finite() {
                return Err(SolverError::Overflow("energy sequence"));
            }
            if (e - prev).abs() < opts.tol {
                converged = true;
                break;
            }
        }
    }

    let correction = match method {
        Method::F => state.profile.clone(),
        Method::Tau => {
            let tau = prefix_integral(&state.profile, grid.step);
            tau.iter().map(|t| (-t).exp()).collect()
        }
    };
    let phi_peak = grid.log_phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let phi: Vec<f64> = grid.log_phi.iter().map(|l| (l - phi_peak).exp()).collect();
    let raw: Vec<f64> = phi.iter().zip(&correction).map(|(p, c)| p * c).collect();
    let peak = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(SolverError::Degenerate("wave function has no positive peak".into()));
    }
    let final_psi = raw.iter().map(|v| v / peak).collect();

    Ok(SolveResult {
        method,
        iterations_used: deltas.len() - 1,
        energies,
        deltas,
        converged,
        r_max: grid.r_max,
        nodes: grid.nodes.clone(),
        correction,
        phi,
        final_psi,
        trial_meta: trial.meta(),
    })
}

/// Builds the trial function (revised mode selected automatically), the
/// grid, and runs the chosen scheme until |Eₙ − Eₙ₋₁| < tol or the order
/// budget is spent. Non-convergence is reported in the result.
pub fn solve(p: ProblemParams, kind: TrialKind, method: Method, opts: &SolveOptions) -> Result<SolveResult> {
    let prep = prepare(p, kind, opts)?;
    iterate(&prep, method, opts)
}

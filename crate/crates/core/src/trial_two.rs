//! Trial function II: a WKB-like state
//!
//! φ(r) = ((r0 + a)/(r + a))^k · exp(−g 𝒮₀(r) − 𝒮₁(r)),
//!
//! with 𝒮₀' = (r² − r0²)√(r² + A r0²) and 𝒮₁ chosen so that h(r) carries no
//! positive powers of r. The prefactor parameter `a` is a root of a quadratic
//! that enforces φ'(0) = 0. When that quadratic has no admissible root the
//! revised state φ_rev = φ + ξ φ₋ (for r < r0) restores the boundary
//! condition instead, φ₋ being φ with 𝒮₀(r) replaced by 𝒮₀(−r).

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::model::ProblemParams;

/// Prefactor parameter used in revised mode, where the quadratic for `a`
/// has no real root. Reproduces the reported revised-mode base energies.
pub const DEFAULT_REVISED_A: f64 = 3.0;

/// Offsets used to extrapolate h(r) to the origin.
const ZERO_PROBES: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// Largest 1/r coefficient accepted as cancelled. The three-point fit
/// carries a bias of order h''(0)·ε₁ε₂ε₃ ≈ 1e-10·h''(0).
const POLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RootChoice {
    #[default]
    Larger,
    Smaller,
}

/// k a² + b a + c = 0, the condition φ'(0) = 0 written in `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefactorQuadratic {
    pub quad: f64,
    pub lin: f64,
    pub constant: f64,
}

impl PrefactorQuadratic {
    pub fn new(p: &ProblemParams) -> Self {
        let sa = p.a.sqrt();
        let q = (1.0 + p.a).sqrt();
        Self {
            quad: p.k,
            lin: (p.r0 * q - p.g * p.r0.powi(5) * p.a) * (sa + q),
            constant: p.k * p.r0_sq() * (p.a + (p.a * (1.0 + p.a)).sqrt()),
        }
    }

    pub fn discriminant(&self) -> f64 {
        self.lin * self.lin - 4.0 * self.quad * self.constant
    }

    pub fn eval(&self, a: f64) -> f64 {
        (self.quad * a + self.lin) * a + self.constant
    }

    /// Scale used to judge root residuals.
    pub fn scale(&self, a: f64) -> f64 {
        (self.quad * a * a).abs() + (self.lin * a).abs() + self.constant.abs()
    }

    /// Real roots, larger first. Uses the cancellation-free form.
    pub fn real_roots(&self) -> Option<(f64, f64)> {
        if self.quad == 0.0 {
            return None;
        }
        let d = self.discriminant();
        if d < 0.0 {
            return None;
        }
        let t = -0.5 * (self.lin + self.lin.signum() * d.sqrt());
        let (x1, x2) = if t == 0.0 { (0.0, 0.0) } else { (t / self.quad, self.constant / t) };
        Some((x1.max(x2), x1.min(x2)))
    }

    /// Real part of the complex pair, −b / (2k).
    pub fn vertex(&self) -> f64 {
        -self.lin / (2.0 * self.quad)
    }
}

/// Outcome of solving for the prefactor parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefactorRoots {
    /// Positive real roots, larger first.
    pub roots: Vec<f64>,
    pub discriminant: f64,
    pub feasible: bool,
    pub selected: Option<f64>,
}

/// Solves for `a`. Infeasibility (no positive real root) is a returned
/// state; downstream it switches the trial function to revised mode.
pub fn solve_a(p: &ProblemParams, choice: RootChoice) -> PrefactorRoots {
    let quad = PrefactorQuadratic::new(p);
    let discriminant = if p.k == 0.0 { f64::NEG_INFINITY } else { quad.discriminant() };
    let roots: Vec<f64> = match quad.real_roots() {
        Some((hi, lo)) => [hi, lo].into_iter().filter(|&x| x > 0.0).collect(),
        None => Vec::new(),
    };
    let feasible = !roots.is_empty();
    let selected = match (choice, roots.as_slice()) {
        (_, []) => None,
        (RootChoice::Larger, [hi, ..]) => Some(*hi),
        (RootChoice::Smaller, rs) => rs.last().copied(),
    };
    PrefactorRoots { roots, discriminant, feasible, selected }
}

/// Resolved construction data of trial function II.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialTwoConfig {
    pub a: f64,
    pub xi: Option<f64>,
    pub revised: bool,
    pub e0_parts: [f64; 3],
    pub root_choice: RootChoice,
}

/// 𝒮₀ and its derivatives. Well defined for negative r.
pub fn s0_two(p: &ProblemParams, r: f64) -> f64 {
    let ar2 = p.a * p.r0_sq();
    let r02 = p.r0_sq();
    let s = (r * r + ar2).sqrt();
    // ln(r + s), using (r + s)(s − r) = A r0² when r < 0
    let log_term = if r >= 0.0 { (r + s).ln() } else { ar2.ln() - (s - r).ln() };
    0.125 * r * s * (2.0 * r * r + ar2 - 4.0 * r02) - 0.125 * (p.a * p.a + 4.0 * p.a) * r02 * r02 * log_term
}

pub fn s0_prime_two(p: &ProblemParams, r: f64) -> f64 {
    (r * r - p.r0_sq()) * (r * r + p.a * p.r0_sq()).sqrt()
}

pub fn s0_second_two(p: &ProblemParams, r: f64) -> f64 {
    let s = (r * r + p.a * p.r0_sq()).sqrt();
    2.0 * r * s + (r * r - p.r0_sq()) * r / s
}

pub fn s1_two(p: &ProblemParams, a: f64, r: f64) -> f64 {
    let r0 = p.r0;
    let ar2 = p.a * p.r0_sq();
    let s = (r * r + ar2).sqrt();
    let q = (1.0 + p.a).sqrt();
    let ratio = (q * s + r + p.a * r0) / (q * s - r + p.a * r0);
    (r + r0).ln() + 0.25 * (r * r + ar2).ln() + (0.5 + p.k * a / (2.0 * r0)) * ratio.ln()
}

/// The three terms of 𝒮₁' (the last one carries the factor k a).
fn s1_prime_terms(p: &ProblemParams, a: f64, r: f64) -> [f64; 3] {
    let r02 = p.r0_sq();
    let s2 = r * r + p.a * r02;
    let s = s2.sqrt();
    let q = (1.0 + p.a).sqrt();
    [(r * r + (1.0 + p.a) * r02) / (s * (r * s + r02 * q)), r / (2.0 * s2), p.k * a / (s * (s + p.r0 * q))]
}

pub fn s1_prime_two(p: &ProblemParams, a: f64, r: f64) -> f64 {
    s1_prime_terms(p, a, r).iter().sum()
}

pub fn s1_second_two(p: &ProblemParams, a: f64, r: f64) -> f64 {
    let r02 = p.r0_sq();
    let s2 = r * r + p.a * r02;
    let s = s2.sqrt();
    let q = (1.0 + p.a).sqrt();
    let num1 = r * r + (1.0 + p.a) * r02;
    let den1 = r * s2 + r02 * q * s;
    let dden1 = s2 + 2.0 * r * r + r02 * q * r / s;
    let t1 = (2.0 * r * den1 - num1 * dden1) / (den1 * den1);
    let t2 = (p.a * r02 - r * r) / (2.0 * s2 * s2);
    let den3 = s2 + p.r0 * q * s;
    let t3 = -p.k * a * (2.0 * r + p.r0 * q * r / s) / (den3 * den3);
    t1 + t2 + t3
}

/// ½(𝒮₁'² − 𝒮₁'') in closed form: the rational block in γ/(α + β) plus the
/// cross and self terms of the k·a component.
pub fn s1_block_closed(p: &ProblemParams, a: f64, r: f64) -> f64 {
    let big_a = p.a;
    let r0 = p.r0;
    let r02 = p.r0_sq();
    let r04 = r02 * r02;
    let r2 = r * r;
    let s2 = r2 + big_a * r02;
    let s = s2.sqrt();
    let q = (1.0 + big_a).sqrt();
    let ka = p.k * a;

    let gamma = 225.0 * r2.powi(4)
        + 270.0 * (1.0 + 2.0 * big_a) * r2.powi(3) * r02
        + 3.0 * (188.0 * big_a * big_a + 216.0 * big_a - 5.0) * r2 * r2 * r04
        + 36.0 * big_a * (8.0 * big_a * big_a + 10.0 * big_a - 1.0) * r2 * r04 * r02
        + 4.0 * big_a * big_a * (4.0 * big_a + 1.0).powi(2) * r04 * r04;
    let alpha = 15.0 * r2.powi(3)
        + (18.0 * big_a - 6.0) * r2 * r2 * r02
        + (8.0 * big_a * big_a + 12.0 * big_a + 7.0) * r2 * r04
        + (8.0 * big_a * big_a + 2.0 * big_a) * r04 * r02;
    let beta = 8.0 * q * r02 * r * (3.0 * r2 + (2.0 * big_a - 1.0) * r02) * s;
    let pure = gamma / (8.0 * s2 * s2 * (alpha + beta));

    let w = s + r0 * q;
    let rs = r * s + r02 * q;
    let cross = ka * (2.0 * s * (r2 + (1.0 + big_a) * r02) + r * rs) / (2.0 * s2 * s * w * rs);
    let self_sq = ka * ka / (2.0 * s2 * w * w);
    let self_curv = ka * r * (2.0 * s + r0 * q) / (2.0 * s2 * s * w * w);
    pure + cross + self_sq + self_curv
}

/// The same block from 𝒮₁' and its analytic derivative.
pub fn s1_block_direct(p: &ProblemParams, a: f64, r: f64) -> f64 {
    let d1 = s1_prime_two(p, a, r);
    0.5 * (d1 * d1 - s1_second_two(p, a, r))
}

/// Base-energy parts (E₀⁽¹⁾, E₀⁽²⁾, E₀⁽³⁾) for a given prefactor parameter.
pub fn e0_parts(p: &ProblemParams, a: f64) -> [f64; 3] {
    let q = (1.0 + p.a).sqrt();
    [p.r0_sq() * q, p.k * a * p.r0 * q, -p.k * a * a]
}

/// Trial function II bound to its parameters and configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialTwo {
    pub params: ProblemParams,
    pub cfg: TrialTwoConfig,
}

/// Construction knobs for trial function II.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialTwoOptions {
    pub root_choice: RootChoice,
    pub revised_a: f64,
}

impl Default for TrialTwoOptions {
    fn default() -> Self {
        Self { root_choice: RootChoice::Larger, revised_a: DEFAULT_REVISED_A }
    }
}

impl TrialTwo {
    /// Picks `a` from the quadratic, falling back to revised mode (with
    /// `opts.revised_a` and ξ from [`fix_xi`]) when no positive root exists.
    pub fn build(params: ProblemParams, opts: TrialTwoOptions) -> Result<Self> {
        let sol = solve_a(&params, opts.root_choice);
        match sol.selected {
            Some(a) => Ok(Self::with_a(params, a, opts.root_choice)),
            None => {
                let a = opts.revised_a;
                if !(a > 0.0) {
                    return Err(SolverError::ParameterDomain(format!(
                        "revised-mode prefactor parameter must be > 0, got {a}"
                    )));
                }
                let xi = fix_xi(&params, a)?;
                Ok(Self {
                    params,
                    cfg: TrialTwoConfig {
                        a,
                        xi: Some(xi),
                        revised: true,
                        e0_parts: e0_parts(&params, a),
                        root_choice: opts.root_choice,
                    },
                })
            }
        }
    }

    /// Plain (non-revised) trial function with an explicit `a`.
    pub fn with_a(params: ProblemParams, a: f64, root_choice: RootChoice) -> Self {
        Self {
            params,
            cfg: TrialTwoConfig { a, xi: None, revised: false, e0_parts: e0_parts(&params, a), root_choice },
        }
    }

    /// Revised trial function with explicit `a` and ξ.
    pub fn revised_with(params: ProblemParams, a: f64, xi: f64) -> Self {
        Self {
            params,
            cfg: TrialTwoConfig {
                a,
                xi: Some(xi),
                revised: true,
                e0_parts: e0_parts(&params, a),
                root_choice: RootChoice::default(),
            },
        }
    }

    fn prefactor_log(&self, r: f64) -> f64 {
        let a = self.cfg.a;
        if self.params.k == 0.0 {
            0.0
        } else {
            self.params.k * ((self.params.r0 + a) / (r + a)).ln()
        }
    }

    /// log φ of the plain function.
    pub fn log_phi_plain(&self, r: f64) -> f64 {
        self.prefactor_log(r) - self.params.g * s0_two(&self.params, r) - s1_two(&self.params, self.cfg.a, r)
    }

    /// log φ₋, with 𝒮₀ evaluated at −r.
    pub fn log_phi_minus(&self, r: f64) -> f64 {
        self.prefactor_log(r) - self.params.g * s0_two(&self.params, -r) - s1_two(&self.params, self.cfg.a, r)
    }

    /// (log φ)' and (log φ)'' of the plain function.
    pub fn plain_derivs(&self, r: f64) -> (f64, f64) {
        let p = &self.params;
        let a = self.cfg.a;
        let inv = 1.0 / (r + a);
        let d1 = -p.k * inv - p.g * s0_prime_two(p, r) - s1_prime_two(p, a, r);
        let d2 = p.k * inv * inv - p.g * s0_second_two(p, r) - s1_second_two(p, a, r);
        (d1, d2)
    }

    /// (log φ₋)' and (log φ₋)''.
    pub fn minus_derivs(&self, r: f64) -> (f64, f64) {
        let p = &self.params;
        let a = self.cfg.a;
        let inv = 1.0 / (r + a);
        let d1 = -p.k * inv + p.g * s0_prime_two(p, r) - s1_prime_two(p, a, r);
        let d2 = p.k * inv * inv + p.g * s0_second_two(p, r) - s1_second_two(p, a, r);
        (d1, d2)
    }

    /// log(1 + ξ φ₋/φ) at r, the revised-mode mixing factor.
    fn mix_log(&self, xi: f64, r: f64) -> f64 {
        (xi * (self.log_phi_minus(r) - self.log_phi_plain(r)).exp()).ln_1p()
    }

    pub fn log_phi(&self, r: f64) -> f64 {
        match self.cfg.xi {
            Some(xi) if self.cfg.revised => {
                let rm = r.min(self.params.r0);
                self.log_phi_plain(r) + self.mix_log(xi, rm)
            }
            _ => self.log_phi_plain(r),
        }
    }

    /// g·E₀ = g(E₀⁽¹⁾ + E₀⁽²⁾ + E₀⁽³⁾).
    pub fn base_energy(&self) -> f64 {
        self.params.g * self.cfg.e0_parts.iter().sum::<f64>()
    }

    /// h of the plain function in closed form, signed so that
    /// (−½Δ_k + V − h)φ = gE₀ φ.
    pub fn h_plain(&self, r: f64) -> f64 {
        let p = &self.params;
        let (k, g, a) = (p.k, p.g, self.cfg.a);
        let r02 = p.r0_sq();
        let s = (r * r + p.a * r02).sqrt();
        let rra = r * (r + a);
        let block = s1_block_closed(p, a, r);
        -(block + 0.5 * k * (k + 1.0) / ((r + a) * (r + a)) - k * a * s1_prime_two(p, a, r) / rra - k * k / rra
            + k * a * g * (r02 - a * a) * s / rra
            + k * a * a * g * p.a * r02 / (r * (s + r)))
    }

    /// h_rev − h on r < r0, divided by ξ φ₋/φ_rev.
    fn revised_source(&self, r: f64) -> f64 {
        let p = &self.params;
        let (k, g, a) = (p.k, p.g, self.cfg.a);
        let r02 = p.r0_sq();
        let s = (r * r + p.a * r02).sqrt();
        let e0: f64 = self.cfg.e0_parts.iter().sum();
        -2.0 * g * (e0 + k * a * (a * a - r02) * s / (r * (r + a)) - k * a * a * p.a * r02 / (r * (s + r)))
    }

    /// Potential correction at r > 0 (h_rev inside r0 in revised mode).
    pub fn h(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(SolverError::NonPositiveRadius(r));
        }
        Ok(self.h_unchecked(r))
    }

    fn h_unchecked(&self, r: f64) -> f64 {
        let base = self.h_plain(r);
        match self.cfg.xi {
            Some(xi) if self.cfg.revised && r < self.params.r0 => {
                let ratio = xi * (self.log_phi_minus(r) - self.log_phi_plain(r)).exp();
                base + self.revised_source(r) * ratio / (1.0 + ratio)
            }
            _ => base,
        }
    }

    /// Same correction assembled from the log-derivatives of φ (and φ₋):
    /// h = −½(s'' + s'² + 2k s'/r) + V − gE₀.
    pub fn h_from_derivatives(&self, r: f64) -> f64 {
        let p = &self.params;
        let e = self.base_energy();
        let v = p.potential(r);
        let from = |(d1, d2): (f64, f64)| crate::model::kinetic_ratio(p.k, r, d1, d2) + v - e;
        let hp = from(self.plain_derivs(r));
        match self.cfg.xi {
            Some(xi) if self.cfg.revised && r < p.r0 => {
                let hm = from(self.minus_derivs(r));
                let ratio = xi * (self.log_phi_minus(r) - self.log_phi_plain(r)).exp();
                (hp + hm * ratio) / (1.0 + ratio)
            }
            _ => hp,
        }
    }

    /// Finite r → 0 limit of h. Extrapolates from three small radii and
    /// fails if a residual 1/r pole is detected.
    pub fn h_at_zero(&self) -> Result<f64> {
        let [e1, e2, e3] = ZERO_PROBES;
        let (h1, h2, h3) = (self.h_unchecked(e1), self.h_unchecked(e2), self.h_unchecked(e3));
        // fit h(ε) = c/ε + h0 + h1 ε through the probes to expose a pole
        let pole = pole_coefficient([e1, e2, e3], [h1, h2, h3]);
        let r1a = 2.0 * h2 - h1;
        let r1b = 2.0 * h3 - h2;
        let limit = (4.0 * r1b - r1a) / 3.0;
        if !limit.is_finite() || pole.abs() > POLE_TOLERANCE * limit.abs().max(1.0) {
            return Err(SolverError::Singularity { pole });
        }
        Ok(limit)
    }
}

fn pole_coefficient(eps: [f64; 3], vals: [f64; 3]) -> f64 {
    // divided differences of ε·h(ε) = c + h0 ε + h1 ε²; c is the intercept
    let y: Vec<f64> = eps.iter().zip(vals).map(|(e, v)| e * v).collect();
    let d01 = (y[1] - y[0]) / (eps[1] - eps[0]);
    let d12 = (y[2] - y[1]) / (eps[2] - eps[1]);
    let d012 = (d12 - d01) / (eps[2] - eps[0]);
    y[0] - eps[0] * d01 + eps[0] * eps[1] * d012
}

/// ξ = −φ'(0)/φ₋'(0) for a revised trial function with prefactor `a`.
pub fn fix_xi(p: &ProblemParams, a: f64) -> Result<f64> {
    let sa = p.a.sqrt();
    let s0p0 = -p.r0_sq() * sa * p.r0;
    let s1p0 = s1_prime_two(p, a, 0.0);
    let k_over_a = p.k / a;
    let plus = -k_over_a - p.g * s0p0 - s1p0;
    let minus = -k_over_a + p.g * s0p0 - s1p0;
    if minus == 0.0 {
        return Err(SolverError::Degenerate("phi_minus'(0) vanishes".into()));
    }
    // φ(0) = φ₋(0), so the ratio of log-derivatives is the ratio of derivatives
    Ok(-plus / minus)
}

pub fn log_phi_two(t: &TrialTwo, r: f64) -> f64 {
    t.log_phi(r)
}

pub fn h_two(t: &TrialTwo, r: f64) -> Result<f64> {
    t.h(r)
}

pub fn h_two_at_zero(t: &TrialTwo) -> Result<f64> {
    t.h_at_zero()
}

pub fn base_energy_two(t: &TrialTwo) -> f64 {
    t.base_energy()
}

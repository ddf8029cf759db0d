//! Trial function I: φ = exp(−S₀) with S₀ = (g/4) r⁴ + c r² + m log(r² + 1).
//!
//! The coefficients cancel every positive power of r in h(r), leaving a
//! correction that is finite and vanishes like 1/r² at infinity.

use serde::{Deserialize, Serialize};

use crate::model::ProblemParams;

/// Coefficients of the exponent. `e` and `alpha` only fix normalization and
/// are frozen at 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOneCoeffs {
    pub a4: f64,
    pub c: f64,
    pub m: f64,
    pub e: f64,
    pub alpha: f64,
}

pub fn coeffs_one(p: &ProblemParams) -> TrialOneCoeffs {
    let r02 = p.r0_sq();
    let r04 = r02 * r02;
    let ap2 = p.a + 2.0;
    TrialOneCoeffs {
        a4: p.g / 4.0,
        c: 0.25 * p.g * (p.a - 2.0) * r02,
        m: 0.25 * (p.g + 3.0) * r04 - p.g * ap2 * ap2 * r04 / 16.0,
        e: 0.0,
        alpha: 1.0,
    }
}

/// Trial function I bound to its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOne {
    pub params: ProblemParams,
    pub coeffs: TrialOneCoeffs,
}

impl TrialOne {
    pub fn new(params: ProblemParams) -> Self {
        Self { params, coeffs: coeffs_one(&params) }
    }

    /// log φ(r) = −S₀(r).
    pub fn log_phi(&self, r: f64) -> f64 {
        let TrialOneCoeffs { a4, c, m, .. } = self.coeffs;
        let r2 = r * r;
        -(a4 * r2 * r2 + c * r2) - m * r2.ln_1p()
    }

    /// (log φ)' and (log φ)'' in closed form.
    pub fn log_phi_derivs(&self, r: f64) -> (f64, f64) {
        let TrialOneCoeffs { a4, c, m, .. } = self.coeffs;
        let r2 = r * r;
        let u = r2 + 1.0;
        let d1 = -(4.0 * a4 * r2 * r + 2.0 * c * r) - 2.0 * m * r / u;
        let d2 = -(12.0 * a4 * r2 + 2.0 * c) - 2.0 * m * (1.0 - r2) / (u * u);
        (d1, d2)
    }

    pub fn h(&self, r: f64) -> f64 {
        let p = &self.params;
        let m = self.coeffs.m;
        let u = r * r + 1.0;
        let lin = m * p.g * (p.a - 2.0) * p.r0_sq() - 2.0 * m * p.g + 2.0 * m * p.k - 2.0 * m * m - m;
        2.0 * m * (m + 1.0) / (u * u) + lin / u
    }

    /// g·E₀ of the trial equation.
    pub fn base_energy(&self) -> f64 {
        let p = &self.params;
        let m = self.coeffs.m;
        let r06 = p.r0.powi(6);
        0.5 * p.a * p.g * p.g * r06 + 2.0 * m * p.g + (2.0 * p.k + 1.0 - 4.0 * m) * 0.25 * p.g * (p.a - 2.0) * p.r0_sq()
    }
}

pub fn log_phi_one(p: &ProblemParams, r: f64) -> f64 {
    TrialOne::new(*p).log_phi(r)
}

pub fn h_one(p: &ProblemParams, r: f64) -> f64 {
    TrialOne::new(*p).h(r)
}

pub fn base_energy_one(p: &ProblemParams) -> f64 {
    TrialOne::new(*p).base_energy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_params, schroedinger_residual, DEFAULT_FD_STEP};

    fn tp(g: f64, a: f64) -> TrialOne {
        TrialOne::new(make_params(3, g, a).unwrap())
    }

    #[test]
    fn coefficients() {
        let c = tp(1.0, 2.0).coeffs;
        assert_eq!(c.c, 0.0);
        assert!(c.m.abs() < 1e-15);
        assert_eq!(c.a4, 0.25);

        let c = tp(0.5, 2.0).coeffs;
        assert_eq!(c.c, 0.0);
        assert!((c.m - 0.625).abs() < 1e-14);

        let t = tp(1.0, 1.0);
        assert!((t.coeffs.c + 0.25 * t.params.r0_sq()).abs() < 1e-15);
    }

    #[test]
    fn log_phi_values() {
        let exact = tp(1.0, 2.0);
        for r in [0.0, 0.7, 1.3, 2.9] {
            assert!((exact.log_phi(r) + r.powi(4) / 4.0).abs() < 1e-14);
        }
        assert_eq!(tp(0.5, 2.0).log_phi(0.0), 0.0);
        let want = -0.125 - 0.625 * 2f64.ln();
        assert!((tp(0.5, 2.0).log_phi(1.0) - want).abs() < 1e-14);
    }

    #[test]
    fn h_values() {
        let exact = tp(1.0, 2.0);
        for r in [0.0, 1.0, 3.0] {
            assert!(exact.h(r).abs() < 1e-14);
        }
        let t = tp(1.0, 3.0);
        let m = t.coeffs.m;
        let r02 = t.params.r0_sq();
        let want = 2.0 * m * (m + 1.0) + (m * r02 - 2.0 * m + 2.0 * m - 2.0 * m * m - m);
        assert!((t.h(0.0) - want).abs() < 1e-13);
        for (g, a) in [(0.5, 2.0), (2.0, 2.0), (1.0, 3.0)] {
            assert!(tp(g, a).h(40.0).abs() < 1e-2);
            assert!(tp(g, a).h(1e4).abs() < 1e-6);
        }
    }

    #[test]
    fn base_energies_match_reported_values() {
        assert!((tp(1.0, 2.0).base_energy() - 2.1517).abs() < 5e-5);
        assert!((tp(0.5, 2.0).base_energy() - 1.1629).abs() < 5e-5);
        assert!((tp(1.0, 1.0).base_energy() - 2.5073).abs() < 5e-5);
    }

    #[test]
    fn h_sign_for_unit_coupling() {
        for a in [1.0, 3.0] {
            let t = tp(1.0, a);
            for i in 0..=6000 {
                let r = i as f64 * 1e-3;
                assert!(t.h(r) < 0.0, "A={a} r={r} h={}", t.h(r));
            }
        }
        // just below A = 2, h(0) = m (1 + (A − 2) r0²) with m > 0, so h is
        // positive near the origin and negative in the tail
        let t = tp(1.0, 1.9);
        assert!(t.coeffs.m > 0.0);
        assert!(t.h(0.0) > 0.0);
        assert!(t.h(3.0) < 0.0);
    }

    #[test]
    fn closed_form_derivatives_match_differences() {
        let t = tp(0.7, 2.6);
        for r in [0.3, 1.1, 2.4] {
            let (d1, d2) = t.log_phi_derivs(r);
            let e = 1e-4;
            let fd1 = (t.log_phi(r + e) - t.log_phi(r - e)) / (2.0 * e);
            let fd2 = (t.log_phi(r + e) - 2.0 * t.log_phi(r) + t.log_phi(r - e)) / (e * e);
            assert!((d1 - fd1).abs() < 1e-7);
            assert!((d2 - fd2).abs() < 1e-5);
        }
    }

    #[test]
    fn residual_vanishes() {
        for (dim, g, a) in [
            (3, 1.0, 2.0),
            (3, 0.5, 2.0),
            (3, 0.93, 2.0),
            (3, 2.0, 2.0),
            (3, 1.0, 1.0),
            (3, 1.0, 1.9),
            (3, 1.0, 3.0),
            (1, 0.8, 1.5),
            (4, 1.3, 2.5),
        ] {
            let t = tp(g, a);
            let t = TrialOne::new(make_params(dim, t.params.g, t.params.a).unwrap());
            for i in 0..50 {
                let r = 0.1 + 2.9 * i as f64 / 49.0;
                if r > 3.0 {
                    break;
                }
                let res =
                    schroedinger_residual(&t.params, |x| t.log_phi(x), |x| t.h(x), t.base_energy(), r, DEFAULT_FD_STEP)
                        .unwrap();
                assert!(res.abs() < 1e-6, "N={dim} g={g} A={a} r={r} R={res}");
            }
        }
    }
}

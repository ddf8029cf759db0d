//! Independent finite-difference ground-state energy.
//!
//! With u = r^k ψ the radial equation becomes −½u″ + [V + k(k−1)/(2r²)]u =
//! E u, discretized with the three-point stencil into a symmetric
//! tridiagonal matrix whose lowest eigenvalue is isolated by Sturm-sequence
//! bisection. Two resolutions are combined by h² Richardson extrapolation.

use crate::error::{Result, SolverError};
use crate::model::ProblemParams;
use crate::quadrature::auto_r_max;
use crate::trial_one::log_phi_one;

pub const MIN_NODES: usize = 200;
pub const DEFAULT_NODES: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdProblem {
    pub params: ProblemParams,
    pub r_max: f64,
    pub n: usize,
}

impl FdProblem {
    /// Diagonal and off-diagonal of the discretized operator.
    ///
    /// For k > 0 the interior nodes are r_i = i·h (u(0) = u(r_max) = 0).
    /// For k = 0 the mesh is cell-centred, r_i = (i + ½)h, and ψ'(0) = 0 is
    /// imposed by reflecting the first cell.
    pub fn matrix(&self) -> (Vec<f64>, Vec<f64>) {
        let p = &self.params;
        let n = self.n;
        let centrifugal = p.k * (p.k - 1.0) / 2.0;
        let (h, offset) = if p.k == 0.0 { (self.r_max / n as f64, 0.5) } else { (self.r_max / (n + 1) as f64, 1.0) };
        let inv_h2 = 1.0 / (h * h);
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            let r = (i as f64 + offset) * h;
            let mut d = inv_h2 + p.potential(r);
            if centrifugal != 0.0 {
                d += centrifugal / (r * r);
            }
            diag.push(d);
        }
        if p.k == 0.0 {
            diag[0] -= 0.5 * inv_h2;
        }
        (diag, vec![-0.5 * inv_h2; n - 1])
    }

    pub fn ground_energy(&self) -> Result<f64> {
        let (d, e) = self.matrix();
        lowest_eigenvalue(&d, &e)
    }
}

/// Number of eigenvalues strictly below `x` (negative LDLᵀ pivots).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = if i == 0 { diag[0] - x } else { diag[i] - x - coupling / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue of a symmetric tridiagonal matrix by bisection inside
/// Gershgorin bounds.
pub fn lowest_eigenvalue(diag: &[f64], off: &[f64]) -> Result<f64> {
    let n = diag.len();
    if n == 0 {
        return Err(SolverError::Bracket);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    if !(lo.is_finite() && hi.is_finite()) || sturm_count(diag, off, lo) != 0 || sturm_count(diag, off, hi) < 1 {
        return Err(SolverError::Bracket);
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Raw energies at n and 2n-resolution meshes, plus the extrapolation.
pub fn fd_energies(p: &ProblemParams, r_max: f64, n: usize) -> Result<(f64, f64, f64)> {
    if n < MIN_NODES {
        return Err(SolverError::ParameterDomain(format!("oracle needs n >= {MIN_NODES}, got {n}")));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(SolverError::ParameterDomain(format!("r_max must be > 0, got {r_max}")));
    }
    // halve the spacing exactly: node-based meshes need 2n + 1 interior nodes
    let fine_n = if p.k == 0.0 { 2 * n } else { 2 * n + 1 };
    let coarse = FdProblem { params: *p, r_max, n }.ground_energy()?;
    let fine = FdProblem { params: *p, r_max, n: fine_n }.ground_energy()?;
    Ok((coarse, fine, (4.0 * fine - coarse) / 3.0))
}

/// Extrapolated lowest eigenvalue of the radial problem on (0, r_max).
pub fn fd_ground_energy(p: &ProblemParams, r_max: f64, n: usize) -> Result<f64> {
    fd_energies(p, r_max, n).map(|(_, _, e)| e)
}

/// Oracle with defaults: r_max from the decay of the trial I function and
/// [`DEFAULT_NODES`] interior nodes.
pub fn oracle_energy(p: &ProblemParams, r_max: Option<f64>, n: Option<usize>) -> Result<f64> {
    let r_max = match r_max {
        Some(r) => r,
        None => auto_r_max(p, &|r| log_phi_one(p, r))?,
    };
    fd_ground_energy(p, r_max, n.unwrap_or(DEFAULT_NODES))
}

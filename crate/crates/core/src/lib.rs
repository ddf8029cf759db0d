//! Ground states of the N-dimensional generalized Sombrero potential
//! V(r) = ½ g² (r² − r0²)² (r² + A r0²), r0⁴ = (2 + N)/3, by iterative
//! refinement of analytically constructed trial functions.
//!
//! ```
//! use sombrero::{make_params, solve, Method, SolveOptions, TrialKind};
//!
//! let p = make_params(3, 0.5, 2.0).unwrap();
//! let res = solve(p, TrialKind::One, Method::Tau, &SolveOptions::default()).unwrap();
//! assert!(res.converged);
//! assert!((res.final_energy() - 1.3773).abs() < 2e-4);
//! ```

// `!(x > 0.0)` guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod iteration;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod reference;
pub mod trial;
pub mod trial_one;
pub mod trial_two;

pub use error::{Result, SolverError};
pub use iteration::{solve, Method, NormPoint, SolveOptions, SolveResult};
pub use model::{make_params, potential, schroedinger_residual, ProblemParams};
pub use oracle::fd_ground_energy;
pub use trial::{TrialFunction, TrialKind, TrialMeta};
pub use trial_two::RootChoice;

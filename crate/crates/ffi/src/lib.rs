//! C ABI over the sombrero solver.
//!
//! Results live behind an opaque `SmbResult` handle released with
//! `smb_result_free`. Every fallible entry point returns an `SMB_*` status
//! code; the message of the last failure on the calling thread is available
//! from `smb_last_error`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sombrero::{
    make_params, oracle, solve, Method, NormPoint, RootChoice, SolveOptions, SolveResult, SolverError, TrialKind,
};

pub const SMB_OK: i32 = 0;
pub const SMB_ERR_PARAM: i32 = 1;
pub const SMB_ERR_NUMERIC: i32 = 2;
pub const SMB_ERR_NULL: i32 = 3;
pub const SMB_ERR_PANIC: i32 = 4;

pub const SMB_TRIAL_ONE: i32 = 1;
pub const SMB_TRIAL_TWO: i32 = 2;

pub const SMB_METHOD_F: i32 = 0;
pub const SMB_METHOD_TAU: i32 = 1;

pub const SMB_RC_AUTO: i32 = -1;
pub const SMB_RC_ZERO: i32 = 0;
pub const SMB_RC_INFINITY: i32 = 1;

pub const SMB_ROOT_LARGER: i32 = 0;
pub const SMB_ROOT_SMALLER: i32 = 1;

/// Opaque solve result.
pub struct SmbResult {
    inner: SolveResult,
}

/// Solver settings. Obtain defaults from `smb_default_options`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SmbOptions {
    /// Maximum iteration order.
    pub orders: u32,
    /// Stop when |E_n - E_{n-1}| < tol.
    pub tol: f64,
    /// Odd grid point count.
    pub n_points: usize,
    /// Grid cutoff; <= 0 selects it automatically.
    pub r_max: f64,
    /// One of SMB_RC_*.
    pub r_c: i32,
    /// One of SMB_ROOT_*.
    pub root: i32,
    /// Prefactor parameter used when trial II falls back to revised mode.
    pub revised_a: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(code: i32, msg: &str) -> i32 {
    set_error(msg);
    code
}

fn solver_code(e: &SolverError) -> i32 {
    match e {
        SolverError::ParameterDomain(_) | SolverError::Config(_) | SolverError::BadGrid(_) => SMB_ERR_PARAM,
        _ => SMB_ERR_NUMERIC,
    }
}

/// Runs `f`, turning a panic into SMB_ERR_PANIC.
fn guarded<F: FnOnce() -> i32>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => fail(SMB_ERR_PANIC, "internal panic"),
    }
}

fn to_solve_options(o: &SmbOptions) -> Result<SolveOptions, String> {
    let r_c = match o.r_c {
        SMB_RC_AUTO => None,
        SMB_RC_ZERO => Some(NormPoint::Zero),
        SMB_RC_INFINITY => Some(NormPoint::Infinity),
        v => return Err(format!("invalid r_c {v}")),
    };
    let root_choice = match o.root {
        SMB_ROOT_LARGER => RootChoice::Larger,
        SMB_ROOT_SMALLER => RootChoice::Smaller,
        v => return Err(format!("invalid root {v}")),
    };
    Ok(SolveOptions {
        orders: o.orders as usize,
        tol: o.tol,
        n_points: o.n_points,
        r_max: (o.r_max > 0.0).then_some(o.r_max),
        r_c,
        root_choice,
        revised_a: o.revised_a,
    })
}

/// Default solver settings.
#[no_mangle]
pub extern "C" fn smb_default_options() -> SmbOptions {
    let d = SolveOptions::default();
    SmbOptions {
        orders: d.orders as u32,
        tol: d.tol,
        n_points: d.n_points,
        r_max: 0.0,
        r_c: SMB_RC_AUTO,
        root: SMB_ROOT_LARGER,
        revised_a: d.revised_a,
    }
}

/// Solves for the ground state. On success `*out` receives a handle owned
/// by the caller. `opts` may be null for defaults. Non-convergence is not
/// an error; query `smb_result_converged`.
///
/// # Safety
/// `out` must be valid for writes; `opts` must be null or point to an
/// initialized `SmbOptions`.
#[no_mangle]
pub unsafe extern "C" fn smb_solve(
    dim: u32,
    g: f64,
    a: f64,
    trial: i32,
    method: i32,
    opts: *const SmbOptions,
    out: *mut *mut SmbResult,
) -> i32 {
    guarded(|| {
        clear_error();
        if out.is_null() {
            return fail(SMB_ERR_NULL, "out is null");
        }
        *out = ptr::null_mut();
        let kind = match trial {
            SMB_TRIAL_ONE => TrialKind::One,
            SMB_TRIAL_TWO => TrialKind::Two,
            v => return fail(SMB_ERR_PARAM, &format!("invalid trial {v}")),
        };
        let method = match method {
            SMB_METHOD_F => Method::F,
            SMB_METHOD_TAU => Method::Tau,
            v => return fail(SMB_ERR_PARAM, &format!("invalid method {v}")),
        };
        let o = if opts.is_null() { smb_default_options() } else { *opts };
        let so = match to_solve_options(&o) {
            Ok(s) => s,
            Err(m) => return fail(SMB_ERR_PARAM, &m),
        };
        match make_params(dim, g, a).and_then(|p| solve(p, kind, method, &so)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(SmbResult { inner }));
                SMB_OK
            }
            Err(e) => fail(solver_code(&e), &e.to_string()),
        }
    })
}

/// Releases a handle from `smb_solve`. Null is ignored.
///
/// # Safety
/// `res` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn smb_result_free(res: *mut SmbResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Number of energies E0..En, 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smb_result_energy_count(res: *const SmbResult) -> usize {
    res.as_ref().map_or(0, |r| r.inner.energies.len())
}

/// Copies up to `len` energies into `buf`.
///
/// # Safety
/// `res` must be null or a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn smb_result_energies(res: *const SmbResult, buf: *mut f64, len: usize) -> i32 {
    guarded(|| {
        let Some(r) = res.as_ref() else { return fail(SMB_ERR_NULL, "result is null") };
        if buf.is_null() {
            return fail(SMB_ERR_NULL, "buffer is null");
        }
        let n = len.min(r.inner.energies.len());
        ptr::copy_nonoverlapping(r.inner.energies.as_ptr(), buf, n);
        SMB_OK
    })
}

/// Last energy of the sequence, NaN for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smb_result_final_energy(res: *const SmbResult) -> f64 {
    res.as_ref().map_or(f64::NAN, |r| r.inner.final_energy())
}

/// 1 if converged, 0 if not, -1 for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smb_result_converged(res: *const SmbResult) -> i32 {
    res.as_ref().map_or(-1, |r| i32::from(r.inner.converged))
}

/// Number of grid nodes, 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smb_result_len(res: *const SmbResult) -> usize {
    res.as_ref().map_or(0, |r| r.inner.nodes.len())
}

/// Copies up to `len` nodes and peak-normalized ψ values. Either output
/// pointer may be null to skip it.
///
/// # Safety
/// `res` must be null or a live handle; non-null buffers hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn smb_result_psi(res: *const SmbResult, r_out: *mut f64, psi_out: *mut f64, len: usize) -> i32 {
    guarded(|| {
        let Some(r) = res.as_ref() else { return fail(SMB_ERR_NULL, "result is null") };
        let n = len.min(r.inner.nodes.len());
        if !r_out.is_null() {
            ptr::copy_nonoverlapping(r.inner.nodes.as_ptr(), r_out, n);
        }
        if !psi_out.is_null() {
            ptr::copy_nonoverlapping(r.inner.final_psi.as_ptr(), psi_out, n);
        }
        SMB_OK
    })
}

/// V(r); NaN when the parameters are out of domain.
#[no_mangle]
pub extern "C" fn smb_potential(dim: u32, g: f64, a: f64, r: f64) -> f64 {
    match make_params(dim, g, a) {
        Ok(p) => p.potential(r),
        Err(e) => {
            set_error(&e.to_string());
            f64::NAN
        }
    }
}

/// Finite-difference ground-state energy. `r_max <= 0` and `n == 0` select
/// the defaults.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn smb_oracle_energy(dim: u32, g: f64, a: f64, r_max: f64, n: usize, out: *mut f64) -> i32 {
    guarded(|| {
        clear_error();
        if out.is_null() {
            return fail(SMB_ERR_NULL, "out is null");
        }
        let rm = (r_max > 0.0).then_some(r_max);
        let nn = (n > 0).then_some(n);
        match make_params(dim, g, a).and_then(|p| oracle::oracle_energy(&p, rm, nn)) {
            Ok(e) => {
                *out = e;
                SMB_OK
            }
            Err(e) => fail(solver_code(&e), &e.to_string()),
        }
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn smb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

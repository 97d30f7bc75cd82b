//! C ABI over `skl`.
//!
//! Every fallible call returns an [`SklStatus`] and writes results through
//! out-pointers. The message of the most recent failure on the calling
//! thread is available from [`skl_last_error`]. Handles are opaque and must
//! be released with their `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use skl::kernels::{
    classical_heat_kernel, classical_wave_kernel, heat_kernel, wave_kernel, HeatKernel, KernelQuery,
    NormalizationTable,
};
use skl::solvers::{solve, InitialDatum, Problem, SolveRequest};
use skl::Error;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SklStatus {
    Ok = 0,
    NullPointer = 1,
    /// Parameter outside the domain of the operation.
    InvalidArgument = 2,
    /// Wave kernel queried at `r >= t`.
    OutsideLightCone = 3,
    UnsupportedDimension = 4,
    /// Series, quadrature or stencil did not reach its tolerance.
    NotConverged = 5,
    /// Pole or overflow.
    Singular = 6,
    Internal = 7,
}

impl From<&Error> for SklStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) | Error::Config(_) | Error::Datum(_) | Error::Degenerate(_) | Error::Io(_) => {
                SklStatus::InvalidArgument
            }
            Error::LightCone { .. } => SklStatus::OutsideLightCone,
            Error::UnsupportedDimension(_) => SklStatus::UnsupportedDimension,
            Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::Stencil(_) => SklStatus::NotConverged,
            Error::Pole(_) | Error::Overflow | Error::Divergence(_) => SklStatus::Singular,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (SklStatus, String)>) -> SklStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SklStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside skl".into());
            SklStatus::Internal
        }
    }
}

fn lib<T>(r: skl::Result<T>) -> Result<T, (SklStatus, String)> {
    r.map_err(|e| (SklStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (SklStatus, String) {
    (SklStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or valid for `len` reads.
unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (SklStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn skl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn skl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opaque table of normalization constants.
pub struct SklNormTable(NormalizationTable);

/// Opaque heat kernel with its U evaluator prepared for one `(n, k)`.
pub struct SklHeatKernel(HeatKernel);

/// Opaque initial datum.
pub struct SklDatum(InitialDatum);

/// Derived normalization constants; NaN where a constant does not apply.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SklNormalization {
    pub c2: f64,
    pub heat_solver: f64,
    pub odd_c: f64,
    pub even_c: f64,
    pub even_solver: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SklProblem {
    Heat = 0,
    Wave = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SklSolveResult {
    pub value: f64,
    pub est_error: f64,
    pub nodes_used: usize,
    /// False for wave problems with `k` at either end of `[0, 1]`.
    pub certified: bool,
}

/// Builds constants for every pair in `ns × ks`.
///
/// # Safety
/// `ns` and `ks` must be valid for `n_len` and `k_len` reads and `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn skl_norm_table_new(
    ns: *const usize,
    n_len: usize,
    ks: *const f64,
    k_len: usize,
    out: *mut *mut SklNormTable,
) -> SklStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let ns = slice_arg(ns, n_len, "ns")?;
        let ks = slice_arg(ks, k_len, "ks")?;
        let table = lib(NormalizationTable::build(ns, ks))?;
        *out = Box::into_raw(Box::new(SklNormTable(table)));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from [`skl_norm_table_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn skl_norm_table_free(table: *mut SklNormTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn skl_norm_table_get(
    table: *const SklNormTable,
    n: usize,
    k: f64,
    out: *mut SklNormalization,
) -> SklStatus {
    guard(|| {
        let table = table.as_ref().ok_or_else(|| null("table"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = lib(table.0.get(n, k))?;
        *out = SklNormalization {
            c2: e.c2,
            heat_solver: e.heat_solver.unwrap_or(f64::NAN),
            odd_c: e.odd_c.unwrap_or(f64::NAN),
            even_c: e.even_c.unwrap_or(f64::NAN),
            even_solver: e.even_solver.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skl_heat_kernel_new(n: usize, k: f64, out: *mut *mut SklHeatKernel) -> SklStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let h = lib(HeatKernel::new(n, k))?;
        *out = Box::into_raw(Box::new(SklHeatKernel(h)));
        Ok(())
    })
}

/// # Safety
/// `kernel` must be null or a handle from [`skl_heat_kernel_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn skl_heat_kernel_free(kernel: *mut SklHeatKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// `H^k_n(t, r)` with the U evaluator's error estimate; `est_error` may be null.
///
/// # Safety
/// `kernel` must be a live handle; `value` writable; `est_error` null or writable.
#[no_mangle]
pub unsafe extern "C" fn skl_heat_kernel_eval(
    kernel: *const SklHeatKernel,
    t: f64,
    r: f64,
    value: *mut f64,
    est_error: *mut f64,
) -> SklStatus {
    guard(|| {
        let kernel = kernel.as_ref().ok_or_else(|| null("kernel"))?;
        if value.is_null() {
            return Err(null("value"));
        }
        lib(KernelQuery::new(kernel.0.n(), kernel.0.k(), t, r).validate())?;
        let (v, d) = lib(kernel.0.eval_diag(t, r))?;
        *value = v;
        if !est_error.is_null() {
            *est_error = d.est_error;
        }
        Ok(())
    })
}

fn write_value(out: *mut f64, v: skl::Result<f64>) -> Result<(), (SklStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let v = lib(v)?;
    // SAFETY: checked non-null; the caller guarantees writability.
    unsafe { *out = v };
    Ok(())
}

/// Singular heat kernel `H^k_n(t, r)`; `+inf` at `r = 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skl_heat_kernel(n: usize, k: f64, t: f64, r: f64, out: *mut f64) -> SklStatus {
    guard(|| write_value(out, heat_kernel(KernelQuery::new(n, k, t, r))))
}

/// Classical heat kernel `(4πt)^{-n/2} exp(-r²/4t)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skl_classical_heat_kernel(n: usize, t: f64, r: f64, out: *mut f64) -> SklStatus {
    guard(|| write_value(out, classical_heat_kernel(KernelQuery::new(n, 0.0, t, r))))
}

/// Singular wave kernel `W^k_n(t, r)` for `r < t`. `table` must hold `(n, k)`
/// for `n >= 3`; for `n = 2` it may be null.
///
/// # Safety
/// `table` null or a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn skl_wave_kernel(
    table: *const SklNormTable,
    n: usize,
    k: f64,
    t: f64,
    r: f64,
    out: *mut f64,
) -> SklStatus {
    guard(|| {
        let empty = NormalizationTable::default();
        let norms = table.as_ref().map_or(&empty, |t| &t.0);
        write_value(out, wave_kernel(KernelQuery::new(n, k, t, r), norms))
    })
}

/// Classical wave kernel `(2π)^{-n/2} (t² − r²)^{(1−n)/2}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skl_classical_wave_kernel(n: usize, t: f64, r: f64, out: *mut f64) -> SklStatus {
    guard(|| write_value(out, classical_wave_kernel(KernelQuery::new(n, 0.0, t, r))))
}

unsafe fn new_datum(d: InitialDatum, n: usize, out: *mut *mut SklDatum) -> Result<(), (SklStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    lib(d.validate(n))?;
    *out = Box::into_raw(Box::new(SklDatum(d)));
    Ok(())
}

/// `amplitude · exp(−|Y − center|² / (2 width²))`.
///
/// # Safety
/// `center` must be valid for `n` reads and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn skl_datum_gaussian(
    n: usize,
    center: *const f64,
    width: f64,
    amplitude: f64,
    out: *mut *mut SklDatum,
) -> SklStatus {
    guard(|| {
        let center = slice_arg(center, n, "center")?.to_vec();
        new_datum(InitialDatum::Gaussian { center, width, amplitude }, n, out)
    })
}

/// Smooth bump of the given radius, zero outside the ball.
///
/// # Safety
/// `center` must be valid for `n` reads and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn skl_datum_bump(
    n: usize,
    center: *const f64,
    radius: f64,
    amplitude: f64,
    out: *mut *mut SklDatum,
) -> SklStatus {
    guard(|| {
        let center = slice_arg(center, n, "center")?.to_vec();
        new_datum(InitialDatum::Bump { center, radius, amplitude }, n, out)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skl_datum_constant(n: usize, value: f64, out: *mut *mut SklDatum) -> SklStatus {
    guard(|| new_datum(InitialDatum::constant(n, value), n, out))
}

/// # Safety
/// `datum` must be null or a datum handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn skl_datum_free(datum: *mut SklDatum) {
    if !datum.is_null() {
        drop(Box::from_raw(datum));
    }
}

/// Solves the heat or wave Cauchy problem at `x` with default quadrature.
///
/// # Safety
/// `x` must be valid for `n` reads, `datum` a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn skl_solve(
    problem: SklProblem,
    n: usize,
    k: f64,
    t: f64,
    x: *const f64,
    datum: *const SklDatum,
    out: *mut SklSolveResult,
) -> SklStatus {
    guard(|| {
        let x = slice_arg(x, n, "x")?.to_vec();
        let datum = datum.as_ref().ok_or_else(|| null("datum"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let problem = match problem {
            SklProblem::Heat => Problem::Heat,
            SklProblem::Wave => Problem::Wave,
        };
        let res = lib(solve(&SolveRequest::new(problem, n, k, t, x, datum.0.clone())))?;
        *out = SklSolveResult {
            value: res.value,
            est_error: res.est_error,
            nodes_used: res.diagnostics.nodes_used,
            certified: res.diagnostics.certified,
        };
        Ok(())
    })
}

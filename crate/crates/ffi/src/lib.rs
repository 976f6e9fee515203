//! C ABI over `euler-core`.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `*_free`. Every fallible call returns an
//! [`EulerStatus`]; on failure [`euler_last_error`] describes the most recent
//! error on the calling thread. Strings returned through `char **` belong to
//! the caller and are released with [`euler_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use euler_core::parse::{parse_dist, parse_poly, parse_testfn};
use euler_core::wagner::{me_check, Grid};
use euler_core::{theta, DistExpr, Error, Polynomial};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    Unsupported = 5,
    Escalation = 6,
    Numeric = 7,
    InvalidArgument = 8,
    Panic = 9,
}

/// Opaque Euler symbol `P`.
pub struct EulerPoly(Polynomial);

/// Opaque distribution expression.
pub struct EulerDist(DistExpr);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(s).expect("no interior nul")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> EulerStatus {
    match e {
        Error::Parse(_) | Error::CoordinateConflict(_) => EulerStatus::Parse,
        Error::Dimension(_) => EulerStatus::Dimension,
        Error::TermNotHyperplaneSupported(_) | Error::UnsupportedInput(_) => EulerStatus::Unsupported,
        Error::EscalationExceeded { .. } | Error::TraceCapExceeded { .. } => EulerStatus::Escalation,
        Error::QuadratureNoConvergence { .. } | Error::PoleOnGrid { .. } => EulerStatus::Numeric,
        Error::ZeroPolynomial | Error::DuplicateLambda(_) | Error::InvalidArgument(_) => {
            EulerStatus::InvalidArgument
        }
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (EulerStatus, String)>) -> EulerStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EulerStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EulerStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (EulerStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EulerStatus, String) {
    (EulerStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (EulerStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (EulerStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (EulerStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, v: T, what: &str) -> Result<(), (EulerStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Parses a symbol in `t1..t<dim>`. On success `*out` owns a new handle.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn euler_poly_parse(src: *const c_char, dim: usize, out: *mut *mut EulerPoly) -> EulerStatus {
    guard(|| {
        let s = read_str(src, "src")?;
        let p = parse_poly(s, dim).map_err(|e| core_err(e.into()))?;
        write_out(out, Box::into_raw(Box::new(EulerPoly(p))), "out")
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn euler_poly_free(p: *mut EulerPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parses a distribution expression in `x1..x<dim>`.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn euler_dist_parse(src: *const c_char, dim: usize, out: *mut *mut EulerDist) -> EulerStatus {
    guard(|| {
        let s = read_str(src, "src")?;
        let e = parse_dist(s, dim).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(EulerDist(e))), "out")
    })
}

/// # Safety
/// `d` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn euler_dist_free(d: *mut EulerDist) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Canonical text of a symbol; release with [`euler_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn euler_poly_format(p: *const EulerPoly, out: *mut *mut c_char) -> EulerStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        write_out(out, to_c_string(p.0.to_string()), "out")
    })
}

/// Canonical text of a distribution; release with [`euler_string_free`].
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn euler_dist_format(d: *const EulerDist, out: *mut *mut c_char) -> EulerStatus {
    guard(|| {
        let d = deref(d, "dist")?;
        write_out(out, to_c_string(d.0.to_string()), "out")
    })
}

/// Dimension of a distribution handle, or 0 for null.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn euler_dist_dim(d: *const EulerDist) -> usize {
    d.as_ref().map_or(0, |d| d.0.dim())
}

/// Solves `P(θ) U = T`. `*solution` receives a new handle and `*verified`
/// the exact verification result.
///
/// # Safety
/// Handles must be live; `solution` and `verified` must be writable.
#[no_mangle]
pub unsafe extern "C" fn euler_solve(
    p: *const EulerPoly,
    target: *const EulerDist,
    solution: *mut *mut EulerDist,
    verified: *mut bool,
) -> EulerStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        let t = deref(target, "target")?;
        if solution.is_null() || verified.is_null() {
            return Err(null("output"));
        }
        let rep = euler_core::solve(&p.0, &t.0).map_err(core_err)?;
        write_out(verified, rep.verified, "verified")?;
        write_out(solution, Box::into_raw(Box::new(EulerDist(rep.solution))), "solution")
    })
}

/// Exact check of `P(θ) U = T`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn euler_verify(
    p: *const EulerPoly,
    u: *const EulerDist,
    t: *const EulerDist,
    out: *mut bool,
) -> EulerStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        let u = deref(u, "solution")?;
        let t = deref(t, "target")?;
        write_out(out, euler_core::verify(&p.0, &u.0, &t.0), "out")
    })
}

/// `P(θ) U` computed symbolically.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn euler_apply(p: *const EulerPoly, u: *const EulerDist, out: *mut *mut EulerDist) -> EulerStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        let u = deref(u, "dist")?;
        let r = theta::apply_polynomial(&p.0, &u.0).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(EulerDist(r))), "out")
    })
}

/// `|⟨E, P(−∂)φ⟩ − φ(0)|` for Wagner's elementary solution `E` of `P(∂)`.
/// `grid_n == 0` or `cutoff <= 0` select the defaults for the dimension.
///
/// # Safety
/// `p` must be live; `testfn` NUL-terminated; `residual` writable.
#[no_mangle]
pub unsafe extern "C" fn euler_wagner_check(
    p: *const EulerPoly,
    testfn: *const c_char,
    grid_n: usize,
    cutoff: f64,
    residual: *mut f64,
) -> EulerStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        let src = read_str(testfn, "testfn")?;
        let phi = parse_testfn(src, p.0.dim()).map_err(core_err)?;
        let defaults = Grid::default_for(p.0.dim());
        let grid = Grid {
            n: if grid_n == 0 { defaults.n } else { grid_n },
            cutoff: if cutoff > 0.0 { cutoff } else { defaults.cutoff },
        };
        let m = me_check(&p.0, &phi, grid).map_err(core_err)?;
        write_out(residual, m.residual, "residual")
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn euler_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn euler_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

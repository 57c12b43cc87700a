//! C ABI for flatgap.
//!
//! Objects are opaque handles created by the `flatgap_surface_from_*`,
//! `flatgap_surface_apply_matrix`, `flatgap_enumerate` and `flatgap_rate_parse`
//! functions and released by the matching `_free`. Every fallible call
//! returns a [`FlatgapStatus`]; on failure the message is available from
//! [`flatgap_last_error`] on the same thread. Panics never cross the
//! boundary: they are reported as `FLATGAP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use flatgap::analysis::{chung_erdos_bound, MeasureMatrix};
use flatgap::corpus::corpus_get;
use flatgap::error::{Error, EXIT_BUDGET, EXIT_VALIDATION};
use flatgap::gaps::{horizontal_gap, AngleSet};
use flatgap::rate::RateFunction;
use flatgap::saddle::{enumerate_with, EnumConfig, HolonomySet};
use flatgap::surface::{Mat2, TranslationSurface};
use flatgap::targets::trapezoid_area;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatgapStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input was rejected (bad surface, expression, parameter, …).
    Validation = 3,
    /// A computation exceeded its budget.
    Budget = 4,
    /// An index was out of range.
    OutOfRange = 5,
    /// An internal invariant failed.
    Internal = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// A validated translation surface.
pub struct FlatgapSurface(TranslationSurface);

/// Holonomy vectors of saddle connections up to a radius.
pub struct FlatgapHolonomySet(HolonomySet);

/// A parsed, validated rate function.
pub struct FlatgapRate(RateFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FlatgapStatus, msg: impl Into<String>) -> FlatgapStatus {
    set_error(msg);
    status
}

fn from_error(e: impl Into<Error>) -> FlatgapStatus {
    let e = e.into();
    let status = match e.exit_code() {
        EXIT_VALIDATION => FlatgapStatus::Validation,
        EXIT_BUDGET => FlatgapStatus::Budget,
        _ => FlatgapStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting panics into `Panic`.
fn guard(f: impl FnOnce() -> FlatgapStatus) -> FlatgapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(FlatgapStatus::Panic, "panic caught at the C boundary"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, FlatgapStatus> {
    if p.is_null() {
        return Err(fail(FlatgapStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(FlatgapStatus::InvalidUtf8, "string argument is not UTF-8"))
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(FlatgapStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn flatgap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length
/// excluding the terminator, or 0 when there is none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn flatgap_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds a surface from its JSON definition.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_surface_from_json(json: *const c_char, out: *mut *mut FlatgapSurface) -> FlatgapStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(json));
        match TranslationSurface::from_json(text) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(FlatgapSurface(s)));
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Loads a bundled surface by name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_surface_from_corpus(name: *const c_char, out: *mut *mut FlatgapSurface) -> FlatgapStatus {
    guard(|| {
        non_null!(out);
        let name = try_status!(read_str(name));
        match corpus_get(name) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(FlatgapSurface(s)));
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a surface; null is ignored.
///
/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flatgap_surface_free(s: *mut FlatgapSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Genus of the surface.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_surface_genus(s: *const FlatgapSurface, out: *mut usize) -> FlatgapStatus {
    guard(|| {
        non_null!(s, out);
        *out = (*s).0.genus();
        FlatgapStatus::Ok
    })
}

/// Total area of the surface.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_surface_area(s: *const FlatgapSurface, out: *mut f64) -> FlatgapStatus {
    guard(|| {
        non_null!(s, out);
        *out = (*s).0.area();
        FlatgapStatus::Ok
    })
}

/// Number of cone points (marked points included).
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_surface_cone_count(s: *const FlatgapSurface, out: *mut usize) -> FlatgapStatus {
    guard(|| {
        non_null!(s, out);
        *out = (*s).0.cone_points().len();
        FlatgapStatus::Ok
    })
}

/// New surface `[[a, b], [c, d]] · s`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_surface_apply_matrix(
    s: *const FlatgapSurface,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    out: *mut *mut FlatgapSurface,
) -> FlatgapStatus {
    guard(|| {
        non_null!(s, out);
        match (*s).0.apply_matrix(&Mat2::new(a, b, c, d)) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(FlatgapSurface(t)));
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Enumerates holonomy vectors of length at most `radius`; `node_budget`
/// of 0 selects the default budget.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_enumerate(
    s: *const FlatgapSurface,
    radius: f64,
    node_budget: u64,
    out: *mut *mut FlatgapHolonomySet,
) -> FlatgapStatus {
    guard(|| {
        non_null!(s, out);
        let mut cfg = EnumConfig { keep_witnesses: false, ..EnumConfig::default() };
        if node_budget > 0 {
            cfg.node_budget = node_budget;
        }
        match enumerate_with(&(*s).0, radius, &cfg) {
            Ok(set) => {
                *out = Box::into_raw(Box::new(FlatgapHolonomySet(set)));
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a holonomy set; null is ignored.
///
/// # Safety
/// `h` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flatgap_holonomy_free(h: *mut FlatgapHolonomySet) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of vectors in the set (0 for null).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn flatgap_holonomy_len(h: *const FlatgapHolonomySet) -> usize {
    if h.is_null() {
        0
    } else {
        (*h).0.len()
    }
}

/// The `i`-th vector, in the set's deterministic order.
///
/// # Safety
/// `h` must be a live handle; `x` and `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_holonomy_get(h: *const FlatgapHolonomySet, i: usize, x: *mut f64, y: *mut f64) -> FlatgapStatus {
    guard(|| {
        non_null!(h, x, y);
        let set = &(*h).0;
        match set.vectors.get(i) {
            Some(v) => {
                *x = v.v.x;
                *y = v.v.y;
                FlatgapStatus::Ok
            }
            None => fail(FlatgapStatus::OutOfRange, format!("index {i} out of range")),
        }
    })
}

/// Horizontal gap `ζ(R)` among the vectors of length at most `radius`
/// (which must not exceed the enumeration radius).
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_horizontal_gap(h: *const FlatgapHolonomySet, radius: f64, out: *mut f64) -> FlatgapStatus {
    guard(|| {
        non_null!(h, out);
        let set = &(*h).0;
        if !(radius > 0.0 && radius <= set.radius) {
            return fail(FlatgapStatus::Validation, format!("radius {radius} outside (0, {}]", set.radius));
        }
        let vs: Vec<_> = set.vectors.iter().filter(|v| set.within(v, radius)).map(|v| v.v).collect();
        match horizontal_gap(&AngleSet::from_vectors(&vs)) {
            Ok(z) => {
                *out = z;
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses and validates a rate function expression in `t`.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_rate_parse(expr: *const c_char, out: *mut *mut FlatgapRate) -> FlatgapStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(expr));
        match RateFunction::parse(text) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(FlatgapRate(r)));
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `max{1, ψ(t)}`.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_rate_eval(r: *const FlatgapRate, t: f64, out: *mut f64) -> FlatgapStatus {
    guard(|| {
        non_null!(r, out);
        *out = (*r).0.eval(t);
        FlatgapStatus::Ok
    })
}

/// Releases a rate function; null is ignored.
///
/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flatgap_rate_free(r: *mut FlatgapRate) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Area `(σ/ψ)(1 − c²)/2` of the target trapezoid.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_trapezoid_area(c: f64, sigma: f64, psi_value: f64, out: *mut f64) -> FlatgapStatus {
    guard(|| {
        non_null!(out);
        match trapezoid_area(c, sigma, psi_value) {
            Ok(a) => {
                *out = a;
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Chung–Erdős lower bound from `n` set measures and the row-major `n × n`
/// matrix of pairwise intersection measures.
///
/// # Safety
/// `singles` must point to `n` doubles, `pairs` to `n * n`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn flatgap_chung_erdos_bound(
    n: usize,
    singles: *const f64,
    pairs: *const f64,
    out: *mut f64,
) -> FlatgapStatus {
    guard(|| {
        non_null!(singles, pairs, out);
        let Some(nn) = n.checked_mul(n) else {
            return fail(FlatgapStatus::Validation, "matrix size overflows");
        };
        let s = std::slice::from_raw_parts(singles, n).to_vec();
        let p = std::slice::from_raw_parts(pairs, nn);
        let rows = p.chunks(n.max(1)).take(n).map(<[f64]>::to_vec).collect();
        let bound = MeasureMatrix::new(s, rows).and_then(|m| chung_erdos_bound(&m));
        match bound {
            Ok(b) => {
                *out = b;
                FlatgapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

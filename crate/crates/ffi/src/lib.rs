//! C ABI over the chaoscope core.
//!
//! Maps are opaque handles owned by the caller and released with
//! [`chaoscope_map_free`]. Rationals cross the boundary as `"p/q"` strings;
//! structured results come back as JSON strings released with
//! [`chaoscope_string_free`]. Every fallible call returns a
//! [`ChaoscopeStatus`]; on failure the message is available from
//! [`chaoscope_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chaoscope::builtins::{builtin_from_ref, square_root};
use chaoscope::mapfile::{map_to_json, parse_map_json};
use chaoscope::orbits::{periodic_points, sharkovsky_precedes};
use chaoscope::rational::{fmt_rat, parse_rat};
use chaoscope::turbulence::{canonical_quadruple, find_turbulence};
use chaoscope::{Error, PLMap, DEFAULT_NODE_BUDGET};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaoscopeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Budget = 5,
    UnknownMap = 6,
    InvalidMap = 7,
    BadParam = 8,
    NotFound = 9,
    Failed = 10,
    Panic = 11,
}

/// Opaque handle to an exact piecewise-linear self-map.
pub struct ChaoscopeMap {
    inner: PLMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(ChaoscopeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain { .. } => ChaoscopeStatus::Domain,
            Error::Budget { .. } => ChaoscopeStatus::Budget,
            Error::UnknownMap(_) => ChaoscopeStatus::UnknownMap,
            Error::InvalidMap(_) | Error::SelfMap { .. } => ChaoscopeStatus::InvalidMap,
            Error::Parse(_) => ChaoscopeStatus::Parse,
            Error::BadParam(_) => ChaoscopeStatus::BadParam,
            _ => ChaoscopeStatus::Failed,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ChaoscopeStatus::NullArgument, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> ChaoscopeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ChaoscopeStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ChaoscopeStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ChaoscopeStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_map<'a>(p: *const ChaoscopeMap) -> Result<&'a PLMap, Failure> {
    p.as_ref().map(|m| &m.inner).ok_or_else(|| null("map"))
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|e| Failure(ChaoscopeStatus::Failed, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_map(out: *mut *mut ChaoscopeMap, map: PLMap) {
    *out = Box::into_raw(Box::new(ChaoscopeMap { inner: map }));
}

/// Builds a builtin map: `"tent"`, `"remark1"` or `"stefan:<i>"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_map_builtin(
    name: *const c_char,
    out: *mut *mut ChaoscopeMap,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let map = builtin_from_ref(read_str(name, "name")?)?;
        put_map(out, map);
        Ok(())
    })
}

/// Parses a map from its JSON node list.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_map_from_json(
    json: *const c_char,
    out: *mut *mut ChaoscopeMap,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let map = parse_map_json(read_str(json, "json")?)?;
        put_map(out, map);
        Ok(())
    })
}

/// Releases a map handle. Null is ignored.
///
/// # Safety
/// `map` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_map_free(map: *mut ChaoscopeMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Writes the map's JSON form to `*out`.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_map_to_json(
    map: *const ChaoscopeMap,
    out: *mut *mut c_char,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, map_to_json(read_map(map)?))
    })
}

/// Evaluates the map exactly at a rational `x` given as `"p/q"`.
///
/// # Safety
/// `map` must be a live handle, `x` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_map_eval(
    map: *const ChaoscopeMap,
    x: *const c_char,
    out: *mut *mut c_char,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = read_map(map)?;
        let x = parse_rat(read_str(x, "x")?)?;
        put_string(out, fmt_rat(&f.eval(&x)?))
    })
}

/// The `n`-th iterate of the map as a new handle.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_map_power(
    map: *const ChaoscopeMap,
    n: usize,
    out: *mut *mut ChaoscopeMap,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = read_map(map)?.power(n, DEFAULT_NODE_BUDGET)?;
        put_map(out, g);
        Ok(())
    })
}

/// The two-interval square root of a map on `[0, 1]`, acting on `[0, 3]`.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_map_square_root(
    map: *const ChaoscopeMap,
    out: *mut *mut ChaoscopeMap,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = square_root(read_map(map)?)?;
        put_map(out, g);
        Ok(())
    })
}

/// JSON array of the exact orbit `x, f(x), ..., f^n(x)`.
///
/// # Safety
/// `map` must be a live handle, `x` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_orbit_json(
    map: *const ChaoscopeMap,
    x: *const c_char,
    n: usize,
    out: *mut *mut c_char,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = read_map(map)?;
        let x = parse_rat(read_str(x, "x")?)?;
        let orbit: Vec<String> = f.iterate(&x, n)?.iter().map(fmt_rat).collect();
        put_string(out, serde_json::Value::from(orbit).to_string())
    })
}

/// JSON array of the isolated solutions of `f^n(x) = x`.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_periodic_points_json(
    map: *const ChaoscopeMap,
    n: usize,
    out: *mut *mut c_char,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let found = periodic_points(read_map(map)?, n, DEFAULT_NODE_BUDGET)?;
        let points: Vec<String> = found.points.iter().map(fmt_rat).collect();
        put_string(out, serde_json::Value::from(points).to_string())
    })
}

/// Searches for a turbulence witness. On success `*out` holds
/// `{"witness": ..., "quadruple": ...}`; a map without one yields
/// `CHAOSCOPE_STATUS_NOT_FOUND`.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_find_turbulence(
    map: *const ChaoscopeMap,
    out: *mut *mut c_char,
) -> ChaoscopeStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = read_map(map)?;
        let w = find_turbulence(f).ok_or_else(|| {
            Failure(
                ChaoscopeStatus::NotFound,
                "no turbulence witness found".into(),
            )
        })?;
        let q = canonical_quadruple(f, &w.j0, &w.j1)?;
        let doc = serde_json::json!({ "witness": w, "quadruple": q });
        put_string(out, doc.to_string())
    })
}

/// Whether `p` comes strictly before `q` in the Sharkovsky order.
#[no_mangle]
pub extern "C" fn chaoscope_sharkovsky_precedes(p: u64, q: u64) -> bool {
    sharkovsky_precedes(p, q)
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn chaoscope_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn chaoscope_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

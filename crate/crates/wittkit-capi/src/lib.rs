//! C ABI for the wittkit calculator.
//!
//! All entry points are panic-safe and return an error code from
//! [`WkStatus`]; results travel through the opaque [`WkResult`] handle,
//! released with [`wk_result_free`]. Returned strings are owned by the
//! handle and stay valid until it is freed.

use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use wittkit::cli;
use wittkit::wittcalc::WittError;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WkStatus {
    Ok = 0,
    ParseError = 1,
    HypothesisFailed = 2,
    NotTabulated = 3,
    BadInput = 4,
    InternalError = 5,
}

/// Opaque evaluation result. On failure it still carries the error message.
pub struct WkResult {
    status: WkStatus,
    value: CString,
    rules: Vec<CString>,
    warnings: Vec<CString>,
}

fn cstring(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).expect("no interior NUL")
}

fn evaluate(query: &str) -> WkResult {
    let parsed = match cli::parse(query) {
        Ok(q) => q,
        Err(e) => {
            return WkResult {
                status: WkStatus::ParseError,
                value: cstring(&e.to_string()),
                rules: vec![],
                warnings: vec![],
            }
        }
    };
    match cli::run(&parsed) {
        Ok(ev) => WkResult {
            status: WkStatus::Ok,
            value: cstring(&ev.result.to_string()),
            rules: ev
                .rules
                .iter()
                .map(|r| cstring(&format!("{} [{}]", r.rule, r.anchor)))
                .collect(),
            warnings: ev.warnings.iter().map(|w| cstring(w)).collect(),
        },
        Err(e) => {
            let status = match &e {
                WittError::HypothesisFailed { .. } => WkStatus::HypothesisFailed,
                WittError::NotTabulated(_) => WkStatus::NotTabulated,
                WittError::BadInput(_) => WkStatus::BadInput,
                WittError::Module(_) => WkStatus::InternalError,
            };
            WkResult { status, value: cstring(&e.to_string()), rules: vec![], warnings: vec![] }
        }
    }
}

/// Evaluates a group query such as `W^0(node(F5) x Gm)`.
///
/// Writes a fresh handle to `out` (never NULL on return code != InternalError)
/// and returns its status. The caller owns the handle and must release it
/// with `wk_result_free`.
///
/// # Safety
/// `query` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wk_eval(query: *const c_char, out: *mut *mut WkResult) -> WkStatus {
    if query.is_null() || out.is_null() {
        return WkStatus::BadInput;
    }
    *out = std::ptr::null_mut();
    let text = match CStr::from_ptr(query).to_str() {
        Ok(t) => t.to_owned(),
        Err(_) => return WkStatus::BadInput,
    };
    match catch_unwind(AssertUnwindSafe(|| evaluate(&text))) {
        Ok(result) => {
            let status = result.status;
            *out = Box::into_raw(Box::new(result));
            status
        }
        Err(_) => WkStatus::InternalError,
    }
}

/// The result value on success, or the error message on failure.
///
/// # Safety
/// `r` must be a live handle from `wk_eval`.
#[no_mangle]
pub unsafe extern "C" fn wk_result_value(r: *const WkResult) -> *const c_char {
    if r.is_null() {
        return std::ptr::null();
    }
    (*r).value.as_ptr()
}

/// Status stored in the handle.
///
/// # Safety
/// `r` must be a live handle from `wk_eval`.
#[no_mangle]
pub unsafe extern "C" fn wk_result_status(r: *const WkResult) -> WkStatus {
    if r.is_null() {
        return WkStatus::BadInput;
    }
    (*r).status
}

/// Number of audit-trail entries.
///
/// # Safety
/// `r` must be a live handle from `wk_eval`.
#[no_mangle]
pub unsafe extern "C" fn wk_result_rule_count(r: *const WkResult) -> c_int {
    if r.is_null() {
        return 0;
    }
    (*r).rules.len() as c_int
}

/// The i-th audit-trail entry, or NULL when out of range.
///
/// # Safety
/// `r` must be a live handle from `wk_eval`.
#[no_mangle]
pub unsafe extern "C" fn wk_result_rule(r: *const WkResult, i: c_int) -> *const c_char {
    if r.is_null() || i < 0 {
        return std::ptr::null();
    }
    match (&(*r).rules).get(i as usize) {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Number of warnings attached to the evaluation.
///
/// # Safety
/// `r` must be a live handle from `wk_eval`.
#[no_mangle]
pub unsafe extern "C" fn wk_result_warning_count(r: *const WkResult) -> c_int {
    if r.is_null() {
        return 0;
    }
    (*r).warnings.len() as c_int
}

/// The i-th warning, or NULL when out of range.
///
/// # Safety
/// `r` must be a live handle from `wk_eval`.
#[no_mangle]
pub unsafe extern "C" fn wk_result_warning(r: *const WkResult, i: c_int) -> *const c_char {
    if r.is_null() || i < 0 {
        return std::ptr::null();
    }
    match (&(*r).warnings).get(i as usize) {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Releases a handle. NULL is a no-op.
///
/// # Safety
/// `r` must be NULL or a handle from `wk_eval` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wk_result_free(r: *mut WkResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

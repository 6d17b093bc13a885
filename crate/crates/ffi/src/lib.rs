//! C ABI over the taskshare solver.
//!
//! Instances live behind an opaque `TsInstance` handle. Every fallible call
//! returns a `TsStatus`; on failure `ts_last_error` describes the problem
//! for the calling thread. Strings handed out by the library must be
//! released with `ts_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use taskshare::io::{parse_instance, parse_reports};
use taskshare::mechanisms::Evaluator;
use taskshare::table::DEFAULT_PLAYER_CAP;
use taskshare::{Error, Instance, MechanismKind, Realization, ReportProfile, RewardVector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    /// Null pointer or non-UTF-8 text.
    InvalidArgument = 1,
    /// Parse or validation failure.
    Invalid = 2,
    /// Too many players for exact Shapley computation.
    CapExceeded = 3,
    /// Internal panic; the handle should not be used again.
    Internal = 4,
}

/// Parsed instance plus the reports used for evaluation.
pub struct TsInstance {
    instance: Instance,
    reports: ReportProfile,
    cap: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(TsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::CapExceeded { .. } => TsStatus::CapExceeded,
            _ => TsStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            TsStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TsStatus::InvalidArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(TsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const TsInstance) -> Result<&'a TsInstance, Failure> {
    p.as_ref().ok_or_else(|| Failure(TsStatus::InvalidArgument, "instance handle is null".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(TsStatus::InvalidArgument, "output pointer is null".into()));
    }
    let s = CString::new(s).map_err(|_| Failure(TsStatus::Internal, "string contains NUL".into()))?;
    *out = s.into_raw();
    Ok(())
}

fn rewards_json(x: &RewardVector) -> String {
    let map: serde_json::Map<String, serde_json::Value> =
        x.iter().map(|(p, v)| (p.to_string(), serde_json::Value::String(v.to_string()))).collect();
    serde_json::Value::Object(map).to_string()
}

fn mechanism(s: &str) -> Result<MechanismKind, Failure> {
    s.parse().map_err(|e: Error| Failure(TsStatus::Invalid, e.to_string()))
}

/// Parses an instance from JSON. On success `*out` owns a new handle that
/// must be released with `ts_instance_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_instance_from_json(json: *const c_char, out: *mut *mut TsInstance) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(TsStatus::InvalidArgument, "output pointer is null".into()));
        }
        let instance = parse_instance(text(json, "json")?)?;
        let reports = ReportProfile::truthful(&instance);
        *out = Box::into_raw(Box::new(TsInstance { instance, reports, cap: DEFAULT_PLAYER_CAP }));
        Ok(())
    })
}

/// # Safety
/// `instance` must come from `ts_instance_from_json` and not be used after.
#[no_mangle]
pub unsafe extern "C" fn ts_instance_free(instance: *mut TsInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of players, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_instance_player_count(instance: *const TsInstance) -> usize {
    instance.as_ref().map_or(0, |h| h.instance.player_count())
}

/// Replaces the reports used for evaluation. `json` maps player ids to
/// distributions; players left out report truthfully. A null `json`
/// restores truthful reports.
///
/// # Safety
/// `instance` must be a live handle; `json` null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ts_instance_set_reports(instance: *mut TsInstance, json: *const c_char) -> TsStatus {
    guard(|| {
        let h =
            instance.as_mut().ok_or_else(|| Failure(TsStatus::InvalidArgument, "instance handle is null".into()))?;
        h.reports = if json.is_null() {
            ReportProfile::truthful(&h.instance)
        } else {
            parse_reports(text(json, "json")?, &h.instance)?
        };
        Ok(())
    })
}

/// Sets the player limit for Shapley-based calls (clamped to the hard
/// maximum by the solver).
///
/// # Safety
/// `instance` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_instance_set_player_cap(instance: *mut TsInstance, cap: usize) -> TsStatus {
    guard(|| {
        let h =
            instance.as_mut().ok_or_else(|| Failure(TsStatus::InvalidArgument, "instance handle is null".into()))?;
        h.cap = cap;
        Ok(())
    })
}

/// Value of the coalition whose members are the set bits of `mask` (bit k
/// is the k-th smallest player id), as an exact `n/d` string.
///
/// # Safety
/// `instance` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_coalition_value(instance: *const TsInstance, mask: u64, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let h = handle(instance)?;
        let n = h.instance.player_count();
        if n < 64 && mask >> n != 0 {
            return Err(Failure(TsStatus::Invalid, format!("mask {mask:#x} has bits beyond {n} players")));
        }
        let c = h.instance.coalition_from_mask(mask);
        let v = taskshare::coalition_value(&h.instance, &h.reports, &c)?;
        write_string(out, v.to_string())
    })
}

/// Grand-coalition value and assignment as JSON
/// (`{"value": "n/d", "assignment": [ids or null]}`).
///
/// # Safety
/// `instance` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_solve_json(instance: *const TsInstance, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let h = handle(instance)?;
        let grand = h.instance.grand_coalition();
        let v = taskshare::coalition_value(&h.instance, &h.reports, &grand)?;
        let a = taskshare::optimal_assignment(&h.instance, &h.reports, &grand)?;
        let json = serde_json::json!({ "value": v, "assignment": a });
        write_string(out, json.to_string())
    })
}

/// Shapley values as a JSON object from player id to `n/d` string.
///
/// # Safety
/// `instance` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_shapley_json(instance: *const TsInstance, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let h = handle(instance)?;
        let eval = Evaluator::with_cap(&h.instance, &h.reports, h.cap)?;
        write_string(out, rewards_json(&eval.expected(MechanismKind::Shapley)?))
    })
}

/// Expected rewards against the true distributions. `mechanism` is one of
/// `shapley`, `sev`, `sevb`, `vcgev`, `equal`.
///
/// # Safety
/// `instance` must be a live handle, `mechanism` NUL-terminated and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_expected_rewards_json(
    instance: *const TsInstance,
    mechanism: *const c_char,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let h = handle(instance)?;
        let kind = self::mechanism(text(mechanism, "mechanism")?)?;
        let eval = Evaluator::with_cap(&h.instance, &h.reports, h.cap)?;
        write_string(out, rewards_json(&eval.expected(kind)?))
    })
}

/// Rewards for one realization of the assigned players, written as
/// `"1=1,3=2"`.
///
/// # Safety
/// `instance` must be a live handle, the strings NUL-terminated and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_realized_rewards_json(
    instance: *const TsInstance,
    mechanism: *const c_char,
    realization: *const c_char,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let h = handle(instance)?;
        let kind = self::mechanism(text(mechanism, "mechanism")?)?;
        let r: Realization = text(realization, "realization")?.parse()?;
        let eval = Evaluator::with_cap(&h.instance, &h.reports, h.cap)?;
        write_string(out, rewards_json(&eval.realized(kind, &r)?))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

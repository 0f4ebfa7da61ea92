//! C ABI over `anomaly-core`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `_free` function. Every fallible call returns an
//! [`AnomalyStatus`]; on failure the message is available from
//! [`anomaly_last_error`] on the same thread. Strings returned through out
//! parameters are owned by the caller and released with
//! [`anomaly_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use anomaly_core::anomaly::{self, CaseConfig, Family, TheoremReport};
use anomaly_core::modforms::{delta_eps, eisenstein, Group};
use anomaly_core::{Error, QSeries, Rat};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnomalyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The engine reported an error, see `anomaly_last_error`.
    Computation = 3,
    /// A Rust panic was caught at the boundary.
    Panic = 4,
}

/// A rational q-series.
pub struct AnomalySeries {
    inner: QSeries<Rat>,
}

/// A verification report.
pub struct AnomalyReport {
    inner: TheoremReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> AnomalyStatus {
    match e {
        Error::InvalidArgument(_) | Error::InsufficientTruncation(_) | Error::BeyondTruncation { .. } => {
            AnomalyStatus::InvalidArgument
        }
        _ => AnomalyStatus::Computation,
    }
}

/// Runs `f` with panics and engine errors mapped to status codes.
fn guard<F>(f: F) -> AnomalyStatus
where
    F: FnOnce() -> Result<(), (AnomalyStatus, String)>,
{
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AnomalyStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside anomaly-core");
            AnomalyStatus::Panic
        }
    }
}

fn engine(e: Error) -> (AnomalyStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (AnomalyStatus, String) {
    (AnomalyStatus::NullPointer, format!("{name} is null"))
}

fn to_c_string(s: String) -> Result<*mut c_char, (AnomalyStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|_| (AnomalyStatus::Computation, "string contains NUL".into()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn anomaly_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn anomaly_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn anomaly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `E4` (`weight` 4) or `E6` (`weight` 6) through `q^n`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn anomaly_eisenstein(weight: u32, n: u32, out: *mut *mut AnomalySeries) -> AnomalyStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = eisenstein(weight, n).map_err(engine)?;
        *out = Box::into_raw(Box::new(AnomalySeries { inner: f.series }));
        Ok(())
    })
}

/// `(delta, epsilon)` for `group` 1 (`Gamma_0(2)`) or 2 (`Gamma^0(2)`),
/// truncated at `u^order_half`.
///
/// # Safety
/// `delta_out` and `eps_out` must be valid pointers to writable storage.
#[no_mangle]
pub unsafe extern "C" fn anomaly_delta_eps(
    group: u32,
    order_half: u32,
    delta_out: *mut *mut AnomalySeries,
    eps_out: *mut *mut AnomalySeries,
) -> AnomalyStatus {
    guard(|| {
        if delta_out.is_null() || eps_out.is_null() {
            return Err(null("out"));
        }
        let g = match group {
            1 => Group::Gamma0_2,
            2 => Group::Gamma0Upper2,
            _ => return Err((AnomalyStatus::InvalidArgument, format!("group must be 1 or 2, got {group}"))),
        };
        let (d, e) = delta_eps(g, order_half).map_err(engine)?;
        *delta_out = Box::into_raw(Box::new(AnomalySeries { inner: d.series }));
        *eps_out = Box::into_raw(Box::new(AnomalySeries { inner: e.series }));
        Ok(())
    })
}

/// Exclusive truncation bound in powers of `q^(1/2)`.
///
/// # Safety
/// `s` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn anomaly_series_order(s: *const AnomalySeries, out: *mut u32) -> AnomalyStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.inner.order();
        Ok(())
    })
}

/// Coefficient of `q^(exp_half/2)` as a decimal string such as `-1/8`.
///
/// # Safety
/// `s` must be a live handle and `out` valid. Free the string with
/// `anomaly_string_free`.
#[no_mangle]
pub unsafe extern "C" fn anomaly_series_coeff(s: *const AnomalySeries, exp_half: u32, out: *mut *mut c_char) -> AnomalyStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = s.inner.coeff(exp_half).map_err(engine)?;
        *out = to_c_string(c.to_string())?;
        Ok(())
    })
}

/// `{"order_half": .., "terms": [[exp, "coeff"], ..]}`.
///
/// # Safety
/// `s` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn anomaly_series_to_json(s: *const AnomalySeries, out: *mut *mut c_char) -> AnomalyStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = to_c_string(s.inner.to_json().to_string())?;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn anomaly_series_free(s: *mut AnomalySeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Verifies one case. `family` is a name such as `spin_sl2z`; zero
/// `order_half` or `rank_n` selects the defaults.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn anomaly_verify(
    family: *const c_char,
    dim: u32,
    order_half: u32,
    rank_n: u32,
    out: *mut *mut AnomalyReport,
) -> AnomalyStatus {
    guard(|| {
        if family.is_null() {
            return Err(null("family"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let name = CStr::from_ptr(family)
            .to_str()
            .map_err(|_| (AnomalyStatus::InvalidArgument, "family is not UTF-8".to_string()))?;
        let f = Family::from_name(name)
            .ok_or_else(|| (AnomalyStatus::InvalidArgument, format!("unknown family {name:?}")))?;
        let mut cfg = CaseConfig::new(f, dim);
        if order_half != 0 {
            cfg.order_half = order_half;
        }
        if rank_n != 0 {
            cfg.rank_n = rank_n;
        }
        let r = anomaly::verify(&cfg).map_err(engine)?;
        *out = Box::into_raw(Box::new(AnomalyReport { inner: r }));
        Ok(())
    })
}

/// # Safety
/// `r` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn anomaly_report_passed(r: *const AnomalyReport, out: *mut bool) -> AnomalyStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.pass;
        Ok(())
    })
}

/// The report as JSON, including `wall_ms`.
///
/// # Safety
/// `r` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn anomaly_report_to_json(r: *const AnomalyReport, out: *mut *mut c_char) -> AnomalyStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = serde_json::to_string(&r.inner).map_err(|e| (AnomalyStatus::Computation, e.to_string()))?;
        *out = to_c_string(s)?;
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn anomaly_report_free(r: *mut AnomalyReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

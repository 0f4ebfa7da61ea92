use std::ffi::{CStr, CString};
use std::ptr;

use anomaly_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    anomaly_string_free(s);
    out
}

fn last_error() -> String {
    let p = anomaly_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(anomaly_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn eisenstein_coefficients() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(anomaly_eisenstein(4, 3, &mut s), AnomalyStatus::Ok);
        assert!(anomaly_last_error().is_null());
        let mut order = 0;
        assert_eq!(anomaly_series_order(s, &mut order), AnomalyStatus::Ok);
        assert_eq!(order, 7);
        let mut c = ptr::null_mut();
        assert_eq!(anomaly_series_coeff(s, 2, &mut c), AnomalyStatus::Ok);
        assert_eq!(take(c), "240");
        assert_eq!(anomaly_series_coeff(s, 6, &mut c), AnomalyStatus::Ok);
        assert_eq!(take(c), "6720");
        let mut j = ptr::null_mut();
        assert_eq!(anomaly_series_to_json(s, &mut j), AnomalyStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert_eq!(v["order_half"], 7);
        // beyond the truncation
        assert_eq!(anomaly_series_coeff(s, 9, &mut c), AnomalyStatus::InvalidArgument);
        anomaly_series_free(s);
    }
}

#[test]
fn delta_eps_leading_terms() {
    unsafe {
        let (mut d, mut e) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(anomaly_delta_eps(1, 6, &mut d, &mut e), AnomalyStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(anomaly_series_coeff(d, 0, &mut c), AnomalyStatus::Ok);
        assert_eq!(take(c), "1/4");
        assert_eq!(anomaly_series_coeff(e, 0, &mut c), AnomalyStatus::Ok);
        assert_eq!(take(c), "1/16");
        anomaly_series_free(d);
        anomaly_series_free(e);
        assert_eq!(anomaly_delta_eps(3, 6, &mut d, &mut e), AnomalyStatus::InvalidArgument);
        assert!(last_error().contains("group"));
    }
}

#[test]
fn null_pointers() {
    unsafe {
        assert_eq!(anomaly_eisenstein(4, 3, ptr::null_mut()), AnomalyStatus::NullPointer);
        assert!(last_error().contains("out"));
        let mut order = 0;
        assert_eq!(anomaly_series_order(ptr::null(), &mut order), AnomalyStatus::NullPointer);
        let mut r = ptr::null_mut();
        assert_eq!(anomaly_verify(ptr::null(), 7, 0, 0, &mut r), AnomalyStatus::NullPointer);
        let mut b = false;
        assert_eq!(anomaly_report_passed(ptr::null(), &mut b), AnomalyStatus::NullPointer);
        anomaly_series_free(ptr::null_mut());
        anomaly_report_free(ptr::null_mut());
        anomaly_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_reports() {
    unsafe {
        let fam = CString::new("spin_sl2z").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(anomaly_verify(fam.as_ptr(), 7, 0, 0, &mut r), AnomalyStatus::Ok);
        let mut pass = false;
        assert_eq!(anomaly_report_passed(r, &mut pass), AnomalyStatus::Ok);
        assert!(pass);
        let mut j = ptr::null_mut();
        assert_eq!(anomaly_report_to_json(r, &mut j), AnomalyStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert_eq!(v["case"], "spin_sl2z/7");
        assert_eq!(v["order_half"], 6);
        assert_eq!(v["rank_n"], 8);
        assert!(v["wall_ms"].is_number());
        anomaly_report_free(r);
    }
}

#[test]
fn verify_errors() {
    unsafe {
        let mut r = ptr::null_mut();
        let bad = CString::new("spin_mystery").unwrap();
        assert_eq!(anomaly_verify(bad.as_ptr(), 7, 0, 0, &mut r), AnomalyStatus::InvalidArgument);
        assert!(last_error().contains("spin_mystery"));
        assert!(r.is_null());
        let fam = CString::new("spin_sl2z").unwrap();
        assert_eq!(anomaly_verify(fam.as_ptr(), 9, 0, 0, &mut r), AnomalyStatus::InvalidArgument);
        assert!(last_error().contains("3 mod 4"));
        // a later success clears the message
        assert_eq!(anomaly_eisenstein(6, 1, &mut r.cast()), AnomalyStatus::Ok);
        assert!(anomaly_last_error().is_null());
    }
}

#[test]
fn header_declares_the_api() {
    let h = include_str!("../include/anomaly.h");
    for name in [
        "anomaly_version",
        "anomaly_last_error",
        "anomaly_string_free",
        "anomaly_eisenstein",
        "anomaly_delta_eps",
        "anomaly_series_order",
        "anomaly_series_coeff",
        "anomaly_series_to_json",
        "anomaly_series_free",
        "anomaly_verify",
        "anomaly_report_passed",
        "anomaly_report_to_json",
        "anomaly_report_free",
        "typedef struct AnomalySeries AnomalySeries",
        "typedef struct AnomalyReport AnomalyReport",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

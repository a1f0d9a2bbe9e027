use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use lgspec_ffi::*;

fn parse(s: &str) -> (LgStatus, *mut LgWeightSystem) {
    let c = CString::new(s).unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { lg_weight_system_parse(c.as_ptr(), &mut h) };
    (st, h)
}

fn last_error() -> String {
    let p = lg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn weight_system_accessors() {
    let (st, h) = parse("18;7,4,6");
    assert_eq!(st, LgStatus::Ok);
    unsafe {
        assert_eq!(lg_weight_system_degree(h), 18);
        assert_eq!(lg_weight_system_num_weights(h), 3);
        let mut buf = [0u32; 3];
        assert_eq!(lg_weight_system_weights(h, buf.as_mut_ptr(), 3), 3);
        assert_eq!(buf, [7, 4, 6]);
        let mut nu = 0;
        assert_eq!(lg_weight_system_nu(h, &mut nu), LgStatus::Ok);
        assert_eq!(nu, 1);
        assert!(!lg_weight_system_is_family(h));
        let mut t = 0.0;
        assert_eq!(lg_principal_t(h, 128, &mut t), LgStatus::Ok);
        // nu = 1: T = 7^7 4^4 6^6 / 18^18
        let expect = 7f64.powi(7) * 4f64.powi(4) * 6f64.powi(6) / 18f64.powi(18);
        assert!((t - expect).abs() <= 1e-12 * expect);
        lg_weight_system_free(h);
    }
}

#[test]
fn errors_are_reported() {
    let (st, h) = parse("6;2,4");
    assert_eq!(st, LgStatus::InvalidInput);
    assert!(h.is_null());
    assert!(last_error().contains("gcd"));
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(lg_weight_system_parse(ptr::null(), &mut h), LgStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(lg_weight_system_parse(bad.as_ptr().cast(), &mut h), LgStatus::InvalidUtf8);
        assert_eq!(lg_weight_system_degree(ptr::null()), 0);
        lg_weight_system_free(ptr::null_mut());
        lg_string_free(ptr::null_mut());
    }
    let (st, h) = parse("9;2,3");
    assert_eq!(st, LgStatus::Ok);
    unsafe {
        let mut qa = ptr::null_mut();
        assert_eq!(lg_quantum_algebra_build(h, &mut qa), LgStatus::InvalidInput);
        assert!(qa.is_null());
        lg_weight_system_free(h);
    }
}

#[test]
fn e7_spectrum() {
    let (st, h) = parse("E7");
    assert_eq!(st, LgStatus::Ok);
    unsafe {
        assert!(lg_weight_system_is_family(h));
        let mut qa = ptr::null_mut();
        assert_eq!(lg_quantum_algebra_build(h, &mut qa), LgStatus::Ok);
        assert!(lg_quantum_algebra_dimension(qa) > 0);
        let mut principal = 0.0;
        assert_eq!(lg_spectrum_check(qa, 128, 1e-9, &mut principal), LgStatus::Ok);
        assert!((principal - 0.0919).abs() < 1e-3, "{principal}");
        lg_quantum_algebra_free(qa);
        lg_weight_system_free(h);
    }
}

#[test]
fn verify_returns_json() {
    let input = CString::new("A:5").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { lg_verify_json(input.as_ptr(), 128, 1e-9, &mut out) };
    assert_eq!(st, LgStatus::Ok);
    let json = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { lg_string_free(out) };
    assert!(json.contains("\"schemaVersion\": \"1\""));
    assert!(!json.contains("\"fail\""));

    let bad = CString::new("3;1,1,1").unwrap();
    let st = unsafe { lg_verify_json(bad.as_ptr(), 128, 1e-9, &mut out) };
    assert_eq!(st, LgStatus::InvalidInput);
    assert!(out.is_null());
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/lgspec.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for sym in ["lg_weight_system_parse", "lg_verify_json", "lg_string_free", "LG_STATUS_CHECK_FAILED"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-xc", "-std=c99", "-Wall", "-Werror"]).arg(&header).output() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

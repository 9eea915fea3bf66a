//! Exercises the C ABI through raw pointers, as a C caller would.

use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use cubinf_ffi::*;

const WORKED: &str = "x0^3 + x1^3 + x0*x1*x2 + x0*x2 + x1*x2 + x2 + x0 + x1";

unsafe fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cubinf_string_free(s);
    out
}

unsafe fn classify(input: &str, verify: bool) -> (CubinfStatus, *mut CubinfReport, Option<String>) {
    let c = CString::new(input).unwrap();
    let mut out = ptr::null_mut();
    let mut err = ptr::null_mut();
    let st = cubinf_classify(c.as_ptr(), verify, 1, &mut out, &mut err);
    let msg = (!err.is_null()).then(|| take_string(err));
    (st, out, msg)
}

#[test]
fn worked_example_through_the_abi() {
    unsafe {
        let (st, r, err) = classify(WORKED, true);
        assert_eq!(st, CubinfStatus::Ok);
        assert!(err.is_none());
        let (mut lambda, mut mu, mut b2) = (0u32, 0u32, 0u32);
        assert_eq!(cubinf_report_lambda(r, &mut lambda), CubinfStatus::Ok);
        assert_eq!(cubinf_report_mu(r, &mut mu), CubinfStatus::Ok);
        assert_eq!(cubinf_report_b2(r, &mut b2), CubinfStatus::Ok);
        assert_eq!((lambda, mu, b2), (1, 4, 5));
        assert_eq!(cubinf_report_exit_code(r), 0);
        assert!(!cubinf_report_is_not_b(r));
        let json: serde_json::Value = serde_json::from_str(&take_string(cubinf_report_json(r))).unwrap();
        assert_eq!(json["verdict"]["row"], "T1/A2>A3");
        assert!(take_string(cubinf_report_text(r)).contains("T1/A2>A3"));
        cubinf_report_free(r);
    }
}

#[test]
fn outside_b_reports_undefined_values() {
    unsafe {
        let (st, r, _) = classify("x0 + x1^2 + x0*x1^2", false);
        assert_eq!(st, CubinfStatus::Ok);
        assert!(cubinf_report_is_not_b(r));
        assert_eq!(cubinf_report_exit_code(r), 2);
        let mut b2 = 7u32;
        assert_eq!(cubinf_report_b2(r, &mut b2), CubinfStatus::Undefined);
        assert_eq!(b2, 7);
        cubinf_report_free(r);
    }
}

#[test]
fn errors_and_null_arguments() {
    unsafe {
        let (st, r, err) = classify("x0^2 + x1", false);
        assert_eq!(st, CubinfStatus::Parse);
        assert!(r.is_null());
        assert!(err.unwrap().contains("degree 3"));
        let (st, _, _) = classify("x0^3 + (", false);
        assert_eq!(st, CubinfStatus::Parse);

        let mut out = ptr::null_mut();
        assert_eq!(
            cubinf_classify(ptr::null(), false, 1, &mut out, ptr::null_mut()),
            CubinfStatus::NullArgument
        );
        let c = CString::new(WORKED).unwrap();
        assert_eq!(
            cubinf_classify(c.as_ptr(), false, 1, ptr::null_mut(), ptr::null_mut()),
            CubinfStatus::NullArgument
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            cubinf_classify(bad.as_ptr().cast(), false, 1, &mut out, ptr::null_mut()),
            CubinfStatus::InvalidUtf8
        );
        assert!(cubinf_report_json(ptr::null()).is_null());
        assert_eq!(cubinf_report_exit_code(ptr::null()), -1);
        assert_eq!(cubinf_report_mu(ptr::null(), ptr::null_mut()), CubinfStatus::NullArgument);
        cubinf_report_free(ptr::null_mut());
        cubinf_string_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include").join("cubinf.h");
    let text = std::fs::read_to_string(&header).unwrap();
    assert!(text.contains("cubinf_classify"));
    assert!(text.contains("typedef struct CubinfReport CubinfReport;"));
    let Ok(st) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler available; syntax check skipped");
        return;
    };
    assert!(st.success());
}

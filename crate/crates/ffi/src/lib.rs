//! C ABI for the cubinf classifier.
//!
//! A report is an opaque handle created by [`cubinf_classify`] and released by
//! [`cubinf_report_free`]. Strings returned by this library are owned by the
//! caller and released by [`cubinf_string_free`]. No function unwinds across the
//! boundary: panics are caught and reported as [`CubinfStatus::Panic`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cubinf::pipeline::{classify_text, Options, PipelineError, Report};
use cubinf::tables::ClassTag;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubinfStatus {
    Ok = 0,
    /// Input does not parse or is not a cubic in x0, x1, x2.
    Parse = 1,
    /// A required algebraic extension is outside the supported fields.
    UnsupportedExtension = 3,
    /// Internal inconsistency detected by the classifier.
    Inconsistent = 4,
    /// A required pointer argument was null.
    NullArgument = 10,
    /// Input is not valid UTF-8.
    InvalidUtf8 = 11,
    /// The requested quantity is undefined for this report.
    Undefined = 12,
    /// A Rust panic was caught.
    Panic = 13,
}

impl From<&PipelineError> for CubinfStatus {
    fn from(e: &PipelineError) -> Self {
        match e.exit_code() {
            1 => CubinfStatus::Parse,
            3 => CubinfStatus::UnsupportedExtension,
            _ => CubinfStatus::Inconsistent,
        }
    }
}

/// Opaque classification report.
pub struct CubinfReport {
    report: Report,
}

fn into_c_string(s: String) -> *mut c_char {
    // Interior NUL bytes cannot occur in rendered reports; strip them defensively.
    let s = s.replace('\0', "");
    CString::new(s).expect("NUL bytes removed").into_raw()
}

unsafe fn set_error(err: *mut *mut c_char, msg: String) {
    if !err.is_null() {
        *err = into_c_string(msg);
    }
}

/// Classifies one polynomial written in x0, x1, x2.
///
/// On success `*out` receives a new report and `CubinfStatus::Ok` is returned.
/// On failure `*out` is set to null and, when `err` is not null, `*err`
/// receives a message to be released with [`cubinf_string_free`].
///
/// # Safety
///
/// `input` must be a valid NUL-terminated string. `out` must be a valid
/// pointer to writable storage for one pointer. `err` must be null or a valid
/// pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cubinf_classify(
    input: *const c_char,
    verify: bool,
    seed: u64,
    out: *mut *mut CubinfReport,
    err: *mut *mut c_char,
) -> CubinfStatus {
    if !err.is_null() {
        *err = ptr::null_mut();
    }
    if out.is_null() {
        return CubinfStatus::NullArgument;
    }
    *out = ptr::null_mut();
    if input.is_null() {
        return CubinfStatus::NullArgument;
    }
    let text = match CStr::from_ptr(input).to_str() {
        Ok(t) => t.to_owned(),
        Err(e) => {
            set_error(err, e.to_string());
            return CubinfStatus::InvalidUtf8;
        }
    };
    match catch_unwind(AssertUnwindSafe(|| classify_text(&text, Options { verify, seed }))) {
        Ok(Ok(report)) => {
            *out = Box::into_raw(Box::new(CubinfReport { report }));
            CubinfStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(err, e.to_string());
            CubinfStatus::from(&e)
        }
        Err(_) => {
            set_error(err, "panic inside the classifier".into());
            CubinfStatus::Panic
        }
    }
}

/// Releases a report. Null is accepted and ignored.
///
/// # Safety
///
/// `report` must be null or a pointer returned by [`cubinf_classify`] that has
/// not been released yet.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_free(report: *mut CubinfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by this library. Null is accepted and ignored.
///
/// # Safety
///
/// `s` must be null or a string returned by this library that has not been
/// released yet.
#[no_mangle]
pub unsafe extern "C" fn cubinf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Report as JSON, or null when `report` is null.
///
/// # Safety
///
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_json(report: *const CubinfReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => into_c_string(serde_json::to_string(&r.report).expect("report serializes")),
        None => ptr::null_mut(),
    }
}

/// Human readable summary, or null when `report` is null.
///
/// # Safety
///
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_text(report: *const CubinfReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => into_c_string(r.report.render_text()),
        None => ptr::null_mut(),
    }
}

/// Exit code the command-line tool would use: 0, 2 outside the B class, 4 failed verification.
/// Returns -1 when `report` is null.
///
/// # Safety
///
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_exit_code(report: *const CubinfReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.report.exit_code())
}

/// True when the polynomial lies outside the B class.
///
/// # Safety
///
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_is_not_b(report: *const CubinfReport) -> bool {
    report
        .as_ref()
        .is_some_and(|r| r.report.verdict.class_tag == ClassTag::NotB)
}

unsafe fn write_u32(report: *const CubinfReport, out: *mut u32, pick: impl Fn(&Report) -> Option<u32>) -> CubinfStatus {
    let (Some(r), false) = (report.as_ref(), out.is_null()) else {
        return CubinfStatus::NullArgument;
    };
    match pick(&r.report) {
        Some(v) => {
            *out = v;
            CubinfStatus::Ok
        }
        None => CubinfStatus::Undefined,
    }
}

/// Total jump `lambda` of the verdict.
///
/// # Safety
///
/// `report` must be null or a live report handle; `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_lambda(report: *const CubinfReport, out: *mut u32) -> CubinfStatus {
    write_u32(report, out, |r| (!r.verdict.non_isolated).then_some(r.verdict.lambda_total))
}

/// Affine Milnor number `mu`; `Undefined` when the affine critical set is not finite.
///
/// # Safety
///
/// `report` must be null or a live report handle; `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_mu(report: *const CubinfReport, out: *mut u32) -> CubinfStatus {
    write_u32(report, out, |r| r.mu_affine)
}

/// Second Betti number of the generic fiber; `Undefined` outside the isolated case.
///
/// # Safety
///
/// `report` must be null or a live report handle; `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cubinf_report_b2(report: *const CubinfReport, out: *mut u32) -> CubinfStatus {
    write_u32(report, out, |r| r.b2)
}

//! C ABI over `bell-marginals`.
//!
//! Every entry point returns a [`BmStatus`]. Results come back as opaque
//! [`BmReport`] handles holding a verdict and a JSON document; parsed
//! marginal complexes live in [`BmComplex`] handles. Handles are freed with
//! their `_free` function. After a non-`OK` status, [`bm_last_error`] gives
//! a message for the calling thread.
//!
//! Status values 2 and 3 match the command-line exit codes for invalid
//! input and internal limits. Feasibility is not a status: query it with
//! [`bm_report_feasible`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bell_marginals::complex::{verify_certificate, MarginalComplex, DEFAULT_ATOM_CAP};
use bell_marginals::rational::Rational;
use bell_marginals::report;
use bell_marginals::sim::HiddenVariableModel;
use bell_marginals::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BmStatus {
    Ok = 0,
    InvalidInput = 2,
    Limit = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// Verdict plus its JSON rendering.
pub struct BmReport {
    feasible: bool,
    json: CString,
}

/// A parsed marginal complex.
pub struct BmComplex {
    inner: MarginalComplex,
}

/// Default product-space cap for [`bm_complex_solve`].
pub const BM_DEFAULT_ATOM_CAP: u64 = 1_000_000;

const _: () = assert!(BM_DEFAULT_ATOM_CAP == DEFAULT_ATOM_CAP);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(BmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ProductSpaceTooLarge { .. } | Error::Internal(_) => BmStatus::Limit,
            _ => BmStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(BmStatus::InvalidInput, e.to_string())
    }
}

/// Runs `f`, recording any failure or panic for [`bm_last_error`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside bell-marginals".into());
            BmStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(BmStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(BmStatus::InvalidUtf8, e.to_string()))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<&'static mut *mut T, Failure> {
    if out.is_null() {
        return Err(Failure(BmStatus::NullPointer, "null output pointer".into()));
    }
    // SAFETY: checked non-null; the caller guarantees it is writable.
    let slot = unsafe { &mut *out };
    *slot = ptr::null_mut();
    Ok(slot)
}

fn make_report(feasible: bool, json: String) -> *mut BmReport {
    let json = CString::new(json).expect("JSON has no nul");
    Box::into_raw(Box::new(BmReport { feasible, json }))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Tetrahedron, Bell and LP checks on three covariances.
///
/// `input_json` is `{"f1","f2","f3"}` pair densities, `{"sigma": [..]}` or a
/// bare array of three `"p/q"` strings. A non-zero `skip_lp` omits the LP.
///
/// # Safety
/// `input_json` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_check(input_json: *const c_char, skip_lp: i32, out: *mut *mut BmReport) -> BmStatus {
    guard(|| {
        let slot = out_ptr(out)?;
        let s = report::parse_triple(serde_json::from_str(text(input_json)?)?)?;
        let r = report::check(&s, skip_lp != 0)?;
        *slot = make_report(r.feasible, serde_json::to_string(&r)?);
        Ok(())
    })
}

/// CHSH inequalities and the 16-atom LP on four covariances
/// `(A1B1, A1B2, A2B1, A2B2)`, given as `{"sigma": [..]}` or an array.
///
/// # Safety
/// As [`bm_check`].
#[no_mangle]
pub unsafe extern "C" fn bm_chsh(input_json: *const c_char, skip_lp: i32, out: *mut *mut BmReport) -> BmStatus {
    guard(|| {
        let slot = out_ptr(out)?;
        let s = report::parse_quad(serde_json::from_str(text(input_json)?)?)?;
        let r = report::chsh(&s, skip_lp != 0)?;
        *slot = make_report(r.feasible, serde_json::to_string(&r)?);
        Ok(())
    })
}

/// Runs a hidden-variable model over a plan and analyzes the record.
/// `seed` overrides the plan's seed when `has_seed` is non-zero.
/// The report is infeasible only on a significant violation.
///
/// # Safety
/// Both strings must be valid NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_simulate(
    model_json: *const c_char,
    plan_json: *const c_char,
    has_seed: i32,
    seed: u64,
    max_denominator: u64,
    out: *mut *mut BmReport,
) -> BmStatus {
    guard(|| {
        let slot = out_ptr(out)?;
        let model: HiddenVariableModel = serde_json::from_str(text(model_json)?)?;
        let plan = report::parse_plan(text(plan_json)?, (has_seed != 0).then_some(seed), None)?;
        let r = report::simulate(&model, &plan, max_denominator)?;
        *slot = make_report(r.feasible(), serde_json::to_string(&r)?);
        Ok(())
    })
}

/// Parses a marginal complex.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_complex_parse(json: *const c_char, out: *mut *mut BmComplex) -> BmStatus {
    guard(|| {
        let slot = out_ptr(out)?;
        let inner: MarginalComplex = serde_json::from_str(text(json)?)?;
        *slot = Box::into_raw(Box::new(BmComplex { inner }));
        Ok(())
    })
}

/// Decides consistency exactly. The report JSON holds either a witness or
/// a verified Farkas certificate keyed by equation id.
///
/// # Safety
/// `complex` must come from [`bm_complex_parse`] and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_complex_solve(complex: *const BmComplex, atom_cap: u64, out: *mut *mut BmReport) -> BmStatus {
    guard(|| {
        let slot = out_ptr(out)?;
        let c = complex.as_ref().ok_or(Failure(BmStatus::NullPointer, "null complex".into()))?;
        let (result, v) = report::vorobev(&c.inner, atom_cap)?;
        *slot = make_report(result.is_feasible(), serde_json::to_string(&v)?);
        Ok(())
    })
}

/// Checks a certificate given as a JSON array of `"p/q"` coefficients in
/// equation order. Writes 1 to `valid` when it proves infeasibility.
///
/// # Safety
/// `complex` must come from [`bm_complex_parse`], `coefficients_json` be a
/// valid NUL-terminated string and `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_complex_verify_certificate(
    complex: *const BmComplex,
    coefficients_json: *const c_char,
    valid: *mut i32,
) -> BmStatus {
    guard(|| {
        if valid.is_null() {
            return Err(Failure(BmStatus::NullPointer, "null output pointer".into()));
        }
        let c = complex.as_ref().ok_or(Failure(BmStatus::NullPointer, "null complex".into()))?;
        let y: Vec<Rational> = serde_json::from_str(text(coefficients_json)?)?;
        *valid = i32::from(verify_certificate(&c.inner, &y)?);
        Ok(())
    })
}

/// # Safety
/// `complex` must come from [`bm_complex_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn bm_complex_free(complex: *mut BmComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// 1 if feasible, 0 if not or if `report` is null.
///
/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn bm_report_feasible(report: *const BmReport) -> i32 {
    report.as_ref().map_or(0, |r| i32::from(r.feasible))
}

/// JSON text owned by the report; valid until [`bm_report_free`].
///
/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn bm_report_json(report: *const BmReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn bm_report_free(report: *mut BmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

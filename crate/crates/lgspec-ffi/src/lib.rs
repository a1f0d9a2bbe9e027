//! C interface to lgspec.
//!
//! Objects cross the boundary as opaque pointers created by `*_parse` or
//! `*_build` and released by the matching `*_free`. Every fallible call
//! returns an [`LgStatus`]; the message of the most recent failure on the
//! calling thread is available from [`lg_last_error`].
//!
//! Strings returned to the caller are owned by the library and must be
//! released with [`lg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lgspec::quantum::{build_quantum_algebra, check_spectrum_conjecture, QuantumAlgebra};
use lgspec::report::{is_input_error, run_verify, RunOptions};
use lgspec::weights::{parse_input, principal_t};
use lgspec::{Error, FamilySpec, WeightSystem};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    ComputationFailed = 4,
    /// The computation ran but at least one check did not pass.
    CheckFailed = 5,
    Panic = 6,
}

/// A parsed weight system, optionally tagged with its named family.
pub struct LgWeightSystem {
    ws: WeightSystem,
    family: Option<FamilySpec>,
}

/// Quantum multiplication by the anticanonical class for a named family.
pub struct LgQuantumAlgebra {
    qa: QuantumAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(e: &Error) -> LgStatus {
    set_error(e.to_string());
    if is_input_error(e) {
        LgStatus::InvalidInput
    } else {
        LgStatus::ComputationFailed
    }
}

fn guard(f: impl FnOnce() -> LgStatus) -> LgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            LgStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, LgStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(LgStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        LgStatus::InvalidUtf8
    })
}

fn null_arg() -> LgStatus {
    set_error("null pointer argument");
    LgStatus::NullPointer
}

/// Message for the last failure on this thread, or NULL if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn lg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `d;w1,...,wN` or a family name such as `E7` or `Fermat:5,3`.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lg_weight_system_parse(input: *const c_char, out: *mut *mut LgWeightSystem) -> LgStatus {
    guard(|| {
        if out.is_null() {
            return null_arg();
        }
        *out = ptr::null_mut();
        let text = match read_str(input) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_input(text) {
            Ok((ws, family)) => {
                *out = Box::into_raw(Box::new(LgWeightSystem { ws, family }));
                LgStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `ws` must come from [`lg_weight_system_parse`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn lg_weight_system_free(ws: *mut LgWeightSystem) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Degree `d` of the system, 0 for NULL.
///
/// # Safety
/// `ws` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn lg_weight_system_degree(ws: *const LgWeightSystem) -> u32 {
    ws.as_ref().map_or(0, |w| w.ws.d())
}

/// Number of weights, 0 for NULL.
///
/// # Safety
/// `ws` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn lg_weight_system_num_weights(ws: *const LgWeightSystem) -> usize {
    ws.as_ref().map_or(0, |w| w.ws.n_vars())
}

/// Copies up to `len` weights into `buf` and returns the total count.
///
/// # Safety
/// `buf` must hold `len` elements unless `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn lg_weight_system_weights(ws: *const LgWeightSystem, buf: *mut u32, len: usize) -> usize {
    let Some(w) = ws.as_ref() else { return 0 };
    let weights = w.ws.weights();
    if !buf.is_null() {
        let n = len.min(weights.len());
        ptr::copy_nonoverlapping(weights.as_ptr(), buf, n);
    }
    weights.len()
}

/// Index `d - sum(w)`; positive for general type.
///
/// # Safety
/// `ws` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lg_weight_system_nu(ws: *const LgWeightSystem, out: *mut i64) -> LgStatus {
    match (ws.as_ref(), out.is_null()) {
        (Some(w), false) => {
            *out = w.ws.nu();
            LgStatus::Ok
        }
        _ => null_arg(),
    }
}

/// Whether the input named a family with a quantum algebra fixture.
///
/// # Safety
/// `ws` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn lg_weight_system_is_family(ws: *const LgWeightSystem) -> bool {
    ws.as_ref().is_some_and(|w| w.family.is_some())
}

/// The positive real number `T`, rounded to a double.
///
/// # Safety
/// `ws` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lg_principal_t(ws: *const LgWeightSystem, precision: u32, out: *mut f64) -> LgStatus {
    guard(|| {
        let (Some(w), false) = (ws.as_ref(), out.is_null()) else { return null_arg() };
        match principal_t(&w.ws, precision.max(32)) {
            Ok(t) => {
                *out = t.to_f64();
                LgStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Builds the quantum algebra of a named family.
///
/// # Safety
/// `ws` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lg_quantum_algebra_build(
    ws: *const LgWeightSystem,
    out: *mut *mut LgQuantumAlgebra,
) -> LgStatus {
    guard(|| {
        let (Some(w), false) = (ws.as_ref(), out.is_null()) else { return null_arg() };
        *out = ptr::null_mut();
        let Some(spec) = &w.family else {
            set_error("quantum algebra requires a named family");
            return LgStatus::InvalidInput;
        };
        match build_quantum_algebra(spec) {
            Ok(qa) => {
                *out = Box::into_raw(Box::new(LgQuantumAlgebra { qa }));
                LgStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `qa` must come from [`lg_quantum_algebra_build`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn lg_quantum_algebra_free(qa: *mut LgQuantumAlgebra) {
    if !qa.is_null() {
        drop(Box::from_raw(qa));
    }
}

/// Total dimension of the state space, counting broad sectors.
///
/// # Safety
/// `qa` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn lg_quantum_algebra_dimension(qa: *const LgQuantumAlgebra) -> u64 {
    qa.as_ref().map_or(0, |q| q.qa.total_dimension())
}

/// Checks the spectrum conjecture and writes the principal eigenvalue.
///
/// Returns [`LgStatus::CheckFailed`] when any part of the conjecture fails;
/// `principal` is still written in that case.
///
/// # Safety
/// `qa` must be a live handle and `principal` writable.
#[no_mangle]
pub unsafe extern "C" fn lg_spectrum_check(
    qa: *const LgQuantumAlgebra,
    precision: u32,
    tol: f64,
    principal: *mut f64,
) -> LgStatus {
    guard(|| {
        let (Some(q), false) = (qa.as_ref(), principal.is_null()) else { return null_arg() };
        match check_spectrum_conjecture(&q.qa, precision.max(32), tol) {
            Ok(rep) => {
                *principal = rep.principal().map_or(f64::NAN, |p| p.re().to_f64());
                if rep.passed() {
                    LgStatus::Ok
                } else {
                    set_error("spectrum conjecture check failed");
                    LgStatus::CheckFailed
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Runs every applicable check and returns the JSON report in `json_out`.
///
/// The report is produced whether or not the checks pass; the status says
/// which. Release it with [`lg_string_free`].
///
/// # Safety
/// `input` must be a NUL-terminated string and `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn lg_verify_json(
    input: *const c_char,
    precision: u32,
    tol: f64,
    json_out: *mut *mut c_char,
) -> LgStatus {
    guard(|| {
        if json_out.is_null() {
            return null_arg();
        }
        *json_out = ptr::null_mut();
        let text = match read_str(input) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let opts = RunOptions { precision: precision.max(32), tol };
        match run_verify(text, &opts) {
            Ok(report) => {
                let json = report.to_json();
                *json_out = CString::new(json).map_or(ptr::null_mut(), CString::into_raw);
                if report.all_pass() {
                    LgStatus::Ok
                } else {
                    set_error("one or more checks failed");
                    LgStatus::CheckFailed
                }
            }
            Err(e) => fail(&e),
        }
    })
}

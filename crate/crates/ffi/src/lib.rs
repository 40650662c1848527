//! C interface to `qsurf`.
//!
//! Codes and decoders are opaque handles created by `qsurf_*_new`/`build`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a status code (`QSURF_OK` on success); the message of the last
//! failure on the calling thread is available from
//! [`qsurf_last_error_message`]. Strings returned through out-parameters
//! are owned by the caller and must be released with [`qsurf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qsurf::analytic::{Asymmetry, ChannelModel};
use qsurf::codes::{self, Family, StabilizerCode};
use qsurf::decoder::{MatchingDecoder, Outcome, Syndrome};
use qsurf::enumerate::enumerate_classes;
use qsurf::montecarlo;
use qsurf::{wepoly, PauliOperator, QecError};

pub const QSURF_OK: i32 = 0;
/// A required pointer argument was null.
pub const QSURF_ERR_NULL: i32 = 1;
/// Invalid argument or configuration.
pub const QSURF_ERR_CONFIG: i32 = 2;
/// Work estimate above the allowed budget.
pub const QSURF_ERR_BUDGET: i32 = 3;
/// Internal invariant violated or matching cap exceeded.
pub const QSURF_ERR_INVARIANT: i32 = 4;
/// A Rust panic was caught at the boundary.
pub const QSURF_ERR_PANIC: i32 = 5;

pub const QSURF_OUTCOME_SUCCESS: i32 = 0;
pub const QSURF_OUTCOME_LOGICAL_X: i32 = 1;
pub const QSURF_OUTCOME_LOGICAL_Z: i32 = 2;
pub const QSURF_OUTCOME_LOGICAL_Y: i32 = 3;

/// Opaque stabilizer code.
pub struct QsurfCode {
    code: StabilizerCode,
}

/// Opaque matching decoder.
pub struct QsurfDecoder {
    decoder: MatchingDecoder,
}

/// Monte Carlo result.
#[repr(C)]
#[derive(Debug, Default, Clone, Copy)]
pub struct QsurfTrialResult {
    pub trials: u64,
    pub failures: u64,
    pub fx: u64,
    pub fy: u64,
    pub fz: u64,
    pub aborted: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Null(&'static str),
    Qec(QecError),
}

impl From<QecError> for Fail {
    fn from(e: QecError) -> Self {
        Fail::Qec(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QSURF_OK
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("{what} is null"));
            QSURF_ERR_NULL
        }
        Ok(Err(Fail::Qec(e))) => {
            set_error(&e.to_string());
            e.exit_code()
        }
        Err(_) => {
            set_error("panic inside qsurf");
            QSURF_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Qec(QecError::InvalidArgument(format!("{what} is not UTF-8"))))
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    let c = CString::new(s).map_err(|_| QecError::Invariant("nul byte in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn code_ref<'a>(code: *const QsurfCode) -> Result<&'a StabilizerCode, Fail> {
    code.as_ref().map(|c| &c.code).ok_or(Fail::Null("code"))
}

unsafe fn decoder_ref<'a>(dec: *const QsurfDecoder) -> Result<&'a MatchingDecoder, Fail> {
    dec.as_ref().map(|d| &d.decoder).ok_or(Fail::Null("decoder"))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next qsurf call on the same thread.
#[no_mangle]
pub extern "C" fn qsurf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from a qsurf out-parameter and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsurf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a code. `family` is one of `surface`, `rotated`, `xzzx`,
/// `rotated-xzzx`.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_code_build(
    family: *const c_char,
    d_x: u32,
    d_z: u32,
    out: *mut *mut QsurfCode,
) -> i32 {
    guard(|| {
        let family: Family = str_arg(family, "family")?.parse()?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let code = codes::build(family, d_x as usize, d_z as usize)?;
        *out = Box::into_raw(Box::new(QsurfCode { code }));
        Ok(())
    })
}

/// Reads a code from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_code_from_json(json: *const c_char, out: *mut *mut QsurfCode) -> i32 {
    guard(|| {
        let text = str_arg(json, "json")?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let code = StabilizerCode::from_json(text)
            .map_err(|e| QecError::InvalidArgument(format!("bad code document: {e}")))?;
        *out = Box::into_raw(Box::new(QsurfCode { code }));
        Ok(())
    })
}

/// # Safety
/// `code` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qsurf_code_free(code: *mut QsurfCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of data qubits, 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qsurf_code_n(code: *const QsurfCode) -> u32 {
    code.as_ref().map_or(0, |c| c.code.n as u32)
}

/// Number of stabilizer generators (syndrome length), 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qsurf_code_num_generators(code: *const QsurfCode) -> u32 {
    code.as_ref().map_or(0, |c| c.code.generators.len() as u32)
}

/// JSON description of the code.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_code_describe(code: *const QsurfCode, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let code = code_ref(code)?;
        out_string(out, code.to_json().to_string())
    })
}

/// Weight enumerator and true distances as JSON.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_code_wepoly(code: *const QsurfCode, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let code = code_ref(code)?;
        let e = wepoly::coset_enumerate(code)?;
        let d = wepoly::distances_from(&e)?;
        out_string(out, wepoly::to_json(code, &e, &d).to_string())
    })
}

/// Creates a decoder for `code`; the decoder keeps its own copy of the code.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_decoder_new(
    code: *const QsurfCode,
    out: *mut *mut QsurfDecoder,
) -> i32 {
    guard(|| {
        let code = code_ref(code)?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let decoder = MatchingDecoder::new(code)?;
        *out = Box::into_raw(Box::new(QsurfDecoder { decoder }));
        Ok(())
    })
}

/// # Safety
/// `dec` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qsurf_decoder_free(dec: *mut QsurfDecoder) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Decodes a syndrome given as `len` bytes of 0/1, one per generator, and
/// writes the correction as a Pauli string.
///
/// # Safety
/// `syndrome` must point to `len` readable bytes and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_decode(
    dec: *const QsurfDecoder,
    syndrome: *const u8,
    len: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let dec = decoder_ref(dec)?;
        if syndrome.is_null() && len > 0 {
            return Err(Fail::Null("syndrome"));
        }
        let raw = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(syndrome, len)
        };
        if len > 64 {
            return Err(QecError::InvalidArgument(format!("syndrome of length {len}")).into());
        }
        let mut bits = 0u64;
        for (g, &b) in raw.iter().enumerate() {
            match b {
                0 => {}
                1 => bits |= 1 << g,
                _ => {
                    return Err(QecError::InvalidArgument(format!(
                        "syndrome byte {g} is {b}, expected 0 or 1"
                    ))
                    .into())
                }
            }
        }
        let s = Syndrome::from_bits(bits, len)?;
        let c = dec.decode(&s)?;
        out_string(out, c.to_string())
    })
}

/// Applies `error` (Pauli string), decodes its syndrome and reports the
/// logical outcome as one of the `QSURF_OUTCOME_*` values.
///
/// # Safety
/// `error` must be a NUL-terminated string and `outcome` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_run_error(
    dec: *const QsurfDecoder,
    error: *const c_char,
    outcome: *mut i32,
) -> i32 {
    guard(|| {
        let dec = decoder_ref(dec)?;
        let e: PauliOperator = str_arg(error, "error")?.parse()?;
        if outcome.is_null() {
            return Err(Fail::Null("outcome"));
        }
        *outcome = match dec.run(&e)? {
            Outcome::Success => QSURF_OUTCOME_SUCCESS,
            Outcome::LogicalX => QSURF_OUTCOME_LOGICAL_X,
            Outcome::LogicalZ => QSURF_OUTCOME_LOGICAL_Z,
            Outcome::LogicalY => QSURF_OUTCOME_LOGICAL_Y,
        };
        Ok(())
    })
}

/// Error-class table up to weight `j_max` as JSON.
///
/// # Safety
/// `dec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_classify(
    dec: *const QsurfDecoder,
    j_max: u32,
    budget: f64,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let dec = decoder_ref(dec)?;
        let table = enumerate_classes(dec, j_max as usize, budget)?;
        out_string(out, table.to_json().to_string())
    })
}

/// Monte Carlo estimate on the channel `(p, asymmetry)`; pass `INFINITY` for
/// the phase-flip channel.
///
/// # Safety
/// `dec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsurf_estimate(
    dec: *const QsurfDecoder,
    p: f64,
    asymmetry: f64,
    trials: u64,
    seed: u64,
    out: *mut QsurfTrialResult,
) -> i32 {
    guard(|| {
        let dec = decoder_ref(dec)?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let a: Asymmetry = if asymmetry == f64::INFINITY {
            Asymmetry::Infinite
        } else if asymmetry.is_finite() {
            format!("{asymmetry}").parse()?
        } else {
            return Err(QecError::BadChannel(format!("asymmetry {asymmetry}")).into());
        };
        let ch = ChannelModel::new(p, a)?;
        let r = montecarlo::estimate(dec, &ch, trials, seed)?;
        *out = QsurfTrialResult {
            trials: r.trials,
            failures: r.failures,
            fx: r.fx,
            fy: r.fy,
            fz: r.fz,
            aborted: r.aborted,
            p_hat: r.p_hat,
            ci_lo: r.ci.0,
            ci_hi: r.ci.1,
        };
        Ok(())
    })
}

use std::ffi::{CStr, CString};
use std::ptr;

use qsurf_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qsurf_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn build(family: &str, dx: u32, dz: u32) -> *mut QsurfCode {
    let f = CString::new(family).unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { qsurf_code_build(f.as_ptr(), dx, dz, &mut code) }, QSURF_OK);
    code
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { qsurf_string_free(s) };
    out
}

#[test]
fn build_describe_and_reload() {
    let code = build("rotated-xzzx", 3, 3);
    assert_eq!(unsafe { qsurf_code_n(code) }, 9);
    assert_eq!(unsafe { qsurf_code_num_generators(code) }, 8);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qsurf_code_describe(code, &mut s) }, QSURF_OK);
    let json = CString::new(take(s)).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { qsurf_code_from_json(json.as_ptr(), &mut again) }, QSURF_OK);
    assert_eq!(unsafe { qsurf_code_n(again) }, 9);
    unsafe {
        qsurf_code_free(again);
        qsurf_code_free(code);
    }
}

#[test]
fn error_codes_and_messages() {
    let f = CString::new("torus").unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { qsurf_code_build(f.as_ptr(), 3, 3, &mut code) }, QSURF_ERR_CONFIG);
    assert!(code.is_null());
    assert!(last_error().contains("torus"));

    let f = CString::new("surface").unwrap();
    assert_eq!(unsafe { qsurf_code_build(f.as_ptr(), 1, 3, &mut code) }, QSURF_ERR_CONFIG);
    assert_eq!(unsafe { qsurf_code_build(ptr::null(), 3, 3, &mut code) }, QSURF_ERR_NULL);
    assert_eq!(unsafe { qsurf_code_build(f.as_ptr(), 3, 3, ptr::null_mut()) }, QSURF_ERR_NULL);
    assert_eq!(unsafe { qsurf_code_n(ptr::null()) }, 0);

    let big = build("surface", 5, 5);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qsurf_code_wepoly(big, &mut s) }, QSURF_ERR_BUDGET);
    assert!(s.is_null());
    assert_eq!(unsafe { qsurf_code_describe(big, &mut s) }, QSURF_OK);
    assert_eq!(last_error(), "");
    unsafe {
        qsurf_string_free(s);
        qsurf_code_free(big);
    }
}

#[test]
fn decode_and_run() {
    let code = build("surface", 3, 3);
    let mut dec = ptr::null_mut();
    assert_eq!(unsafe { qsurf_decoder_new(code, &mut dec) }, QSURF_OK);

    // Z7 flags A6 and A7
    let mut syn = [0u8; 12];
    syn[5] = 1;
    syn[6] = 1;
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qsurf_decode(dec, syn.as_ptr(), syn.len(), &mut s) }, QSURF_OK);
    assert_eq!(take(s), "IIIIIIZIIIIII");

    syn[0] = 2;
    assert_eq!(
        unsafe { qsurf_decode(dec, syn.as_ptr(), syn.len(), &mut s) },
        QSURF_ERR_CONFIG
    );
    assert_eq!(unsafe { qsurf_decode(dec, syn.as_ptr(), 5, &mut s) }, QSURF_ERR_CONFIG);

    let mut outcome = -1;
    let e = CString::new("IZZIIIIIIIIII").unwrap();
    assert_eq!(unsafe { qsurf_run_error(dec, e.as_ptr(), &mut outcome) }, QSURF_OK);
    assert_ne!(outcome, QSURF_OUTCOME_SUCCESS);
    let e = CString::new("IIIIIIYIIIIII").unwrap();
    assert_eq!(unsafe { qsurf_run_error(dec, e.as_ptr(), &mut outcome) }, QSURF_OK);
    assert_eq!(outcome, QSURF_OUTCOME_SUCCESS);
    let e = CString::new("IIQ").unwrap();
    assert_eq!(unsafe { qsurf_run_error(dec, e.as_ptr(), &mut outcome) }, QSURF_ERR_CONFIG);

    unsafe {
        qsurf_decoder_free(dec);
        qsurf_code_free(code);
    }
}

#[test]
fn classify_and_estimate() {
    let code = build("rotated", 3, 3);
    let mut dec = ptr::null_mut();
    assert_eq!(unsafe { qsurf_decoder_new(code, &mut dec) }, QSURF_OK);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qsurf_classify(dec, 2, 1e6, &mut s) }, QSURF_OK);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    let zz = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["class_label"] == "ZZ")
        .unwrap();
    assert_eq!((zz["failures"].as_u64(), zz["total"].as_u64()), (Some(18), Some(36)));
    assert_eq!(unsafe { qsurf_classify(dec, 3, 10.0, &mut s) }, QSURF_ERR_BUDGET);

    let mut a = QsurfTrialResult::default();
    let mut b = QsurfTrialResult::default();
    assert_eq!(unsafe { qsurf_estimate(dec, 0.05, f64::INFINITY, 5000, 9, &mut a) }, QSURF_OK);
    assert_eq!(unsafe { qsurf_estimate(dec, 0.05, f64::INFINITY, 5000, 9, &mut b) }, QSURF_OK);
    assert_eq!((a.failures, a.fx, a.fy), (b.failures, 0, 0));
    assert!(a.ci_lo <= a.p_hat && a.p_hat <= a.ci_hi);
    assert_eq!(unsafe { qsurf_estimate(dec, 0.05, 2.5, 100, 9, &mut a) }, QSURF_OK);
    assert_eq!(unsafe { qsurf_estimate(dec, 2.0, 1.0, 100, 9, &mut a) }, QSURF_ERR_CONFIG);
    assert_eq!(unsafe { qsurf_estimate(dec, 0.1, f64::NAN, 100, 9, &mut a) }, QSURF_ERR_CONFIG);

    unsafe {
        qsurf_decoder_free(dec);
        qsurf_code_free(code);
    }
}

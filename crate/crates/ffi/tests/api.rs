use std::ffi::{CStr, CString};
use std::ptr;

use scjl_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(scjl_last_error_message()) }.to_str().unwrap().to_owned()
}

fn sample(kind: ScjlMatrixKind, n: usize, m: usize, s: usize, seed: u64) -> *mut ScjlMatrix {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { scjl_matrix_sample(kind, n, m, s, seed, &mut h) }, ScjlStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn version_matches_core() {
    let v = unsafe { CStr::from_ptr(scjl_version()) }.to_str().unwrap();
    assert_eq!(v, scjl::VERSION);
}

#[test]
fn select_params_worked_example() {
    let (mut m, mut s) = (0usize, 0usize);
    let st = unsafe { scjl_select_params(0.5, 0.05, std::f64::consts::E, 1.0, 1.0, &mut m, &mut s) };
    assert_eq!(st, ScjlStatus::Ok);
    assert_eq!((m, s), (98, 6));
    assert_eq!(last_error(), "");

    let st = unsafe { scjl_select_params(0.5, 0.05, 1.0, 1.0, 1.0, &mut m, &mut s) };
    assert_eq!(st, ScjlStatus::InvalidArgument);
    assert!(last_error().contains("[e, 1/delta]"));
    let st = unsafe { scjl_select_params(0.5, 0.05, 3.0, 1.0, 1.0, ptr::null_mut(), &mut s) };
    assert_eq!(st, ScjlStatus::NullPointer);
}

#[test]
fn apply_and_error_term() {
    let h = sample(ScjlMatrixKind::SignConsistent, 3, 8, 2, 5);
    let (mut n, mut m, mut s) = (0, 0, 0);
    assert_eq!(unsafe { scjl_matrix_dims(h, &mut n, &mut m, &mut s) }, ScjlStatus::Ok);
    assert_eq!((n, m, s), (3, 8, 2));

    let x = [0.0, 3.0, 4.0];
    let mut y = vec![0.0; 8];
    assert_eq!(unsafe { scjl_matrix_apply(h, x.as_ptr(), 3, y.as_mut_ptr(), 8) }, ScjlStatus::Ok);
    let norm_y: f64 = y.iter().map(|v| v * v).sum();
    let mut z = f64::NAN;
    assert_eq!(unsafe { scjl_matrix_error_z(h, x.as_ptr(), 3, &mut z) }, ScjlStatus::Ok);
    assert!((z - (norm_y - 25.0)).abs() < 1e-12);

    // A basis vector keeps its norm.
    let e = [1.0, 0.0, 0.0];
    assert_eq!(unsafe { scjl_matrix_error_z(h, e.as_ptr(), 3, &mut z) }, ScjlStatus::Ok);
    assert_eq!(z, 0.0);

    assert_eq!(unsafe { scjl_matrix_apply(h, x.as_ptr(), 2, y.as_mut_ptr(), 8) }, ScjlStatus::DimensionMismatch);
    assert_eq!(unsafe { scjl_matrix_apply(h, x.as_ptr(), 3, y.as_mut_ptr(), 7) }, ScjlStatus::DimensionMismatch);
    assert_eq!(unsafe { scjl_matrix_apply(h, x.as_ptr(), 3, ptr::null_mut(), 8) }, ScjlStatus::NullPointer);
    assert_eq!(unsafe { scjl_matrix_error_z(ptr::null(), x.as_ptr(), 3, &mut z) }, ScjlStatus::NullPointer);
    unsafe { scjl_matrix_free(h) };
}

#[test]
fn json_round_trip_through_handles() {
    for kind in [ScjlMatrixKind::SignConsistent, ScjlMatrixKind::SparseJl] {
        let h = sample(kind, 5, 12, 3, 9);
        let mut text = ptr::null_mut();
        assert_eq!(unsafe { scjl_matrix_to_json(h, &mut text) }, ScjlStatus::Ok);
        let doc = unsafe { CStr::from_ptr(text) }.to_owned();
        let mut back = ptr::null_mut();
        assert_eq!(unsafe { scjl_matrix_from_json(doc.as_ptr(), &mut back) }, ScjlStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(unsafe { scjl_matrix_to_json(back, &mut again) }, ScjlStatus::Ok);
        assert_eq!(unsafe { CStr::from_ptr(again) }, doc.as_c_str());
        unsafe {
            scjl_string_free(text);
            scjl_string_free(again);
            scjl_matrix_free(h);
            scjl_matrix_free(back);
        }
    }
}

#[test]
fn malformed_documents_are_parse_errors() {
    let mut h = ptr::null_mut();
    let bad = CString::new("{\"format\":\"nope\"}").unwrap();
    assert_eq!(unsafe { scjl_matrix_from_json(bad.as_ptr(), &mut h) }, ScjlStatus::Parse);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { scjl_matrix_from_json(ptr::null(), &mut h) }, ScjlStatus::NullPointer);
}

#[test]
fn invalid_dimensions_are_rejected() {
    let mut h = ptr::null_mut();
    let st = unsafe { scjl_matrix_sample(ScjlMatrixKind::SignConsistent, 4, 3, 5, 1, &mut h) };
    assert_eq!(st, ScjlStatus::InvalidArgument);
    assert!(h.is_null());
}

#[test]
fn exact_moments() {
    let mut v = 0.0;
    // Bin(1, 1/2): E[X^2] = 1/2.
    assert_eq!(unsafe { scjl_binomial_moment(1, 0.5, 2.0, &mut v) }, ScjlStatus::Ok);
    assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
    // Two 1-subsets of [4] overlap with probability 1/4.
    assert_eq!(unsafe { scjl_hypergeometric_moment(4, 1, 3.0, &mut v) }, ScjlStatus::Ok);
    assert!((v - 0.25f64.cbrt()).abs() < 1e-15);
    assert_eq!(unsafe { scjl_binomial_moment(3, 1.5, 2.0, &mut v) }, ScjlStatus::InvalidArgument);
}

#[test]
fn free_accepts_null() {
    unsafe {
        scjl_matrix_free(ptr::null_mut());
        scjl_string_free(ptr::null_mut());
    }
}

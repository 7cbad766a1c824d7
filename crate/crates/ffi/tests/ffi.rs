use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use grass_slice_ffi::*;

fn partition(parts: &[usize]) -> *mut GsPartition {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gs_partition_new(parts.as_ptr(), parts.len(), &mut out) }, GsStatus::Ok);
    out
}

fn parts_of(p: *const GsPartition) -> Vec<usize> {
    let mut len = 0;
    unsafe {
        assert_eq!(gs_partition_len(p, &mut len), GsStatus::Ok);
        let mut buf = vec![0; len];
        assert_eq!(gs_partition_parts(p, buf.as_mut_ptr(), len), GsStatus::Ok);
        buf
    }
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gs_string_free(s) };
    text
}

fn last_error() -> String {
    take_string(gs_last_error())
}

#[test]
fn dictionary_round_trip() {
    let (v, d) = ([1usize, 1], [1usize, 1]);
    let mut rec = ptr::null_mut();
    unsafe {
        assert_eq!(gs_dict_forward(v.as_ptr(), 2, d.as_ptr(), 2, &mut rec), GsStatus::Ok);
        let (mut lambda, mut mu) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(gs_record_lambda(rec, &mut lambda), GsStatus::Ok);
        assert_eq!(gs_record_mu(rec, &mut mu), GsStatus::Ok);
        assert_eq!(parts_of(lambda), vec![2, 1]);
        assert_eq!(parts_of(mu), vec![3]);
        let mut json = ptr::null_mut();
        assert_eq!(gs_record_to_json(rec, &mut json), GsStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(value["a"], serde_json::json!([1, 1, 1]));
        assert_eq!(value["schema"], "grass-slice/1");

        let a = [1usize, 1, 1];
        let mut back = ptr::null_mut();
        assert_eq!(gs_dict_backward_weight(lambda, a.as_ptr(), 3, &mut back), GsStatus::Ok);
        let mut back_json = ptr::null_mut();
        assert_eq!(gs_record_to_json(back, &mut back_json), GsStatus::Ok);
        let back_value: serde_json::Value = serde_json::from_str(&take_string(back_json)).unwrap();
        assert_eq!(back_value["v"], serde_json::json!([1, 1]));
        assert_eq!(back_value["d"], serde_json::json!([1, 1]));

        let mut sorted = ptr::null_mut();
        assert_eq!(gs_dict_backward(lambda, mu, &mut sorted), GsStatus::Ok);
        gs_record_free(sorted);
        gs_record_free(back);
        gs_partition_free(lambda);
        gs_partition_free(mu);
        gs_record_free(rec);
    }
}

#[test]
fn counts_match_known_values() {
    let (l11, mu2) = (partition(&[1, 1]), partition(&[2]));
    let mut n = 0;
    unsafe {
        assert_eq!(gs_slice_count(l11, mu2, 2, 1 << 20, &mut n), GsStatus::Ok);
        assert_eq!(n, 4);
        let shape = partition(&[2, 1]);
        let content = [1usize, 1, 1];
        assert_eq!(gs_kostka(shape, content.as_ptr(), 3, &mut n), GsStatus::Ok);
        assert_eq!(n, 2);
        let mu20 = partition(&[2, 0]);
        let mut holds = false;
        let mut report = ptr::null_mut();
        assert_eq!(gs_decompose(mu20, 2, 2, 1 << 20, &mut holds, &mut report), GsStatus::Ok);
        assert!(holds);
        let value: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(value["grassmannian_points"], 7);
        for p in [l11, mu2, shape, mu20] {
            gs_partition_free(p);
        }
    }
}

#[test]
fn fiber_fit_gives_the_benchmark_polynomial() {
    let lambda = partition(&[2, 1]);
    let a = [1usize, 1, 1];
    let primes = [2u64, 3, 5, 7];
    unsafe {
        let mut n = 0;
        assert_eq!(gs_fiber_count(lambda, a.as_ptr(), 3, 3, 1 << 20, &mut n), GsStatus::Ok);
        assert_eq!(n, 7);
        let mut poly = ptr::null_mut();
        assert_eq!(gs_fiber_fit(lambda, a.as_ptr(), 3, primes.as_ptr(), 4, &mut poly), GsStatus::Ok);
        let (mut deg, mut c0, mut c1, mut c5) = (0, 0, 0, 7);
        assert_eq!(gs_polynomial_degree(poly, &mut deg), GsStatus::Ok);
        assert_eq!(gs_polynomial_coefficient(poly, 0, &mut c0), GsStatus::Ok);
        assert_eq!(gs_polynomial_coefficient(poly, 1, &mut c1), GsStatus::Ok);
        assert_eq!(gs_polynomial_coefficient(poly, 5, &mut c5), GsStatus::Ok);
        assert_eq!((deg, c0, c1, c5), (1, 1, 2, 0));
        let mut text = ptr::null_mut();
        assert_eq!(gs_polynomial_to_string(poly, &mut text), GsStatus::Ok);
        assert_eq!(take_string(text), "2q + 1");
        gs_polynomial_free(poly);
        gs_partition_free(lambda);
    }
}

#[test]
fn matrices_and_phi_through_json() {
    let zero = CString::new(r#"{"field": "Q", "matrix": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}"#).unwrap();
    let point = CString::new(
        r#"{"field": "Q", "n": 3, "v": [1, 1], "d": [1, 1], "b": [[[1]]], "bbar": [[[0]]],
            "p": [[[1]], [[0]]], "q": [[[0]], [[1]]]}"#,
    )
    .unwrap();
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(gs_matrix_from_json(zero.as_ptr(), &mut m), GsStatus::Ok);
        let mut ty = ptr::null_mut();
        assert_eq!(gs_matrix_jordan_type(m, &mut ty), GsStatus::Ok);
        assert_eq!(parts_of(ty), vec![1, 1, 1]);
        gs_partition_free(ty);
        gs_matrix_free(m);

        let mut out = ptr::null_mut();
        assert_eq!(gs_phi_json(point.as_ptr(), &mut out), GsStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(value["jordan_type"], serde_json::json!([3]));
        assert_eq!(value["matrix"][1][2], "1");
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let mut out = ptr::null_mut();
        let bad = [1usize, 2];
        assert_eq!(gs_partition_new(bad.as_ptr(), 2, &mut out), GsStatus::InvalidInput);
        assert!(out.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(gs_partition_new(ptr::null(), 2, &mut out), GsStatus::NullPointer);
        assert!(last_error().contains("null"));

        let (l2, mu11) = (partition(&[2]), partition(&[1, 1]));
        let mut n = 0;
        assert_eq!(gs_slice_count(l2, mu11, 2, 1 << 20, &mut n), GsStatus::DominanceViolation);
        let (l111, mu3) = (partition(&[1, 1, 1]), partition(&[3]));
        assert_eq!(gs_slice_count(l111, mu3, 3, 10, &mut n), GsStatus::BudgetExceeded);
        assert!(last_error().contains("budget"));

        let garbage = CString::new("{not json").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(gs_matrix_from_json(garbage.as_ptr(), &mut m), GsStatus::InvalidInput);
        let off = CString::new(r#"{"field": "F5", "n": 2, "v": [1], "d": [1], "p": [[[1]]], "q": [[[1]]]}"#).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(gs_phi_json(off.as_ptr(), &mut s), GsStatus::NotInLambda);

        assert_eq!(gs_kostka(ptr::null(), ptr::null(), 0, &mut n), GsStatus::NullPointer);
        for p in [l2, mu11, l111, mu3] {
            gs_partition_free(p);
        }
        gs_partition_free(ptr::null_mut());
        gs_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(gs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/grass_slice.h")).unwrap();
    for name in [
        "gs_last_error",
        "gs_kostka",
        "gs_dict_forward",
        "gs_dict_backward",
        "gs_matrix_jordan_type",
        "gs_phi_json",
        "gs_slice_count",
        "gs_decompose",
        "gs_fiber_count",
        "gs_fiber_fit",
        "GS_STATUS_BUDGET_EXCEEDED",
        "typedef struct GsPartition GsPartition",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}

/// Builds `tests/c_api.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libgrass_slice_ffi.a");
    assert!(lib.exists(), "static library not at {}", lib.display());
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::temp_dir().join(format!("grass_slice_c_api_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/c_api.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

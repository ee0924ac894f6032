use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ramify_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ramify_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ramify_last_error()).to_str().unwrap().to_string()
}

#[test]
fn poly_handle_round_trip() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(ramify_poly_parse(c("5").as_ptr(), c("2*t1^-3 + t2^-2").as_ptr(), &mut p), RamifyStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(ramify_poly_to_string(p, &mut s), RamifyStatus::Ok);
        assert_eq!(take(s), "2*t1^-3 + t2^-2");
        ramify_poly_free(p);
    }
}

#[test]
fn errors_have_codes_and_messages() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(ramify_poly_parse(c("3").as_ptr(), c("t3").as_ptr(), &mut p), RamifyStatus::Parse);
        assert!(p.is_null());
        assert!(last_error().contains("position 1"));
        assert_eq!(ramify_poly_parse(c("4").as_ptr(), c("t1").as_ptr(), &mut p), RamifyStatus::Field);
        assert_eq!(ramify_poly_parse(ptr::null(), c("t1").as_ptr(), &mut p), RamifyStatus::NullPointer);
        let mut r = 0u64;
        assert_eq!(ramify_r_prime(ptr::null(), 2, 2, &mut r), RamifyStatus::NullPointer);
        let pts = [0i64, 0, 1, 1];
        assert_eq!(ramify_r_prime(pts.as_ptr(), 2, 3, &mut r), RamifyStatus::InvalidArgument);
        let bad = [0i64, 0, 1, 0];
        assert_eq!(ramify_r_prime(bad.as_ptr(), 2, 2, &mut r), RamifyStatus::InvalidArgument);
    }
}

#[test]
fn staircase_functions() {
    unsafe {
        let pts = [0i64, 0, 1, 4, 2, 5];
        let (mut r, mut closed, mut bound, mut area) = (0u64, 0i64, 0i64, 0i64);
        assert_eq!(ramify_r_prime(pts.as_ptr(), 3, RAMIFY_TYPE_II, &mut r), RamifyStatus::Ok);
        assert_eq!(ramify_r_prime_closed(pts.as_ptr(), 3, RAMIFY_TYPE_II, &mut closed), RamifyStatus::Ok);
        assert_eq!(ramify_kato_bound(pts.as_ptr(), 3, RAMIFY_TYPE_II, &mut bound), RamifyStatus::Ok);
        assert_eq!(ramify_area(pts.as_ptr(), 3, &mut area), RamifyStatus::Ok);
        assert_eq!((r, closed), (10, 10));
        assert_eq!(bound, 10);
        // 1*(4+0) + 1*(5+4); the hull ((0,0),(2,5)) alone gives the 10 above
        assert_eq!(area, 13);
        let one = [0i64, 0, 1, 2];
        assert_eq!(ramify_r_prime(one.as_ptr(), 2, RAMIFY_TYPE_I, &mut r), RamifyStatus::Ok);
        assert_eq!(r, 1);
        assert_eq!(ramify_r_prime(ptr::null(), 0, RAMIFY_TYPE_I, &mut r), RamifyStatus::Ok);
        assert_eq!(r, 0);
    }
}

#[test]
fn report_and_simulation() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ramify_report_json(c("3").as_ptr(), c("t1^-2*t2").as_ptr(), 2, 7, &mut s), RamifyStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["simulation"]["r_x"], 2);
        assert_eq!(v["r_prime"]["total"], 2);
        assert_eq!(v["verdicts"]["oracle"], true);

        let mut p = ptr::null_mut();
        assert_eq!(ramify_poly_parse(c("2").as_ptr(), c("t1^-2*t2").as_ptr(), &mut p), RamifyStatus::Ok);
        let (mut rx, mut tree) = (0u64, ptr::null_mut());
        assert_eq!(ramify_simulate(p, RAMIFY_TYPE_II, &mut rx, &mut tree), RamifyStatus::Ok);
        assert_eq!(rx, 2);
        let t: serde_json::Value = serde_json::from_str(&take(tree)).unwrap();
        assert_eq!(t["r_x"], 2);
        // type I inputs cannot have t2 poles
        let mut q = ptr::null_mut();
        assert_eq!(ramify_poly_parse(c("2").as_ptr(), c("t2^-1").as_ptr(), &mut q), RamifyStatus::Ok);
        assert_eq!(ramify_simulate(q, RAMIFY_TYPE_I, &mut rx, ptr::null_mut()), RamifyStatus::Computation);
        ramify_poly_free(q);
        ramify_poly_free(p);
    }
}

#[test]
fn euler_json() {
    unsafe {
        let cfg = r#"{"components":[{"name":"L","sw":2}],"intersections":[[1]],"klog":[-3],"r_sum":0}"#;
        let mut s = ptr::null_mut();
        assert_eq!(ramify_euler_delta_json(c(cfg).as_ptr(), &mut s), RamifyStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["delta"], -2);
        let bad = r#"{"components":[{"name":"L","sw":2}],"intersections":[[1,0]],"klog":[-3],"r_sum":0}"#;
        assert_eq!(ramify_euler_delta_json(c(bad).as_ptr(), &mut s), RamifyStatus::InvalidArgument);
        assert_eq!(ramify_euler_delta_json(c("{").as_ptr(), &mut s), RamifyStatus::Parse);
    }
}

/// Compiles the C smoke test against the generated header and static library.
#[test]
fn header_compiles_and_links() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| dir.join("../../target"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = [profile_dir.join("libramify_ffi.a"), target.join("debug/libramify_ffi.a")]
        .into_iter()
        .find(|p| p.exists());
    let Some(lib) = lib else {
        eprintln!("skipping: static library not built yet");
        return;
    };
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ramify_smoke");
    let status = match Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("skipping: no C compiler");
            return;
        }
    };
    assert!(status.success(), "C smoke test failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

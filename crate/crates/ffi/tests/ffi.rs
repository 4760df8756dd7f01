use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ratiolab_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ratiolab_string_free(s) };
    out
}

fn last_error() -> String {
    let p = ratiolab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn instance(json: &str) -> *mut RatiolabInstance {
    let json = CString::new(json).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { ratiolab_instance_from_json(json.as_ptr(), &mut inst) }, RatiolabStatus::Ok);
    inst
}

const DEC: &str = r#"{"family":"decreasing","n":10,"alpha":4,"beta":1,"epsilon":"1","plant":[0,1,2,3]}"#;

#[test]
fn distinguish_probability_worked_value() {
    let mut s = ptr::null_mut();
    let st = unsafe { ratiolab_distinguish_probability(14, 4, 1, 6, &mut s) };
    assert_eq!(st, RatiolabStatus::Ok);
    assert_eq!(take(s), "15/1001");
}

#[test]
fn eval_and_ratio() {
    let inst = instance(DEC);
    let mut n = 0usize;
    assert_eq!(unsafe { ratiolab_instance_n(inst, &mut n) }, RatiolabStatus::Ok);
    assert_eq!(n, 10);
    let set = [0usize, 1, 2, 3];
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ratiolab_eval(inst, RatiolabFunction::F, set.as_ptr(), 4, &mut s), RatiolabStatus::Ok);
        assert_eq!(take(s), "1/1");
        assert_eq!(ratiolab_eval(inst, RatiolabFunction::GPlanted, set.as_ptr(), 4, &mut s), RatiolabStatus::Ok);
        assert_eq!(take(s), "4/1");
        assert_eq!(ratiolab_ratio(inst, set.as_ptr(), 4, &mut s), RatiolabStatus::Ok);
        assert_eq!(take(s), "1/4");
        assert_eq!(ratiolab_eval(inst, RatiolabFunction::F, ptr::null(), 0, &mut s), RatiolabStatus::Ok);
        assert_eq!(take(s), "5/1");
        ratiolab_instance_free(inst);
    }
}

#[test]
fn verify_and_solve() {
    let inst = instance(DEC);
    let mut v = usize::MAX;
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ratiolab_verify(inst, RatiolabFunction::F, &mut v), RatiolabStatus::Ok);
        assert_eq!(v, 0);
        assert_eq!(ratiolab_solve_brute(inst, &mut s), RatiolabStatus::Ok);
        ratiolab_instance_free(inst);
    }
    let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(json["value"], "1/4");
    assert_eq!(json["argset"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn game_json() {
    let inst = instance(r#"{"family":"increasing","n":12,"m":"1000","epsilon":"1/100"}"#);
    let mut s = ptr::null_mut();
    let st = unsafe { ratiolab_game(inst, RatiolabAlgorithm::RandomSearch, 200, 3, 1, &mut s) };
    unsafe { ratiolab_instance_free(inst) };
    assert_eq!(st, RatiolabStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(json["trials"].as_array().unwrap().len(), 3);
    assert_eq!(json["summary"]["distinguished"], 0);
}

#[test]
fn error_codes() {
    let mut inst = ptr::null_mut();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ratiolab_instance_from_json(ptr::null(), &mut inst), RatiolabStatus::NullPointer);
        let bad = CString::new(r#"{"family":"decreasing","n":10,"alpha":11,"beta":1,"epsilon":"1"}"#).unwrap();
        assert_eq!(ratiolab_instance_from_json(bad.as_ptr(), &mut inst), RatiolabStatus::InvalidInstance);
        assert!(last_error().contains("alpha=11"));

        let big = instance(r#"{"family":"increasing","n":30,"epsilon":"1/100"}"#);
        let mut v = 0;
        assert_eq!(ratiolab_verify(big, RatiolabFunction::F, &mut v), RatiolabStatus::GuardExceeded);
        assert_eq!(ratiolab_solve_brute(big, &mut s), RatiolabStatus::GuardExceeded);
        ratiolab_instance_free(big);

        let dec = instance(DEC);
        assert_eq!(ratiolab_eval(dec, RatiolabFunction::G, ptr::null(), 0, &mut s), RatiolabStatus::InvalidArgument);
        let dup = [1usize, 1];
        assert_eq!(ratiolab_ratio(dec, dup.as_ptr(), 2, &mut s), RatiolabStatus::InvalidArgument);
        assert_eq!(ratiolab_eval(dec, RatiolabFunction::F, ptr::null(), 3, &mut s), RatiolabStatus::NullPointer);
        ratiolab_instance_free(dec);

        let inc = instance(r#"{"family":"increasing","n":6,"epsilon":"1/2"}"#);
        assert_eq!(ratiolab_ratio(inc, ptr::null(), 0, &mut s), RatiolabStatus::UndefinedRatio);
        ratiolab_instance_free(inc);

        let tiny = instance(r#"{"family":"increasing","n":4,"epsilon":"1/2"}"#);
        assert_eq!(
            ratiolab_game(tiny, RatiolabAlgorithm::RandomSearch, 400, 1, 0, &mut s),
            RatiolabStatus::NoConsistentPlant
        );
        ratiolab_instance_free(tiny);

        assert_eq!(ratiolab_distinguish_probability(3, 4, 0, 1, &mut s), RatiolabStatus::InvalidArgument);
        assert_eq!(ratiolab_distinguish_probability(3, 1, 0, 1, ptr::null_mut()), RatiolabStatus::NullPointer);
        ratiolab_instance_free(ptr::null_mut());
        ratiolab_string_free(ptr::null_mut());
    }
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ratiolab_distinguish_probability(3, 1, 0, 1, &mut p) }, RatiolabStatus::Ok);
    assert!(ratiolab_last_error().is_null());
    take(p);
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(ratiolab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/ratiolab.h")).unwrap();
    for sym in [
        "ratiolab_version",
        "ratiolab_last_error",
        "ratiolab_string_free",
        "ratiolab_instance_from_json",
        "ratiolab_instance_free",
        "ratiolab_instance_n",
        "ratiolab_eval",
        "ratiolab_ratio",
        "ratiolab_verify",
        "ratiolab_solve_brute",
        "ratiolab_game",
        "ratiolab_distinguish_probability",
        "typedef struct RatiolabInstance RatiolabInstance;",
        "RATIOLAB_STATUS_GUARD_EXCEEDED = 4",
        "RATIOLAB_STATUS_PANIC = 99",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}

/// Compiles and runs a C program against the static library when a C
/// compiler is on PATH.
#[test]
fn c_smoke_test() {
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libratiolab_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C smoke test: no cc or no static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}


use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use kraus_ffi::*;

fn state_json(state: *const KrausState) -> String {
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { kraus_state_to_json(state, &mut text) }, KrausStatus::Ok);
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
    unsafe { kraus_string_free(text) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(kraus_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn synthesis_round_trip_through_handles() {
    unsafe {
        let mut target = ptr::null_mut();
        let mut input = ptr::null_mut();
        assert_eq!(kraus_state_random(2, 2, 5, &mut target), KrausStatus::Ok);
        assert_eq!(kraus_state_random(2, 1, 6, &mut input), KrausStatus::Ok);
        assert_eq!(kraus_state_dim(target), 2);

        let mut phi = ptr::null_mut();
        let mut residual = f64::NAN;
        assert_eq!(
            kraus_synthesize(input, target, &mut phi, &mut residual),
            KrausStatus::Ok
        );
        assert!(residual <= 1e-10);

        let mut pta = ptr::null_mut();
        assert_eq!(kraus_synthesize_pure_to_any(input, target, &mut pta), KrausStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(kraus_channel_apply(pta, input, &mut out), KrausStatus::Ok);
        let mut d = 1.0;
        assert_eq!(kraus_trace_distance(out, target, &mut d), KrausStatus::Ok);
        assert!(d <= 1e-10);

        let mut buf = [0.0f64; 8];
        assert_eq!(kraus_state_entries(out, buf.as_mut_ptr(), buf.len()), KrausStatus::Ok);
        assert!((buf[0] + buf[6] - 1.0).abs() <= 1e-12);
        assert_eq!(
            kraus_state_entries(out, buf.as_mut_ptr(), 4),
            KrausStatus::InvalidArgument
        );

        kraus_state_free(out);
        kraus_channel_free(pta);
        kraus_channel_free(phi);
        kraus_state_free(input);
        kraus_state_free(target);
    }
}

#[test]
fn json_round_trip_is_exact() {
    unsafe {
        let mut rho = ptr::null_mut();
        assert_eq!(kraus_state_random(3, 2, 9, &mut rho), KrausStatus::Ok);
        let text = state_json(rho);
        let c = CString::new(text.clone()).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(kraus_state_from_json(c.as_ptr(), &mut back), KrausStatus::Ok);
        assert_eq!(state_json(back), text);
        kraus_state_free(back);
        kraus_state_free(rho);
    }
}

#[test]
fn compose_minimal_and_equality() {
    unsafe {
        let mut target = ptr::null_mut();
        kraus_state_random(2, 2, 1, &mut target);
        let mut a = ptr::null_mut();
        assert_eq!(kraus_synthesize_all_to_any(target, &mut a), KrausStatus::Ok);
        let mut aa = ptr::null_mut();
        assert_eq!(kraus_channel_compose(a, a, &mut aa), KrausStatus::Ok);
        assert_eq!(kraus_channel_len(aa), kraus_channel_len(a) * kraus_channel_len(a));
        // A replacement channel is idempotent.
        let mut eq = false;
        assert_eq!(kraus_channel_equal(aa, a, 1e-10, &mut eq), KrausStatus::Ok);
        assert!(eq);
        let mut min = ptr::null_mut();
        assert_eq!(kraus_channel_minimal(aa, &mut min), KrausStatus::Ok);
        let mut rank = 0usize;
        assert_eq!(kraus_channel_rank(aa, &mut rank), KrausStatus::Ok);
        assert_eq!(kraus_channel_len(min), rank);
        assert!(rank <= 4);
        assert_eq!(kraus_channel_equal(aa, a, -1.0, &mut eq), KrausStatus::InvalidArgument);
        for h in [a, aa, min] {
            kraus_channel_free(h);
        }
        kraus_state_free(target);
    }
}

#[test]
fn dilation_replay_matches_apply() {
    let json = r#"{"dim": 2, "ops": [
        {"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [0.8366600265340756, 0]]},
        {"rows": 2, "cols": 2, "data": [[0, 0], [0.5477225575051661, 0], [0, 0], [0, 0]]}]}"#;
    let c = CString::new(json).unwrap();
    unsafe {
        let mut phi = ptr::null_mut();
        assert_eq!(
            kraus_channel_from_json(c.as_ptr(), &mut phi),
            KrausStatus::Ok,
            "{}",
            last_error()
        );
        let mut d = ptr::null_mut();
        assert_eq!(kraus_channel_dilate(phi, &mut d), KrausStatus::Ok);
        assert_eq!(kraus_dilation_ancilla_dim(d), 2);
        for seed in 0..10 {
            let mut rho = ptr::null_mut();
            kraus_state_random(2, 2, seed, &mut rho);
            let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
            assert_eq!(kraus_channel_apply(phi, rho, &mut a), KrausStatus::Ok);
            assert_eq!(kraus_dilation_replay(d, rho, &mut b), KrausStatus::Ok);
            let mut dist = 1.0;
            kraus_trace_distance(a, b, &mut dist);
            assert!(dist <= 1e-9);
            for h in [rho, a, b] {
                kraus_state_free(h);
            }
        }
        let mut text = ptr::null_mut();
        assert_eq!(kraus_dilation_to_json(d, &mut text), KrausStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("\"unitary\""));
        kraus_string_free(text);
        kraus_dilation_free(d);
        kraus_channel_free(phi);
    }
}

#[test]
fn failures_report_status_and_message() {
    unsafe {
        let mut h = ptr::null_mut();
        let bad = CString::new("{not json").unwrap();
        assert_eq!(kraus_state_from_json(bad.as_ptr(), &mut h), KrausStatus::Parse);
        assert!(h.is_null());
        assert!(!last_error().is_empty());

        let not_psd = CString::new(r#"{"rows": 2, "cols": 2, "data": [[1.5, 0], [0, 0], [0, 0], [-0.5, 0]]}"#).unwrap();
        assert_eq!(
            kraus_state_from_json(not_psd.as_ptr(), &mut h),
            KrausStatus::InvalidState
        );

        assert_eq!(kraus_state_from_json(ptr::null(), &mut h), KrausStatus::NullPointer);
        assert_eq!(kraus_state_random(0, 1, 0, &mut h), KrausStatus::InvalidArgument);
        assert_eq!(kraus_state_random(2, 3, 0, &mut h), KrausStatus::InvalidArgument);

        let mut q2 = ptr::null_mut();
        let mut q3 = ptr::null_mut();
        kraus_state_random(2, 2, 0, &mut q2);
        kraus_state_random(3, 3, 0, &mut q3);
        let mut d = 0.0;
        assert_eq!(kraus_trace_distance(q2, q3, &mut d), KrausStatus::Dimension);

        let mut mixed = ptr::null_mut();
        kraus_state_random(2, 2, 1, &mut mixed);
        let mut phi = ptr::null_mut();
        assert_eq!(
            kraus_synthesize_pure_to_any(mixed, q2, &mut phi),
            KrausStatus::Inapplicable
        );
        for s in [q2, q3, mixed] {
            kraus_state_free(s);
        }
        // Null handles are accepted by the free functions.
        kraus_state_free(ptr::null_mut());
        kraus_channel_free(ptr::null_mut());
        kraus_dilation_free(ptr::null_mut());
        kraus_string_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/kraus.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libkraus_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).ends_with(" ok\n"));
}

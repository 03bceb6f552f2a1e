use std::ffi::{CStr, CString};
use std::ptr;

use zeromass_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(zm_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn matrix(out: &[f64; ZM_MATRIX_DOUBLES], i: usize, j: usize) -> (f64, f64) {
    (out[2 * (4 * i + j)], out[2 * (4 * i + j) + 1])
}

fn small_config(suite: &str) -> *mut ZmConfig {
    let cfg = zm_config_new();
    let name = CString::new(suite).unwrap();
    unsafe {
        assert_eq!(zm_config_clear_suites(cfg), ZmStatus::Ok);
        assert_eq!(zm_config_add_suite(cfg, name.as_ptr()), ZmStatus::Ok);
        assert_eq!(zm_config_set_samples(cfg, 3), ZmStatus::Ok);
        assert_eq!(zm_config_set_seed(cfg, 11), ZmStatus::Ok);
    }
    cfg
}

#[test]
fn run_round_trip() {
    let cfg = small_config("clifford");
    let mut run = ptr::null_mut();
    unsafe {
        assert_eq!(zm_run(cfg, &mut run), ZmStatus::Ok);
        assert_eq!(zm_run_exit_code(run), 0);
        let json = zm_run_json(run);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["config"]["seed"], 11);
        zm_string_free(json);
        let md = zm_run_markdown(run);
        assert!(CStr::from_ptr(md).to_str().unwrap().contains("| clifford |"));
        zm_string_free(md);
        zm_run_free(run);
        zm_config_free(cfg);
    }
}

#[test]
fn unreachable_tolerance_gives_failing_run() {
    let cfg = small_config("projectors");
    let mut run = ptr::null_mut();
    unsafe {
        assert_eq!(zm_config_set_tolerances(cfg, 1e-30, 1e-6, 1e-4), ZmStatus::Ok);
        assert_eq!(zm_run(cfg, &mut run), ZmStatus::Ok);
        assert_eq!(zm_run_exit_code(run), 1);
        zm_run_free(run);
        zm_config_free(cfg);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let cfg = zm_config_new();
    unsafe {
        let bad = CString::new("gravity").unwrap();
        assert_eq!(zm_config_add_suite(cfg, bad.as_ptr()), ZmStatus::UnknownSuite);
        assert!(last_error().contains("so4"), "{}", last_error());
        assert_eq!(zm_config_set_samples(cfg, 0), ZmStatus::InvalidArgument);
        assert_eq!(
            zm_config_set_tolerances(cfg, -1.0, 1e-6, 1e-4),
            ZmStatus::InvalidArgument
        );
        assert_eq!(zm_config_set_momentum_range(cfg, 2.0, 1.0), ZmStatus::InvalidArgument);
        assert_eq!(zm_config_set_seed(ptr::null_mut(), 1), ZmStatus::NullPointer);
        assert_eq!(zm_run_exit_code(ptr::null()), -1);
        assert!(zm_run_json(ptr::null()).is_null());

        assert_eq!(zm_config_clear_suites(cfg), ZmStatus::Ok);
        let mut run = ptr::null_mut();
        assert_eq!(zm_run(cfg, &mut run), ZmStatus::InvalidArgument);
        assert!(run.is_null());
        zm_config_free(cfg);

        let path = CString::new("/nonexistent/zm.conf").unwrap();
        let mut loaded = ptr::null_mut();
        assert_eq!(zm_config_load_file(path.as_ptr(), &mut loaded), ZmStatus::Io);
        assert!(last_error().contains("/nonexistent/zm.conf"));
    }
}

#[test]
fn load_file_applies_keys() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zm.conf");
    std::fs::write(&file, "seed = 5\nsamples = 2\nsuites = so4\n").unwrap();
    let path = CString::new(file.to_str().unwrap()).unwrap();
    let mut cfg = ptr::null_mut();
    let mut run = ptr::null_mut();
    unsafe {
        assert_eq!(zm_config_load_file(path.as_ptr(), &mut cfg), ZmStatus::Ok);
        assert_eq!(zm_run(cfg, &mut run), ZmStatus::Ok);
        let json = zm_run_json(run);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["suites"][0]["suite"], "so4");
        assert_eq!(v["config"]["seed"], 5);
        zm_string_free(json);
        zm_run_free(run);
        zm_config_free(cfg);
    }
}

#[test]
fn operator_matrices() {
    let mut out = [0.0; ZM_MATRIX_DOUBLES];
    unsafe {
        // γ0 = diag(1, 1, −1, −1)
        assert_eq!(zm_gamma(0, out.as_mut_ptr()), ZmStatus::Ok);
        assert_eq!(matrix(&out, 0, 0), (1.0, 0.0));
        assert_eq!(matrix(&out, 3, 3), (-1.0, 0.0));
        assert_eq!(zm_gamma(5, out.as_mut_ptr()), ZmStatus::InvalidArgument);

        // Along e3, ε̂ = α3: ⟨0|α3|2⟩ = 1.
        let p = [0.0, 0.0, 2.0];
        assert_eq!(zm_energy_sign(p.as_ptr(), out.as_mut_ptr()), ZmStatus::Ok);
        assert!((matrix(&out, 0, 2).0 - 1.0).abs() < 1e-15);
        assert_eq!(zm_hamiltonian(p.as_ptr(), out.as_mut_ptr()), ZmStatus::Ok);
        assert!((matrix(&out, 0, 2).0 - 2.0).abs() < 1e-15);

        // Projector traces: rank 2 for Pa±, rank 1 for the minimal ones.
        let q = [0.3, -0.4, 1.2];
        for fam in 1..=3u8 {
            assert_eq!(zm_projector(fam, -1, q.as_ptr(), out.as_mut_ptr()), ZmStatus::Ok);
            let tr: f64 = (0..4).map(|i| matrix(&out, i, i).0).sum();
            assert!((tr - 2.0).abs() < 1e-12);
        }
        assert_eq!(zm_minimal_projector(1, -1, q.as_ptr(), out.as_mut_ptr()), ZmStatus::Ok);
        let tr: f64 = (0..4).map(|i| matrix(&out, i, i).0).sum();
        assert!((tr - 1.0).abs() < 1e-12);

        assert_eq!(
            zm_projector(4, 1, q.as_ptr(), out.as_mut_ptr()),
            ZmStatus::InvalidArgument
        );
        assert_eq!(
            zm_projector(1, 0, q.as_ptr(), out.as_mut_ptr()),
            ZmStatus::InvalidArgument
        );
        let zero = [0.0; 3];
        assert_eq!(zm_helicity(zero.as_ptr(), out.as_mut_ptr()), ZmStatus::InvalidArgument);
        assert_eq!(zm_fw_rotation(ptr::null(), out.as_mut_ptr()), ZmStatus::NullPointer);
        assert_eq!(zm_fw_rotation(q.as_ptr(), ptr::null_mut()), ZmStatus::NullPointer);
        assert!(last_error().contains("output"));
    }
}

#[test]
fn header_compiles_as_c() {
    let root = env!("CARGO_MANIFEST_DIR");
    let header = std::path::Path::new(root).join("include/zeromass.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "zm_config_new",
        "zm_run_json",
        "zm_last_error",
        "zm_projector",
        "ZM_STATUS_PANIC",
        "typedef struct ZmRun ZmRun",
    ] {
        assert!(text.contains(f), "header lacks {f}");
    }
    let out = tempfile::tempdir().unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-c", "-I"])
        .arg(header.parent().unwrap())
        .arg(std::path::Path::new(root).join("tests/smoke.c"))
        .arg("-o")
        .arg(out.path().join("smoke.o"))
        .status();
    match status {
        Ok(s) => assert!(s.success(), "C compile of smoke.c failed"),
        Err(e) => eprintln!("skipping C compile: {e}"),
    }
}

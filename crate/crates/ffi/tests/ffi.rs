use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use bivnorm_ffi::*;

fn last_error() -> String {
    let p = bivnorm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_functions() {
    assert_eq!(bivnorm_cdf(0.0), 0.5);
    assert_eq!(bivnorm_density(1.0), bivnorm_density(-1.0));
    let mut v = f64::NAN;
    assert_eq!(
        unsafe { bivnorm_phi2(0.0, 0.0, 0.5, &mut v) },
        BivnormStatus::Ok
    );
    assert!((v - 1.0 / 3.0).abs() <= 2e-16);
    let mut d = f64::NAN;
    assert_eq!(
        unsafe { bivnorm_phi2_on_diagonal(-1.0, 0.3, &mut d) },
        BivnormStatus::Ok
    );
    let mut g = f64::NAN;
    unsafe { bivnorm_phi2(-1.0, -1.0, 0.3, &mut g) };
    assert!((d - g).abs() <= 2e-16);
    let px = bivnorm_cdf(-1.0);
    assert_eq!(bivnorm_phi2_diagonal(-1.0, 1.0, px, px), px * px);
}

#[test]
fn oracle_returns_both_parts() {
    let (mut hi, mut lo) = (0.0, 0.0);
    assert_eq!(
        unsafe { bivnorm_oracle(-1.0, -1.0, 0.5, &mut hi, &mut lo) },
        BivnormStatus::Ok
    );
    let mut p = 0.0;
    unsafe { bivnorm_phi2(-1.0, -1.0, 0.5, &mut p) };
    assert!((hi - p).abs() <= 2e-16);
    assert!(lo.abs() <= hi * f64::EPSILON);
}

#[test]
fn errors_set_status_and_message() {
    let mut v = 7.0;
    assert_eq!(
        unsafe { bivnorm_phi2(0.0, 0.0, 1.5, &mut v) },
        BivnormStatus::Domain
    );
    assert_eq!(v, 7.0, "output untouched on failure");
    assert!(last_error().contains("1.5"));

    assert_eq!(
        unsafe { bivnorm_phi2(0.0, 0.0, 0.5, ptr::null_mut()) },
        BivnormStatus::NullPointer
    );
    assert!(last_error().contains("out"));
    let mut hi = 0.0;
    assert_eq!(
        unsafe { bivnorm_oracle(0.0, 0.0, 0.5, &mut hi, ptr::null_mut()) },
        BivnormStatus::NullPointer
    );
    assert_eq!(
        unsafe { bivnorm_oracle(f64::NAN, 0.0, 0.5, &mut hi, &mut hi.clone()) },
        BivnormStatus::InvalidArgument
    );
}

#[test]
fn status_strings_cover_every_code() {
    for code in 0..=7 {
        let s = unsafe { CStr::from_ptr(bivnorm_status_string(code)) };
        assert!(!s.to_bytes().is_empty());
        assert_ne!(s.to_str().unwrap(), "unknown status");
    }
    let s = unsafe { CStr::from_ptr(bivnorm_status_string(99)) };
    assert_eq!(s.to_str().unwrap(), "unknown status");
}

#[test]
fn last_error_is_per_thread() {
    let mut v = 0.0;
    unsafe { bivnorm_phi2(0.0, 0.0, 3.0, &mut v) };
    std::thread::spawn(|| assert!(bivnorm_last_error_message().is_null()))
        .join()
        .unwrap();
    assert!(last_error().contains('3'));
}

#[test]
fn profile_handles() {
    let cfg = bivnorm_profile_config_new();
    unsafe {
        assert_eq!(
            bivnorm_profile_config_set_buckets(cfg, 4),
            BivnormStatus::Ok
        );
        assert_eq!(
            bivnorm_profile_config_set_samples(cfg, 8),
            BivnormStatus::Ok
        );
        assert_eq!(bivnorm_profile_config_set_seed(cfg, 42), BivnormStatus::Ok);
        assert_eq!(
            bivnorm_profile_config_set_threads(cfg, 2),
            BivnormStatus::Ok
        );
        assert_eq!(
            bivnorm_profile_config_set_rho_formula(cfg, BIVNORM_RHO_CORRECTED),
            BivnormStatus::Ok
        );
        assert_eq!(
            bivnorm_profile_config_set_rho_formula(cfg, 5),
            BivnormStatus::InvalidArgument
        );

        let mut prof = ptr::null_mut();
        assert_eq!(bivnorm_profile_run(cfg, &mut prof), BivnormStatus::Ok);
        assert!(!prof.is_null());
        assert_eq!(bivnorm_profile_len(prof), 4);

        let mut b = BivnormBucketStats::default();
        assert_eq!(bivnorm_profile_bucket(prof, 2, &mut b), BivnormStatus::Ok);
        assert_eq!(b.n, 2);
        assert_eq!(b.evaluated, 8);
        assert!(b.q99_abs_err <= b.max_abs_err && b.max_abs_err <= 1e-14);
        assert_eq!(
            bivnorm_profile_bucket(prof, 4, &mut b),
            BivnormStatus::OutOfRange
        );
        assert!(last_error().contains("out of range"));

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.csv");
        let c_path = CString::new(path.to_str().unwrap()).unwrap();
        assert_eq!(
            bivnorm_profile_write_csv(prof, c_path.as_ptr()),
            BivnormStatus::Ok
        );
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 5);
        let bad = CString::new("/nonexistent-dir/x.csv").unwrap();
        assert_eq!(
            bivnorm_profile_write_csv(prof, bad.as_ptr()),
            BivnormStatus::Io
        );
        assert!(last_error().contains("/nonexistent-dir/x.csv"));

        bivnorm_profile_free(prof);
        bivnorm_profile_config_free(cfg);
    }
}

#[test]
fn invalid_config_and_null_handles() {
    unsafe {
        let cfg = bivnorm_profile_config_new();
        bivnorm_profile_config_set_buckets(cfg, 0);
        let mut prof = ptr::null_mut();
        assert_eq!(
            bivnorm_profile_run(cfg, &mut prof),
            BivnormStatus::InvalidArgument
        );
        assert!(prof.is_null());
        bivnorm_profile_config_free(cfg);

        assert_eq!(
            bivnorm_profile_config_set_seed(ptr::null_mut(), 1),
            BivnormStatus::NullPointer
        );
        assert_eq!(
            bivnorm_profile_run(ptr::null(), &mut prof),
            BivnormStatus::NullPointer
        );
        assert_eq!(bivnorm_profile_len(ptr::null()), 0);
        let mut b = BivnormBucketStats::default();
        assert_eq!(
            bivnorm_profile_bucket(ptr::null(), 0, &mut b),
            BivnormStatus::NullPointer
        );
        bivnorm_profile_free(ptr::null_mut());
        bivnorm_profile_config_free(ptr::null_mut());
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/bivnorm.h")).unwrap();
    for item in [
        "BIVNORM_STATUS_OK = 0",
        "BIVNORM_STATUS_PANIC = 7",
        "typedef struct BivnormProfile BivnormProfile;",
        "typedef struct BivnormProfileConfig BivnormProfileConfig;",
        "BivnormStatus bivnorm_phi2(double x, double y, double rho, double *out);",
        "double bivnorm_phi2_diagonal(double x, double a, double px, double pxs);",
        "BivnormProfileConfig *bivnorm_profile_config_new(void);",
        "void bivnorm_profile_free(struct BivnormProfile *profile);",
        "#define BIVNORM_RHO_PAPER 1",
    ] {
        assert!(header.contains(item), "missing: {item}");
    }
}

fn compiler(name: &str) -> Option<&str> {
    Command::new(name)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| name)
}

#[test]
fn header_compiles_as_c_and_cxx() {
    let include = crate_dir().join("include");
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let Some(cc) = compiler(cc) else {
            eprintln!("skipping {lang} header check: {cc} not found");
            continue;
        };
        let status = Command::new(cc)
            .args(["-x", lang, "-fsyntax-only", "-Wall", "-Werror"])
            .arg(include.join("bivnorm.h"))
            .status()
            .unwrap();
        assert!(status.success(), "{lang} rejected the header");
    }
}

/// `target/<profile>` of this test binary.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_demo_links_against_the_static_library() {
    let Some(cc) = compiler("cc") else {
        eprintln!("skipping C demo: cc not found");
        return;
    };
    let lib = profile_dir().join("libbivnorm_ffi.a");
    if !lib.exists() {
        eprintln!("skipping C demo: {} not built", lib.display());
        return;
    }
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("demo");
    let status = Command::new(cc)
        .arg(crate_dir().join("examples/demo.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success());
    let text = String::from_utf8_lossy(&run.stdout);
    assert!(
        text.contains("Phi2(0, 0; 0.5) = 0.33333333333333"),
        "{text}"
    );
    assert!(text.contains("correlation outside [-1, 1]"));
    assert_eq!(text.lines().filter(|l| l.starts_with("bucket")).count(), 3);
}

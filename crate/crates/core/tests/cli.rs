use std::process::{Command, Output};

fn bivnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bivnorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_prints_seventeen_digits() {
    let out = bivnorm(&["eval", "0", "0", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: f64 = text.trim().parse().unwrap();
    assert!((value - 1.0 / 3.0).abs() <= 2e-16);
    let mantissa = text.trim().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
}

#[test]
fn eval_accepts_negative_arguments_and_diagonal() {
    let out = bivnorm(&["eval", "-1", "-1", "-0.5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let general: f64 = stdout(&out).trim().parse().unwrap();
    let out = bivnorm(&["eval", "--diagonal", "-1", "-0.5"]);
    assert!(out.status.success());
    let diagonal: f64 = stdout(&out).trim().parse().unwrap();
    assert!((general - diagonal).abs() <= 2e-16);
}

#[test]
fn domain_error_exits_with_two() {
    let out = bivnorm(&["eval", "0", "0", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1.5"));
}

#[test]
fn selftest_passes() {
    let out = bivnorm(&["selftest"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn oracle_prints_both_parts() {
    let out = bivnorm(&["oracle", "-1", "-1", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("hi = ") && text.contains("lo = "));
}

#[test]
fn profile_to_stdout_is_csv() {
    let out = bivnorm(&["profile", "--buckets", "3", "--samples", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,x_center,q99_abs_err,max_abs_err,max_x,max_y,max_rho")
    );
    assert_eq!(lines.count(), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("max abs error"));
}

#[test]
fn paper_rho_formula_is_selectable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paper.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_bivnorm"))
        .args([
            "profile",
            "--buckets",
            "2",
            "--samples",
            "20",
            "--rho-formula",
            "paper",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary = stdout(&out);
    assert!(summary.contains("of 40 draws evaluated"), "{summary}");
    assert!(path.exists());
}

use std::process::{Command, Output};

const HEADER: &str = "function,alpha,beta,gamma,epsilon,eta,n,m,uniform_error,sigma_min,kept_count,condition_estimate,wall_time_ms,status";

fn framefit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framefit")).args(args).output().expect("binary runs")
}

const SMALL: &[&str] = &["--n-max", "10", "--grid-size", "200", "--condition-points", "50", "--no-timing"];

fn small(extra: &[&str]) -> Output {
    let args: Vec<&str> = SMALL.iter().chain(extra).copied().collect();
    framefit(&args)
}

#[test]
fn writes_csv_with_expected_header() {
    let out = small(&["--function", "f1", "--function", "f5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 5);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
    assert!(rows[0].starts_with("f1,"));
}

#[test]
fn reruns_are_byte_identical_without_timing() {
    let a = small(&["--function", "all", "--gamma", "1.5"]);
    let b = small(&["--function", "all", "--gamma", "1.5", "--sequential"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn rejects_bad_parameters_with_code_two() {
    for args in [
        &["--gamma", "0.5"][..],
        &["--function", "f42"],
        &["--alpha", "-1"],
        &["--epsilon", "-1e-3"],
        &["--eta", "0.5"],
    ] {
        let out = small(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn accepts_fractional_weights() {
    let out = small(&["--alpha", "1/3", "--beta", "1/2", "--epsilon", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn writes_output_and_profile_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let profile = dir.path().join("profile.csv");
    let out = small(&["--out", csv.to_str().unwrap(), "--profile", profile.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with(HEADER));
    let prof = std::fs::read_to_string(&profile).unwrap();
    let mut lines = prof.lines();
    assert_eq!(lines.next(), Some("n,index,sigma"));
    // n = 2, 4, ..., 10 gives 3 + 5 + ... + 11 singular values
    assert_eq!(lines.count(), 3 + 5 + 7 + 9 + 11);
}

#[test]
fn fit_summary_goes_to_stderr() {
    let out = small(&["--fit", "exp"]);
    assert!(out.status.success());
    assert!(!out.stderr.is_empty());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with(HEADER));
}

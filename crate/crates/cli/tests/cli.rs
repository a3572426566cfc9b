use std::fs;
use std::process::{Command, Output};

fn qidcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qidcert")).args(args).output().expect("spawn qidcert")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unsupported_order_mentions_factorial_budget() {
    let o = qidcert(&["verify", "--n", "5", "--out", "/nonexistent/never.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("factorial"), "{}", stderr(&o));
}

#[test]
fn inadmissible_delta_is_a_config_error() {
    for args in [
        ["verify", "--n", "1", "--delta", "0.9"],
        ["verify", "--n", "1", "--delta", "0"],
        ["sample", "--n", "1", "--delta", "-0.01"],
    ] {
        let o = qidcert(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn zero_count_and_bad_tolerance_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = qidcert(&["sample", "--count", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = qidcert(&["tabulate", "q", "--tol", "-1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_function_and_bad_range_exit_two() {
    assert_eq!(qidcert(&["tabulate", "zeta"]).status.code(), Some(2));
    assert_eq!(qidcert(&["tabulate"]).status.code(), Some(2));
    for r in ["1:0:0.1", "0:1:0", "0:1", "a:b:c"] {
        let o = qidcert(&["tabulate", "q", "--range", r, "--out", "/nonexistent/x.csv"]);
        assert_eq!(o.status.code(), Some(2), "{r}");
    }
}

#[test]
fn tabulate_real_function() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    let o = qidcert(&["tabulate", "q", "--range", "-1:1:0.5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines.len(), 6);
    let mid: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(mid[0], 0.0);
    assert!((mid[1] - 1.0 / (std::f64::consts::E * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn tabulate_complex_function_by_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f1.csv");
    let o = qidcert(&["tabulate", "--function", "f1", "--range", "-2:2:1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(csv.lines().next(), Some("t,re,im"));
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2], vec![0.0, 1.0, 0.0]);
    // f(-t) is the conjugate of f(t).
    assert_eq!(rows[0][1], rows[4][1]);
    assert_eq!(rows[0][2], -rows[4][2]);
}

#[test]
fn every_function_tabulates() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["q", "h", "p1", "f1", "abs_f1", "gm", "density_G1a", "ln_f1"] {
        let out = dir.path().join(format!("{f}.csv"));
        let o = qidcert(&["tabulate", f, "--range", "0.5:1.5:0.5", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{f}: {}", stderr(&o));
        let csv = fs::read_to_string(&out).unwrap();
        assert_eq!(csv.lines().count(), 4, "{f}");
        assert!(!csv.contains("NaN") && !csv.contains("inf"), "{f}");
    }
}

#[test]
fn sample_writes_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = qidcert(&["sample", "--count", "2000", "--seed", "9", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(String::from_utf8_lossy(&o.stdout).contains("acceptance rate"));
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("value (n=1; delta="));
    assert_eq!(text.lines().count(), 2001);
    // No temporary files are left next to the output.
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
}

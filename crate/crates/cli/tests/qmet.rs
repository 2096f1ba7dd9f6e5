use std::process::{Command, Output};

fn qmet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmet"))
        .args(args)
        .env("QMET_LOG", "off")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_to_stdout() {
    let o = qmet(&["bounds", "--scenario", "one-param", "--p", "0:0.5:0.25", "--bounds", "J4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = qmet::cli::parse_csv(&stdout(&o)).unwrap();
    let v: Vec<f64> = rows.iter().map(|r| r.value.unwrap()).collect();
    for (got, want) in v.iter().zip([0.25, 0.3888888888888889, 0.75]) {
        assert!((got - want).abs() < 1e-6);
    }
}

#[test]
fn config_file_with_flag_override_and_out() {
    let dir = std::env::temp_dir().join(format!("qmet-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("run.conf");
    let out = dir.join("out.csv");
    std::fs::write(&conf, "scenario = su2\nj = 1\np = 0.3\nbounds = J2\n").unwrap();
    let o = qmet(&[
        "bounds",
        "--config",
        conf.to_str().unwrap(),
        "--bounds",
        "J4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = qmet::cli::parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].bound, "J4");
    assert!(rows[0].rel_dev.unwrap() < 1e-4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_errors_exit_1_with_diagnostics() {
    let dir = std::env::temp_dir().join(format!("qmet-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("bad.conf");
    std::fs::write(&conf, "scenario = pauli\n\nweight = 1,x\n").unwrap();
    let o = qmet(&["bounds", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("weight"), "{err}");
    std::fs::remove_dir_all(&dir).ok();

    let o = qmet(&["bounds", "--scenario", "teleport"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("teleport"));
}

#[test]
fn failed_solve_exits_2() {
    let o = qmet(&["bounds", "--scenario", "one-param", "--p", "1", "--bounds", "J4"]);
    assert_eq!(o.status.code(), Some(2));
    let rows = qmet::cli::parse_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].value, None);
}

#[test]
fn verify_solver_suite_passes() {
    let o = qmet(&["verify", "--suite", "solver"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert!(s.lines().filter(|l| l.starts_with("PASS")).count() >= 5);
    assert!(s.contains("tolerance") && s.contains("measured"));
}

#[test]
fn verify_catches_injected_fault() {
    let o = qmet(&["verify", "--suite", "orderings", "--inject-fault"]);
    let s = stdout(&o);
    assert_ne!(o.status.code(), Some(0));
    assert!(s.lines().any(|l| l.starts_with("FAIL") && l.contains("S3d4 > Ssym4")), "{s}");
}

#[test]
fn unknown_suite_is_rejected() {
    let o = qmet(&["verify", "--suite", "everything"]);
    assert_eq!(o.status.code(), Some(1));
}

//! The `catseries` executable: exit codes, configuration sources, output files.

use std::process::{Command, Output};

use catseries::report::SuiteReport;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_catseries"));
    c.args(args).env_remove("CATSERIES_PREC");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn passing_run_exits_zero() {
    let o = run(&["verify", "--family", "F8", "--m", "0..1", "--no-checks"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["verify", "--family", "F10", "--m", "0"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--family", "F1", "--prec", "128", "--tol", "1e-60"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision floor"));
}

#[test]
fn precision_comes_from_the_environment() {
    // 64 bits puts the default 1e-25 below the floor
    let o = run(&["verify", "--family", "F8", "--m", "0"], &[("CATSERIES_PREC", "64")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--family", "F8", "--m", "0", "--json", "--no-checks"], &[("CATSERIES_PREC", "320")]);
    assert_eq!(o.status.code(), Some(0));
    let r = SuiteReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.config.precision_bits, 320);
}

#[test]
fn config_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.conf");
    let out = dir.path().join("report.json");
    std::fs::write(&cfg, format!("# small grid\nrange.F6 = 0..1\nparallelism = 2\noutput = {}\n", out.display()))
        .unwrap();
    let o = run(&["verify", "--family", "F6", "--no-checks", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = SuiteReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.reports.len(), 2);
    assert_eq!(r.summary.pass, 2);

    std::fs::write(&cfg, "colour = red\n").unwrap();
    let o = run(&["verify", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_reported() {
    let o = run(&["verify", "--family", "F8", "--m", "0", "--no-checks", "--out", "/nonexistent/dir/r.json"], &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn other_subcommands() {
    let o = run(&["sum", "--family", "F10", "--m", "1"], &[]);
    assert!(stdout(&o).contains("value: -8.10569469138702171551"), "{}", stdout(&o));
    let o = run(&["sum", "--family", "F2", "--m", "0", "--strategy", "direct"], &[]);
    assert_ne!(o.status.code(), Some(0));
    let o = run(&["constants", "--prec", "128"], &[]);
    assert!(stdout(&o).contains("PI             3.14159265358979323846"));
    let o = run(&["recognize", "--family", "F8", "--m", "2", "--basis", "pi^-1"], &[]);
    assert!(stdout(&o).contains("found: 2/27*pi^-1"), "{}", stdout(&o));
    let o = run(&["dougall", "--variant", "D-alt-plain", "--x", "2"], &[]);
    assert!(stdout(&o).contains("lhs: 7.000000000000000000000000000000000000000e0"), "{}", stdout(&o));
    let o = run(&["dougall", "--variant", "D-fourth", "--x", "-1/2"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

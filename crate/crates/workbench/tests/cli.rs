use std::process::Command;

fn qpforce(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_qpforce")).args(args).output().unwrap();
    (
        o.status.code().unwrap(),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

#[test]
fn critical_b_prints_value() {
    let (code, out, _) = qpforce(&["critical-b", "--system", "period-doubling", "--a", "-3"]);
    assert_eq!(code, 0);
    let line = out.lines().find(|l| l.starts_with("b_star =")).unwrap();
    let v: f64 = line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!((v - 0.4949316501828507).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(qpforce(&["critical-b", "--a", "2"]).0, 1);
    assert_eq!(qpforce(&["critical-b", "--system", "period-doubling", "--a", "1"]).0, 1);
    let (code, _, err) = qpforce(&["critical-b", "--system", "nope", "--a", "2"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("invalid-params"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing/dir");
    let (code, _, err) = qpforce(&[
        "curves",
        "--system",
        "period-doubling",
        "--a",
        "-3",
        "--b",
        "0.3",
        "--out",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "{err}");
    assert_eq!(qpforce(&["--help"]).0, 0);
}

#[test]
fn check_hook_turns_quick_check_red() {
    let (code, out, _) = qpforce(&["check", "--level", "quick"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    let (code, out, _) = qpforce(&["check", "--level", "quick", "--breakpoint-shift", "1e-3"]);
    assert_eq!(code, 2);
    assert!(out.lines().any(|l| l.starts_with("FAIL h continuity")));
}

#[test]
fn sweep_from_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("s.conf");
    std::fs::write(&conf, "system = saddle-node\na = 2\nb = 0.1\ndiagnostics = regime\n").unwrap();
    let (code, out, err) = qpforce(&[
        "sweep",
        "--config",
        conf.to_str().unwrap(),
        "--set",
        "b-rel=0.5,1.5",
        "--set",
        "diagnostics=regime,critical_b",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].contains(",before,") && rows[2].contains(",after,"), "{out}");
    assert!(dir.path().join("sweep.csv").exists());
}

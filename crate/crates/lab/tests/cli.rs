use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocycle-lab")).args(args).output().unwrap()
}

#[test]
fn oned_suite_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = (dir.path().join("r.json"), dir.path().join("t.csv"));
    let o = lab(&["run", "--suite", "oned", "--grid", "64", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["config"]["n"], 64);
    assert_eq!(report["pass"], true);
    let table = std::fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("grid,check,value,residual,order\n"));
    assert!(table.contains("conjugation_identity_residual"));
}

#[test]
fn report_goes_to_stdout_without_out() {
    let o = lab(&["run", "--suite", "crossed"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["suite"], "crossed");
}

#[test]
fn overrides_beat_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"suite": "oned", "n": 32, "seed": 1}"#).unwrap();
    let o = lab(&["run", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 9);
    assert_eq!(report["config"]["n"], 32);
}

#[test]
fn failing_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"suite": "oned", "tol_path": 1e-300}"#).unwrap();
    let o = lab(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL path_vs_closed_form_random"));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        vec!["run", "--suite", "twod"],
        vec!["run", "--suite", "oned", "--grid", "8192"],
        vec!["run", "--suite", "threed", "--grid", "16,16"],
        vec!["run", "--config", "/nonexistent/config.json"],
    ] {
        assert_eq!(lab(&args).status.code(), Some(2), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"grdi": [16, 16, 16]}"#).unwrap();
    assert_eq!(lab(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn print_certificate_renders_reports_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let (out, cert) = (dir.path().join("r.json"), dir.path().join("c.json"));
    let o = lab(&["run", "--suite", "symbolic", "--out", out.to_str().unwrap(), "--certificate", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(lab(&["print-certificate", out.to_str().unwrap()]).stdout).unwrap();
    for name in ["== conjugation ==", "== boundary_cyclic ==", "== path =="] {
        assert!(text.contains(name), "{text}");
    }
    assert!(text.contains("commutator"), "{text}");

    let certs: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(cert).unwrap()).unwrap();
    let single = dir.path().join("conjugation.json");
    std::fs::write(&single, certs["conjugation"].to_string()).unwrap();
    let o = lab(&["print-certificate", single.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("verified: true"));
}

#[test]
fn corrupt_certificates_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{ not json").unwrap();
    assert_eq!(lab(&["print-certificate", p.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&p, r#"{"identity": 3}"#).unwrap();
    assert_eq!(lab(&["print-certificate", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lab(&["print-certificate", "/nonexistent.json"]).status.code(), Some(2));
}

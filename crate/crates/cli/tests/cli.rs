use std::path::PathBuf;
use std::process::{Command, Output};

use crnx::engine::verify_verdict;
use crnx::io::{parse_crn, AnalysisReport};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.crn"))
}

fn crnx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crnx")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn analyze_writes_a_checkable_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let file = fixture("envz_ompr");
    let o = crnx(&["analyze", file.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: guaranteed extinction"));

    let report = AnalysisReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.verdict, "guaranteed_extinction");
    assert_eq!(report.transient.len(), 12);
    assert!(!report.transient.contains(&"X4".to_string()));
    assert_eq!(
        report.forest_labels(),
        ["R1", "R3", "R5", "R6", "R8", "R10", "R13", "D1", "D2", "D3", "D4", "D5"]
    );
    let net = parse_crn(&std::fs::read_to_string(&file).unwrap()).unwrap().network;
    verify_verdict(&net, &report.to_verdict().unwrap()).unwrap();

    let v = crnx(&["verify", file.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn tampered_report_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let file = fixture("conserved_pair");
    let o = crnx(&["analyze", file.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    json["conservation"][0]["num"] = "0".into();
    std::fs::write(&out, json.to_string()).unwrap();
    let v = crnx(&["verify", file.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stderr(&v).contains("rejected"));
}

#[test]
fn not_applicable_and_inconclusive_reports() {
    let o = crnx(&["analyze", fixture("growth_loop").to_str().unwrap(), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let json: serde_json::Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert_eq!(json["verdict"], "not_applicable");
    assert!(json["not_applicable"]["farkas"]["inequality"].is_array());

    let o = crnx(&["analyze", fixture("catalyst_cycle").to_str().unwrap(), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let json: serde_json::Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert_eq!(json["verdict"], "inconclusive");
    assert!(json["stats"].is_object());
    assert!(json.get("conservation").is_none());
    assert_eq!(json["witnesses"].as_array().unwrap().len(), 0);
}

#[test]
fn explicit_absorbing_set() {
    let o = crnx(&[
        "analyze",
        fixture("wide_absorbing").to_str().unwrap(),
        "--absorbing",
        "set:X2 + X3,2X3,2X2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("transient complexes (1): 2 X1"));
    let o = crnx(&["analyze", fixture("wide_absorbing").to_str().unwrap(), "--absorbing", "set:X9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_confirms_extinction() {
    let o = crnx(&[
        "oracle",
        fixture("dimer_switch").to_str().unwrap(),
        "--init",
        "X1=3,X2=1",
        "--check-extinction",
        "2X1,X1+X2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("extinction holds on {2 X1, X1 + X2}"), "{}", stdout(&o));
}

#[test]
fn oracle_reports_a_counterexample() {
    let o = crnx(&["oracle", fixture("catalyst_cycle").to_str().unwrap(), "--budget", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("extinction fails"));
    assert!(stdout(&o).contains("recurrent witness"));
}

#[test]
fn input_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.crn");
    std::fs::write(&bad, "A -> B\nA => B\n").unwrap();
    let o = crnx(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:3:"), "{}", stderr(&o));
    let o = crnx(&["analyze", "/nonexistent/file.crn"]);
    assert_eq!(o.status.code(), Some(2));
    let o = crnx(&["analyze", fixture("envz_ompr").to_str().unwrap(), "--dom", "some"]);
    assert_eq!(o.status.code(), Some(2));
    let o = crnx(&["oracle", fixture("dimer_switch").to_str().unwrap(), "--init", "Q=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let o = crnx(&[
        "oracle",
        fixture("growth_loop").to_str().unwrap(),
        "--init",
        "X1=1",
        "--state-cap",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = crnx(&[
        "analyze",
        fixture("catalyst_gap").to_str().unwrap(),
        "--dom",
        "all:1",
        "--absorbing",
        "enumerate:1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("inconclusive"));
    let o = crnx(&["forests", fixture("conserved_pair").to_str().unwrap(), "--forest-cap", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn structure_invariants_and_forests() {
    let f = fixture("conserved_pair");
    let o = crnx(&["structure", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("terminal classes: {X1 + X2, 2 X2} {X1}"));
    let o = crnx(&["invariants", f.to_str().unwrap()]);
    let s = stdout(&o);
    assert!(s.contains("conservative: yes, c = (1 1)"));
    assert!(s.contains("(1 0 1)") && s.contains("(1 1 0)"));
    let o = crnx(&["forests", f.to_str().unwrap()]);
    let s = stdout(&o);
    assert_eq!(s.matches("forest ").count(), 3);
    assert!(s.contains("balanced, alpha = (1 0 1 0 1)"));
}

#[test]
fn petri_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("envz_ompr");
    let o = crnx(&["petri", "export", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc = dir.path().join("net.json");
    std::fs::write(&doc, &o.stdout).unwrap();
    let back = crnx(&["petri", "import", doc.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0));
    let original = parse_crn(&std::fs::read_to_string(&f).unwrap()).unwrap().network;
    assert_eq!(parse_crn(&stdout(&back)).unwrap().network, original);

    std::fs::write(&doc, r#"{"places":["A"],"transitions":[{"inputs":{"A":-1}}]}"#).unwrap();
    let o = crnx(&["petri", "import", doc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use prequantum_cli::builtin::{builtin, names};
use prequantum_cli::{AnalysisReport, ScenarioFile};
use prequantum_core::geometry::ModelSpace;

fn prequantum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prequantum")).args(args).env_remove("PREQUANTUM_OUT").output().expect("runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn analyze_torus(out: &Path) -> Output {
    let out = out.to_str().unwrap();
    prequantum(&["analyze", "torus-unit", "--grid", "32,64", "--out", out, "--emit", "json,csv"])
}

#[test]
fn lists_every_builtin() {
    let o = prequantum(&["list-scenarios"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in names() {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn builtins_round_trip_through_json() {
    for name in names() {
        let f = builtin(name).unwrap();
        assert_eq!(ScenarioFile::from_json(&f.to_json(), name).unwrap(), f);
    }
}

#[test]
fn analyze_writes_report_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let o = analyze_torus(dir.path());
    assert!(o.status.success(), "{}", stderr(&o));

    let text = fs::read_to_string(dir.path().join("torus-unit.json")).unwrap();
    let report: AnalysisReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.to_json() + "\n", text);
    assert_eq!(report.grid, [32, 64]);
    assert_eq!(report.p_omega.text, "(1)·Z");
    assert!(report.passed());

    let mut rows = csv::Reader::from_path(dir.path().join("torus-unit.action.csv")).unwrap();
    assert_eq!(rows.headers().unwrap(), vec!["homotopy", "s", "cumulative_action"]);
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), report.action_traces.len() * 33);
    for trace in &report.action_traces {
        let mine: Vec<&csv::StringRecord> = records.iter().filter(|r| r[0] == trace.homotopy).collect();
        assert_eq!(mine.len(), 33);
        let last = mine.last().unwrap();
        assert_eq!(&last[1], "1.0");
        let end: f64 = last[2].parse().unwrap();
        assert!((end - trace.total).abs() < 1e-12, "{end} vs {}", trace.total);
    }
}

#[test]
fn analyze_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(analyze_torus(a.path()).status.success());
    assert!(analyze_torus(b.path()).status.success());
    for f in ["torus-unit.json", "torus-unit.action.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn unknown_generator_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{ "name": "bad", "presentation": { "kind": "free", "generators": ["a", "b"], "relations": ["a c"] } }"#,
    )
    .unwrap();
    let o = prequantum(&["verify", "--suite", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("presentation.relations[0]") && err.contains("`c`"), "{err}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{ \"name\": \"x\",\n  \"presentation\": 3 }").unwrap();
    let o = prequantum(&["analyze", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.json:2:"), "{}", stderr(&o));
}

#[test]
fn unknown_scenario_exits_2() {
    let o = prequantum(&["verify", "--suite", "no-such-scenario"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = prequantum(&["verify", "--suite", "genus-2-declared"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));

    // A torus of area 2 under the unit torus's name misses its expectations.
    let mut f = builtin("torus-unit").unwrap();
    f.space = Some(ModelSpace::FlatTorus { lattice: [[2.0, 0.0], [0.0, 1.0]] });
    f.grid.s = 32;
    f.grid.n = 64;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stretched.json");
    fs::write(&path, f.to_json()).unwrap();
    let o = prequantum(&["verify", "--suite", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("[FAIL] sweep actions match the declared areas"), "{text}");
}

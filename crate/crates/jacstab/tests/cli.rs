use std::path::PathBuf;
use std::process::Command;

use jacstab::cli::run;
use jacstab::corpus::default_dir;
use serde_json::Value;

fn fixture(rel: &str) -> String {
    default_dir().join(rel).to_string_lossy().into_owned()
}

fn jacstab(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["jacstab"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let report = if out.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&out.stdout).expect("report is JSON")
    };
    (out.code, report)
}

fn kinds(report: &Value) -> Vec<(String, bool)> {
    report["details"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["kind"].as_str().unwrap().to_string(), f["failure"].as_bool().unwrap()))
        .collect()
}

#[test]
fn check_accepts_vine_fixture() {
    let (code, report) = jacstab(&["check", "--assignment", &fixture("assignments/vine2_d0_l0.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["pass"], true);
    assert_eq!(report["command"], "check");
}

#[test]
fn check_rejects_repeated_entry() {
    let (code, report) = jacstab(&["check", "--assignment", &fixture("assignments/vine2_d0_l0_repeated.json")]);
    assert_eq!(code, 1);
    assert_eq!(report["pass"], false);
    assert!(kinds(&report).contains(&("minimality".into(), true)));
}

#[test]
fn check_reports_equivalent_extra_entry() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("assignments/vine2_d0_l0.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["entries"].as_array_mut().unwrap().push(serde_json::json!({
        "kept": ["e1", "e2"],
        "multidegree": {"v1": 2, "v2": -2},
    }));
    let path = dir.path().join("extra.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, report) = jacstab(&["check", "--assignment", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let ks = kinds(&report);
    assert!(ks.iter().filter(|k| k.0 == "minimality" && k.1).count() >= 2);
}

#[test]
fn universal_genus_two_degree_one_is_obstructed() {
    let (code, report) =
        jacstab(&["universal", "--genus", "2", "--markings", "0", "--degree", "1", "--window", "4"]);
    assert_eq!(code, 0);
    let details = report["details"].as_array().unwrap();
    let results = details.iter().find(|f| f["kind"] == "results").unwrap();
    assert_eq!(results["data"]["results"], serde_json::json!([]));
    assert!(details.iter().any(|f| f["kind"] == "obstruction" && f["failure"] == false));
}

#[test]
fn universal_genus_two_degree_zero_has_results() {
    let (code, report) =
        jacstab(&["universal", "--genus", "2", "--markings", "0", "--degree", "0", "--window", "4"]);
    assert_eq!(code, 0);
    let results = &report["details"][0]["data"]["results"];
    assert_eq!(results.as_array().unwrap().len(), 1);
    assert_eq!(results[0]["per_object"].as_array().unwrap().len(), 7);
}

#[test]
fn graph_commands() {
    let theta = fixture("graphs/theta.json");
    let (code, report) = jacstab(&["complexity", "--graph", &theta]);
    assert_eq!(code, 0);
    assert_eq!(report["details"][0]["data"]["matrix_tree"], 3);
    let (code, report) = jacstab(&["complexity", "--graph", &theta, "--all"]);
    assert_eq!(code, 0);
    assert_eq!(report["details"].as_array().unwrap().len(), 7);

    let (code, report) = jacstab(&["jacobian", "--graph", &fixture("graphs/k4.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["details"][0]["data"]["invariant_factors"], serde_json::json!([4, 4]));
    let (code, report) = jacstab(&["jacobian", "--graph", &theta, "--edges", "e1,e2"]);
    assert_eq!(code, 0);
    assert_eq!(report["details"][0]["data"]["order"], 2);

    let (code, report) = jacstab(&["break-divisors", "--graph", &fixture("graphs/gsym3.json")]);
    assert_eq!(code, 0, "{report}");

    let (code, report) = jacstab(&["enumerate", "--graph", &fixture("graphs/banana2.json"), "--degree", "0", "--window", "1"]);
    assert_eq!(code, 0);
    // tree value (λ, -1-λ) with both coordinates in [-1, 1]
    assert_eq!(report["details"][0]["data"]["results"].as_array().unwrap().len(), 2);
}

#[test]
fn stable_command() {
    let banana = fixture("graphs/banana2.json");
    let (code, report) = jacstab(&["stable", "--graph", &banana, "--phi", &fixture("polarizations/banana2_half.json")]);
    assert_eq!(code, 0);
    let entries = report["details"][0]["data"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    let (code, report) = jacstab(&["stable", "--graph", &banana, "--phi", &fixture("polarizations/banana2_zero.json")]);
    assert_eq!(code, 1);
    assert_eq!(kinds(&report), vec![("degenerate".into(), true)]);
    // values keyed by the vertices of another graph
    let (code, _) = jacstab(&["stable", "--graph", &fixture("graphs/k4.json"), "--phi", &fixture("polarizations/banana2_half.json")]);
    assert_eq!(code, 2);
}

#[test]
fn lift_command() {
    let vine = fixture("assignments/vine2_d0_l0.json");
    let (code, report) = jacstab(&["lift", "--assignment", &vine, "--m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report["details"][0]["data"]["lifts"].as_array().unwrap().len(), 4);
    let (code, _) = jacstab(&["lift", "--assignment", &vine, "--m", "e1=2"]);
    assert_eq!(code, 0);
    let (code, _) = jacstab(&["lift", "--assignment", &vine, "--m", "zz=2"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(["jacstab"]).code, 2);
    assert_eq!(run(["jacstab", "frobnicate"]).code, 2);
    assert_eq!(run(["jacstab", "check"]).code, 2);
    assert_eq!(run(["jacstab", "check", "--assignment", "/nonexistent/a.json"]).code, 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"{"version":"1","vertices":[{"id":"a","genus":0}],"edges":[{"id":"x","ends":["a","b"]}]}"#)
        .unwrap();
    let out = run(["jacstab", "complexity", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("edges[0].ends[1]"), "{}", out.stderr);
    assert!(out.stderr.contains("`x`"));

    let out = run(["jacstab", "universal", "--genus", "5", "--markings", "0", "--degree", "0", "--window", "1"]);
    assert_eq!(out.code, 2);
    assert_eq!(run(["jacstab", "--help"]).code, 0);
}

#[test]
fn reports_are_deterministic() {
    let args = ["jacstab", "break-divisors", "--graph", &fixture("graphs/k4.json")];
    let a = run(args);
    let b = run(args);
    assert_eq!(a, b);
    let report: Value = serde_json::from_str(&a.stdout).unwrap();
    assert!(report.get("runtime_ms").is_none());
    assert_eq!(report["inputs_digest"].as_str().unwrap().len(), 64);

    let timed = run(["jacstab", "--timing", "break-divisors", "--graph", &fixture("graphs/k4.json")]);
    let report: Value = serde_json::from_str(&timed.stdout).unwrap();
    assert!(report["runtime_ms"].is_u64());
}

#[test]
fn digest_ignores_paths_but_not_contents() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("copy.json");
    std::fs::copy(fixture("graphs/theta.json"), &copy).unwrap();
    let a = jacstab(&["complexity", "--graph", &fixture("graphs/theta.json")]).1;
    let b = jacstab(&["complexity", "--graph", copy.to_str().unwrap()]).1;
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
    let c = jacstab(&["complexity", "--graph", &fixture("graphs/k4.json")]).1;
    assert_ne!(a["inputs_digest"], c["inputs_digest"]);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path: PathBuf = dir.path().join("report.json");
    let out = run(["jacstab", "--out", path.to_str().unwrap(), "complexity", "--graph", &fixture("graphs/theta.json")]);
    assert_eq!(out.code, 0);
    assert_eq!(std::fs::read_to_string(path).unwrap(), out.stdout);
}

#[test]
fn corpus_verify_single_criterion() {
    let (code, report) = jacstab(&["corpus", "verify", "--criterion", "7"]);
    assert_eq!(code, 0);
    let ks = kinds(&report);
    assert!(ks.iter().any(|k| k.0 == "criterion"));
    assert!(ks.iter().filter(|k| k.0 == "fixture").count() >= 7);
    assert_eq!(run(["jacstab", "corpus", "verify", "--criterion", "9"]).code, 2);
}

#[test]
fn binary_respects_thread_variable() {
    let bin = env!("CARGO_BIN_EXE_jacstab");
    let theta = fixture("graphs/theta.json");
    let ok = Command::new(bin)
        .args(["complexity", "--graph", &theta])
        .env("JACSTAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin)
        .args(["complexity", "--graph", &theta])
        .env("JACSTAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("JACSTAB_THREADS"));
}

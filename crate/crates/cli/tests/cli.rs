use std::path::PathBuf;
use std::process::{Command, Output};

fn qtwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtwist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_m2_passes_with_iso() {
    let out = qtwist(&["verify", &spec("m2_skew.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["iso_found"], true);
    assert_eq!(r["dims"]["heisenberg_route.dim"], 4);
    assert_eq!(r["tolerances"]["eps_eq"], 1e-8);
    assert_eq!(r["witness"], "canonical");
}

#[test]
fn verify_perturbed_fails_with_residual() {
    let out = qtwist(&["verify", &spec("m2_perturbed.json")]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["verdicts"]["bicharacter_equations"], false);
    assert!(r["residuals"]["bicharacter.first_leg"].as_f64().unwrap() > 0.1);
}

#[test]
fn verify_malformed_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"groups\": {\"G\": [2],\n}").unwrap();
    let out = qtwist(&["verify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn verify_invalid_field_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"groups": {"G": [2], "H": [2]}, "bicharacter": [[5]],
            "C": {"preset": "group_algebra"}, "D": {"preset": "group_algebra"}}"#,
    )
    .unwrap();
    let out = qtwist(&["verify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"path\":\"bicharacter\""));
}

#[test]
fn verify_missing_file_and_bad_tolerance() {
    assert_eq!(
        qtwist(&["verify", "/nonexistent.json"]).status.code(),
        Some(2)
    );
    let out = qtwist(&["verify", &spec("m2_skew.json"), "--tolerance", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_tolerance_is_echoed() {
    let out = qtwist(&["verify", &spec("torus_3_1.json"), "--tolerance", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tolerances"]["eps_eq"], 1e-6);
}

#[test]
fn verify_csv() {
    let out = qtwist(&["verify", &spec("matrix_components.json"), "--emit", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("report,kind,key,value\n"));
    assert!(text.contains("verify,verdict,routes_equivalent,true"));
}

#[test]
fn every_sample_spec_resolves() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs"]
        .iter()
        .collect();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let code = qtwist(&["verify", p.to_str().unwrap()]).status.code();
        assert!(matches!(code, Some(0) | Some(1)), "{}", p.display());
    }
}

#[test]
fn example_torus() {
    let out = qtwist(&["example", "torus", "--n", "4", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["dims"]["dim"], 16);
    assert_eq!(r["dims"]["center_dim"], 1);

    let r = json(&qtwist(&["example", "torus", "--n", "4", "--k", "0"]));
    assert_eq!(r["dims"]["center_dim"], 16);
}

#[test]
fn example_skew_prints_generators() {
    let out = qtwist(&["example", "skew"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let m2 = &r[0];
    assert_eq!(m2["verdicts"]["isomorphic_to_m2"], true);
    let g1 = &m2["matrices"]["g1"];
    let g2 = &m2["matrices"]["g2"];
    assert_eq!(
        g1,
        &serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]])
    );
    assert_eq!(
        g2,
        &serde_json::json!([[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]])
    );
}

#[test]
fn example_presets_pass() {
    for preset in ["crossed", "rieffel", "inner", "modules"] {
        let out = qtwist(&["example", preset]);
        assert_eq!(out.status.code(), Some(0), "{preset}");
    }
}

#[test]
fn example_csv_tables() {
    let out = qtwist(&["example", "torus", "--n", "4", "--k", "2", "--emit", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("torus,dim,center_dim,4"), "{text}");
}

#[test]
fn example_errors() {
    assert_eq!(qtwist(&["example", "nope"]).status.code(), Some(2));
    let out = qtwist(&["example", "torus", "--n", "1", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_is_deterministic_and_small_caps_keep_skew() {
    let dir = tempfile::tempdir().unwrap();
    let repro = dir.path().join("repro.json");
    let args = [
        "suite",
        "--seed",
        "11",
        "--max-order",
        "2",
        "--reproducer",
        repro.to_str().unwrap(),
    ];
    let a = qtwist(&args);
    let b = qtwist(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!repro.exists());
    let r = json(&a);
    assert_eq!(r["seed"], 11);
    let names: Vec<&str> = r["scenarios"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"skew") && names.contains(&"skew_clifford"));
}

#[test]
fn suite_rejects_bad_caps() {
    assert_eq!(
        qtwist(&["suite", "--max-order", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qtwist(&["suite", "--max-order", "99"]).status.code(),
        Some(2)
    );
}

#[test]
fn documented_example_verifies() {
    let doc_path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "docs",
        "spec-schema.md",
    ]
    .iter()
    .collect();
    let doc = std::fs::read_to_string(doc_path).unwrap();
    let start = doc.find("```json\n").unwrap() + 8;
    let len = doc[start..].find("```").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("doc.json");
    std::fs::write(&p, &doc[start..start + len]).unwrap();
    assert_eq!(
        qtwist(&["verify", p.to_str().unwrap()]).status.code(),
        Some(0)
    );
}

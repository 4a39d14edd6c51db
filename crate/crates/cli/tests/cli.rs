use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_contextuality"));
    c.env_remove("CONTEXTUALITY_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn assert_schema_valid(doc: &Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&schema)
        .expect("schema compiles");
    let messages: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(messages.is_empty(), "report violates schema: {messages:#?}");
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn catalog_lists_twenty_classified_states() {
    let doc = json(&["catalog"]);
    assert_schema_valid(&doc);
    let states = doc["states"].as_array().unwrap();
    assert_eq!(states.len(), 20);
    let by_id = |id: &str| states.iter().find(|s| s["id"] == id).unwrap();
    assert_eq!(by_id("rho7")["is_ppt_separable"], true);
    assert!((f(&by_id("psi1")["chsh_max"]) - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
    assert!(by_id("rho20")["preparation"].is_null());

    let csv = run(&["catalog", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 21);
}

#[test]
fn ideal_run_gives_six_everywhere() {
    let doc = json(&["run", "--ideal"]);
    assert_schema_valid(&doc);
    assert_eq!(doc["config"]["mode"], "exact");
    let table = doc["table"].as_array().unwrap();
    assert_eq!(table.len(), 20);
    for row in table {
        assert!((f(&row["chi"]) - 6.0).abs() < 1e-9, "{}", row["state"]);
        assert!(row["sds_of_violation"].is_null());
    }
}

#[test]
fn default_noise_run_matches_laboratory_scale() {
    let doc = json(&["run", "--seed", "3"]);
    assert_schema_valid(&doc);
    let average = f(&doc["pure_state_average_chi"]);
    assert!((5.3..=5.6).contains(&average), "{average}");
    for s in doc["states"].as_array().unwrap() {
        assert!(f(&s["sds_of_violation"]) > 400.0);
        let ctx = &s["contexts"][0];
        let total: u64 = ctx["bins"].as_array().unwrap().iter().map(|b| b["count"].as_u64().unwrap()).sum();
        // about η·N photons survive detection
        assert!((total as f64 - 8.5e6).abs() < 2e4, "{total}");
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["run", "--states", "psi1,rho5", "--seed", "42", "--shots", "100000"];
    for path in [&a, &b] {
        let out = bin().args(args).arg("--out").arg(path).output().unwrap();
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let from_env = bin()
        .args(["run", "--states", "psi1,rho5", "--shots", "100000"])
        .env("CONTEXTUALITY_SEED", "42")
        .output()
        .unwrap();
    let text = std::fs::read(&a).unwrap();
    assert_eq!(from_env.stdout, text);

    let other = run(&["run", "--states", "psi1,rho5", "--seed", "43", "--shots", "100000"]);
    assert_ne!(other.stdout, text);
}

#[test]
fn direct_and_combined_mixtures() {
    let combined = json(&["run", "--states", "rho6", "--seed", "8"]);
    let direct = json(&["run", "--states", "rho6", "--seed", "8", "--direct"]);
    assert_eq!(combined["config"]["mixed_states"], "combined");
    assert_eq!(direct["config"]["mixed_states"], "direct");
    let (c, d) = (&combined["table"][0], &direct["table"][0]);
    assert!((f(&c["chi"]) - f(&d["chi"])).abs() < 3.0 * f(&c["chi_sd"]) + 3.0 * f(&d["chi_sd"]));
}

#[test]
fn run_csv_has_one_row_per_detector() {
    let out = run(&["run", "--states", "psi1,psi2", "--format", "csv", "--shots", "1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("state,kind,context,sign,outcome,count"));
    assert_eq!(lines.count(), 2 * 6 * 8);
}

#[test]
fn sweep_endpoints_and_monotonicity() {
    let doc = json(&["sweep", "--exact", "--vis-ps-grid", "1.0", "--vis-pi-grid", "1.0"]);
    assert_schema_valid(&doc);
    for row in doc["rows"].as_array().unwrap() {
        assert!((f(&row["chi"]) - 6.0).abs() < 1e-9);
    }
    let doc = json(&["sweep", "--vis-ps-grid", "0.0"]);
    for row in doc["rows"].as_array().unwrap() {
        assert!(f(&row["chi"]) < 3.0);
    }

    let grid = ["1.0", "0.95", "0.9", "0.7", "0.5"];
    let doc = json(&["sweep", "--vis-ps-grid", &grid.join(","), "--states", "psi3,psi18,rho7"]);
    let rows = doc["rows"].as_array().unwrap();
    for state in ["psi3", "psi18", "rho7"] {
        let chis: Vec<f64> = rows.iter().filter(|r| r["state"] == state).map(|r| f(&r["chi"])).collect();
        assert_eq!(chis.len(), grid.len());
        assert!(chis.windows(2).all(|w| w[1] <= w[0]), "{state}: {chis:?}");
    }

    let csv = run(&["sweep", "--exact", "--format", "csv", "--states", "psi1"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "vis_ps,vis_pi,state,chi,chi_sd");
}

#[test]
fn optics_verification_covers_all_pairs() {
    let doc = json(&["verify-optics"]);
    assert_schema_valid(&doc);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 120);
    assert_eq!(doc["devices"].as_array().unwrap().len(), 9);
    assert!(f(&doc["max_total_variation"]) < 1e-9);
    assert!(doc["devices"].as_array().unwrap().iter().all(|d| d["pass"] == true));
    assert_eq!(doc["pass"], true);

    let csv = run(&["verify-optics", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 121);
}

#[test]
fn classical_certificate() {
    let doc = json(&["certify-classical"]);
    assert_schema_valid(&doc);
    assert_eq!(doc["max_chi"], 4);
    assert_eq!(doc["assignments"], 512);
    assert_eq!(doc["quantum_gap"], 2);
    assert!(doc["table"].is_null());

    let full = json(&["certify-classical", "--table"]);
    assert_schema_valid(&full);
    assert_eq!(full["table"].as_array().unwrap().len(), 512);

    let csv = run(&["certify-classical", "--table", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "index,A,B,C,a,b,c,alpha,beta,gamma,chi");
    assert_eq!(text.lines().count(), 513);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["run", "--states", "psi99"]).status.code(), Some(2));
    assert_eq!(run(&["run", "--efficiency", "0"]).status.code(), Some(2));
    assert_eq!(run(&["run", "--shots", "0"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--out", "/nonexistent-dir/x.json"]).status.code(), Some(2));
    // a run that fails to violate the bound is a verification failure
    assert_eq!(run(&["run", "--states", "psi1", "--vis-ps", "0.5"]).status.code(), Some(1));
    assert_eq!(run(&["certify-classical"]).status.code(), Some(0));
}

#[test]
fn schema_rejects_malformed_reports() {
    let mut doc = json(&["certify-classical"]);
    doc["max_chi"] = Value::String("four".into());
    let result = std::panic::catch_unwind(|| assert_schema_valid(&doc));
    assert!(result.is_err());
}

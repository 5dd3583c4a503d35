use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use twisted_satake::presets::STANDARD_KEYS;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twisted-satake"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("twisted-satake-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

const SU3_JSON: &str = r#"{
    "base": {"rank": 2, "simple_roots": [[2, -1], [-1, 2]], "simple_coroots": [[1, 0], [0, 1]]},
    "generators": [{"lattice_map": [[0, 1], [1, 0]], "root_permutation": [1, 0]}],
    "folded_cartan": {"type": "A1", "simple_roots": [[1, 0]], "simple_coroots": [[2, 2]]}
}"#;

#[test]
fn describe_su3() {
    let v = json(&["describe", "SU3"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["coinvariants"], "Z");
    assert_eq!(v["pi1_coinvariants"], "0");
    assert_eq!(v["relative_weyl_order"], 2);
    assert_eq!(v["orbits"][0]["type"], "adjacent-pair");
    assert_eq!(v["orbits"][0]["averaged_root"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(v["fixed_dual_group"]["folded"]["group"], "PGL2");

    let at2 = json(&["describe", "SU3", "--coeff", "Zl:2"]);
    assert_eq!(at2["fixed_dual_group"]["quasi_reductive_nonreductive_at_2"], true);
    assert_eq!(at2["fixed_dual_group"]["smooth"], "no");
    assert_eq!(at2["fixed_dual_group"]["folded"], Value::Null);
}

#[test]
fn describe_small_cases() {
    let sl2 = json(&["describe", "SL2"]);
    assert_eq!(sl2["inertia_order"], 1);
    assert_eq!(sl2["pi1_coinvariants"], "0");
    let pgl2 = json(&["describe", "PGL2"]);
    assert_eq!(pgl2["pi1_coinvariants"], "Z/2");
}

#[test]
fn json_is_deterministic_and_exact() {
    for args in [
        vec!["describe", "Spin8-triality", "--format", "json"],
        vec!["schubert", "SU4", "--bound", "4", "--format", "json"],
        vec!["dominant-image", "SU3", "--format", "json"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout);
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert!(no_floats(&v), "{args:?}");
    }
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn schubert_su3() {
    let v = json(&["schubert", "SU3", "--bound", "6"]);
    let dims: Vec<i64> = v["nodes"].as_array().unwrap().iter().map(|n| n["dim"].as_i64().unwrap()).collect();
    assert_eq!(dims, vec![0, 2, 4, 6, 8, 10, 12]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);

    let dot = run(&["schubert", "PGL2", "--bound", "2", "--format", "dot"]);
    let text = stdout(&dot);
    assert!(text.starts_with("digraph schubert {"));
    assert!(text.contains("n0 -> n2;"));
    assert_eq!(run(&["describe", "SU3", "--format", "dot"]).status.code(), Some(1));
}

#[test]
fn dominant_image_su3() {
    let o = run(&["dominant-image", "SU3", "--bound", "6"]);
    let text = stdout(&o);
    assert!(text.contains("image         0 2 3 4 5 6\n"), "{text}");
    assert!(text.contains("missing       1\n"), "{text}");
}

#[test]
fn mv_and_conv() {
    let v = json(&["mv", "SU3", "-1", "1"]);
    assert_eq!(v["nonempty"], true);
    assert_eq!(v["dim"], 0);
    assert_eq!(json(&["mv", "SU3", "-3", "1"])["nonempty"], false);
    let c = json(&["conv", "SU3", "-1", "1", "1", "1"]);
    assert_eq!(c["dim"], 2);
    assert_eq!(json(&["conv", "SU3", "-3", "0", "1", "1"])["nonempty"], false);
    assert_eq!(run(&["mv", "SU3", "1", "-1"]).status.code(), Some(2));
}

#[test]
fn tensor_and_branch() {
    assert_eq!(stdout(&run(&["tensor", "PGL2", "1", "1"])), "V(2) + V(0)\n");
    assert_eq!(stdout(&run(&["tensor", "SL2", "1", "1"])), "V(2) + V(1) + V(0)\n");
    assert_eq!(stdout(&run(&["tensor", "SU3", "0", "3"])), "V(3)\n");

    let b = json(&["branch", "SL2xSL2-swap", "1,1"]);
    let summands: Vec<(String, u64)> = b["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["highest_weight"].as_str().unwrap().to_string(), s["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(summands, vec![("2".to_string(), 1), ("0".to_string(), 1)]);

    let p = run(&["branch", "SU3", "1,1", "--coeff", "Fl:2"]);
    assert_eq!(p.status.code(), Some(2));
    assert!(stdout(&p).contains("restricted weights"));
    assert!(stdout(&p).contains("unsupported decomposition"));
}

#[test]
fn corr_values() {
    let v = json(&["corr", "SU3", "1"]);
    assert_eq!(v["values"][0]["corr"], 2);
    let all = json(&["corr", "SU3", "--levi", "0,1", "--bound", "3"]);
    assert!(all["values"].as_array().unwrap().iter().all(|x| x["corr"] == 0));
    assert_eq!(run(&["corr", "SU3", "--levi", "0", "1"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "SU3", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&["verify", "PGL2", "exactness"]);
    assert_eq!(v["passed"], true);
    let details: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["detail"].as_str().unwrap()).collect();
    assert!(details.iter().any(|d| d.contains("cokernel Z/2")));
}

#[test]
fn every_preset_verifies() {
    for key in STANDARD_KEYS {
        let o = run(&["verify", key]);
        assert_eq!(o.status.code(), Some(0), "{key}: {}", stdout(&o));
    }
}

#[test]
fn files_and_errors() {
    let good = temp_file("su3.json", SU3_JSON);
    let v = json(&["describe", "--file", good.to_str().unwrap()]);
    assert_eq!(v["coinvariants"], "Z");

    let bad = temp_file("pinning.json", &SU3_JSON.replace("\"root_permutation\": [1, 0]", "\"root_permutation\": [0, 1]"));
    let o = run(&["verify", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL datum/diagram-automorphism"), "{}", stdout(&o));

    let malformed = temp_file("malformed.json", "{\n  \"base\": [1,\n");
    let o = run(&["describe", "--file", malformed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let shape = temp_file("shape.json", &SU3_JSON.replace("[[0, 1], [1, 0]]", "[[0, 1, 0], [1, 0]]"));
    let o = run(&["describe", "--file", shape.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("generators[0].lattice_map[0]"), "{}", stderr(&o));

    for p in [good, bad, malformed, shape] {
        let _ = std::fs::remove_file(p);
    }

    assert_eq!(run(&["describe", "NOPE"]).status.code(), Some(2));
    assert_eq!(run(&["describe"]).status.code(), Some(1));
    assert_eq!(run(&["mv", "SU3", "1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["describe", "SU3", "--bound", "0"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "SU3", "nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

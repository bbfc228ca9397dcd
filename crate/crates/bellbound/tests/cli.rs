use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bellbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn scan_small_grid() {
    let out = bellbound(&["scan", "--resolution", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p1,p2,h_B,h_Bxorb,p_max_a0,p_max_a1,beta_max,alpha_max");
    assert_eq!(lines.len(), 10);
    assert!(lines.contains(&"0.5,0.5,1,1,0.5,0.5,0.5,0"));
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["min_beta_max"], 0.5);
    assert_eq!(summary["argmin_beta_max"], serde_json::json!([[0.5, 0.5]]));
}

#[test]
fn scan_json_key_order() {
    let out = bellbound(&["scan", "--resolution", "5", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<usize> = ["\"resolution\"", "\"max_beta_max\"", "\"min_beta_max\"", "\"max_alpha_max\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["scan", "--resolution", "1"][..],
        &["simulate", "pr-onebit", "--trials", "0"],
        &["analyze", "no-such-protocol"],
        &["analyze", "biased:2:one"],
        &["analyze"],
        &["frobnicate"],
    ] {
        assert_eq!(bellbound(args).status.code(), Some(2), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"lambda\": []}").unwrap();
    let out = bellbound(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing/dir/surface.csv");
    let out = bellbound(&["scan", "--resolution", "3", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pr.json");
    let to_file = bellbound(&["analyze", "--protocol", "pr-onebit", "--out", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let to_stdout = bellbound(&["analyze", "pr-onebit"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn analyze_builtins() {
    let pr = json(&bellbound(&["analyze", "--protocol", "pr-onebit"]));
    assert_eq!(pr["scores"]["beta_score"], 1.0);
    assert_eq!(pr["info"]["i_b"], 1.0);
    assert_eq!(pr["scores"]["ic_violated"], true);
    assert_eq!(pr["scores"]["violations"], serde_json::json!(["(0,0,0)"]));

    let biased = json(&bellbound(&["analyze", "biased:0.8:one"]));
    assert_eq!(biased["info"]["i_big_b"], 0.0);
    assert_eq!(biased["scores"]["variants"][0]["variant"], "(0,0,0)");
    assert_eq!(biased["scores"]["variants"][0]["score"], 0.9);

    let local = json(&bellbound(&["analyze", "local:id,const0"]));
    assert_eq!(local["scores"]["violations"], serde_json::json!([]));
    assert_eq!(local["fano"]["holds"], true);
}

#[test]
fn analyze_protocol_file() {
    let out = bellbound(&["analyze", "--protocol", &fixture("biased_coin.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["scores"]["variants"][0]["score"], 0.9);
    assert_eq!(v["protocol"]["label"], "biased coin, A = 1 on a = 0");
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "biased:0.8:zero", "--trials", "20000", "--seed", "11"];
    let first = bellbound(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, bellbound(&args).stdout);
    let other = bellbound(&["simulate", "biased:0.8:zero", "--trials", "20000", "--seed", "12"]);
    assert_ne!(first.stdout, other.stdout);
    let v = json(&first);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["variants"][5]["variant"], "(1,0,1)");
    assert_eq!(v["variants"][5]["exact"], 0.9);
    let csv = bellbound(&["simulate", "pr-onebit", "--trials", "1000", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("quantity,estimate,std_error,exact\n"));
}

#[test]
fn one_trial_is_allowed() {
    let out = bellbound(&["simulate", "pr-onebit", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["beta_abs_gap"], Value::Null);
}

#[test]
fn verify_determinism_and_negative_control() {
    let args = ["verify", "--seed", "42", "--trials", "20000", "--resolution", "21"];
    let a = bellbound(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    let b = Command::new(env!("CARGO_BIN_EXE_bellbound"))
        .args(args)
        .env("BELLBOUND_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);

    let broken = bellbound(&["verify", "--trials", "0", "--resolution", "5", "--inject-broken"]);
    assert_eq!(broken.status.code(), Some(3));
    let table = String::from_utf8(broken.stdout).unwrap();
    assert!(table.contains("setting-necessity     FAIL"), "{table}");
    assert!(table.contains("random-b-indep:injected(chi=b)"));
}

#[test]
fn verify_json_embeds_seeds() {
    let out = bellbound(&["verify", "--seed", "3", "--trials", "0", "--resolution", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["setting_corpus_seeds"].as_array().unwrap().len(), 1000);
    assert_eq!(v["outcome_corpus_seeds"].as_array().unwrap().len(), 1000);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    // a corpus seed replays through analyze
    let seed = v["setting_corpus_seeds"][17].as_u64().unwrap();
    let replay = json(&bellbound(&["analyze", &format!("random-b-indep:{seed}")]));
    assert_eq!(replay["protocol"]["seed"], seed);
}

#[test]
fn bad_thread_env_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_bellbound"))
        .args(["scan", "--resolution", "3"])
        .env("BELLBOUND_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn taxmine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taxmine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn taxmine_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_taxmine"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generated(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend(["-o", path_str(&path)]);
    let out = taxmine(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn ids(v: &Value) -> Vec<Vec<u64>> {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn mine_running_example() {
    let dir = TempDir::new().unwrap();
    let psi1 = generated(&dir, "psi1.json", &["running-example"]);
    for miner in [
        "alg1",
        "alg1-minimal",
        "alg1-dual",
        "halving",
        "chain-partition",
        "greedy",
        "exhaustive",
    ] {
        let out = taxmine(&[
            "mine",
            "--taxonomy",
            path_str(&psi1),
            "--mfis",
            "[[3],[4]]",
            "--miner",
            miner,
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{miner}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let doc = json(&out);
        assert_eq!(ids(&doc["mfis"]), vec![vec![3], vec![4]], "{miner}");
        assert_eq!(ids(&doc["miis"]), vec![vec![2, 3]], "{miner}");
        assert!(doc["bounds"].as_array().unwrap().iter().all(|b| b["satisfied"] == true));
    }
}

#[test]
fn mine_from_a_database() {
    let dir = TempDir::new().unwrap();
    let psi1 = generated(&dir, "psi1.json", &["running-example"]);
    let db = dir.path().join("db.json");
    fs::write(
        &db,
        r#"{"taxonomy": "psi1.json", "theta": "1/2", "transactions": [[1, 2, 3, 4], [3], [4]]}"#,
    )
    .unwrap();
    let out = taxmine(&[
        "mine",
        "-t",
        path_str(&psi1),
        "--database",
        path_str(&db),
        "-m",
        "alg1-maximal",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(ids(&doc["mfis"]), vec![vec![3], vec![4]]);
    assert_eq!(ids(&doc["miis"]), vec![vec![2, 3]]);
}

#[test]
fn mine_usage_errors() {
    let dir = TempDir::new().unwrap();
    let psi1 = generated(&dir, "psi1.json", &["running-example"]);
    let t = path_str(&psi1);
    for args in [
        vec!["mine", "-t", t, "--mfis", "[[9]]"],
        vec!["mine", "-t", t, "--mfis", "not json"],
        vec!["mine", "-t", t, "--mfis", "[[1],[3]]"],
        vec!["mine", "-t", t, "--mfis", "[[3]]", "-k", "1"],
        vec!["mine", "-t", t, "--mfis", "[[3]]", "--miner", "nope"],
        vec!["mine", "-t", t],
        vec!["mine", "-t", "/nonexistent/psi1.json", "--mfis", "[[3]]"],
    ] {
        assert_eq!(taxmine(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn k_itemset_mining() {
    let dir = TempDir::new().unwrap();
    let flat = generated(&dir, "flat.json", &["flat", "-n", "4"]);
    let out = taxmine(&[
        "mine",
        "-t",
        path_str(&flat),
        "--mfis",
        "[[1,2,3]]",
        "-k",
        "2",
        "-m",
        "halving",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(ids(&doc["mfis"]), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
}

#[test]
fn materialize_reports_stats() {
    let dir = TempDir::new().unwrap();
    let chain = generated(&dir, "chain7.json", &["chain", "-n", "7"]);
    let out_file = dir.path().join("psi_i.json");
    let out = taxmine(&["materialize", "-t", path_str(&chain), "-o", path_str(&out_file)]);
    assert!(out.status.success());
    assert_eq!(json(&out)["nodes"], 8);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(doc["kind"], "itemset-taxonomy");
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 8);

    let flat = generated(&dir, "flat3.json", &["flat", "-n", "3"]);
    let out = taxmine(&["materialize", "-t", path_str(&flat), "-k", "1"]);
    assert_eq!(json(&out)["stats"]["nodes"], 4);

    let psi1 = generated(&dir, "psi1.json", &["running-example"]);
    let out = taxmine(&["materialize", "-t", path_str(&psi1), "--solutions"]);
    assert_eq!(json(&out)["stats"]["nodes"], 14);
}

#[test]
fn generation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["random-dag", "-n", "9", "--edge-prob", "0.4", "--seed", "42"];
    let a = fs::read(generated(&dir, "a.json", &args)).unwrap();
    let b = fs::read(generated(&dir, "b.json", &args)).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        taxmine(&["generate", "random-dag", "--edge-prob", "1.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_missing_config() {
    let out = taxmine(&["bench", "--config", "/nonexistent/missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_invalid_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"taxonomies": [], "predicates": [], "miners": ["halving"], "colour": 1}"#,
    )
    .unwrap();
    assert_eq!(taxmine(&["bench", "-c", path_str(&cfg)]).status.code(), Some(2));
    fs::write(
        &cfg,
        r#"{"taxonomies": [{"kind": "chain", "n": 3}], "predicates": [{"kind": "random", "seed": 1}], "miners": []}"#,
    )
    .unwrap();
    assert_eq!(taxmine(&["bench", "-c", path_str(&cfg)]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv_next_to_the_config() {
    let dir = TempDir::new().unwrap();
    generated(&dir, "psi1.json", &["running-example"]);
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{
            "taxonomies": [{"kind": "file", "path": "psi1.json"}, {"kind": "random-dag", "n": 5, "edge_prob": 0.3, "seed": 7}],
            "predicates": [{"kind": "random", "seed": 3, "count": 3}],
            "miners": ["alg1-any", "alg1-minimal", "alg1-maximal", "alg1-dual", "exhaustive", "halving", "chain-partition", "greedy"],
            "oracle": "database",
            "theta": "1/3",
            "output": "records.csv",
            "format": "csv"
        }"#,
    )
    .unwrap();
    let out = taxmine(&["bench", "-c", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("records.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 3 * 8);
    assert!(lines[0].starts_with("taxonomy,predicate,miner,"));

    let out = taxmine(&[
        "bench",
        "-c",
        path_str(&cfg),
        "--format",
        "json",
        "-o",
        path_str(&dir.path().join("r.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let records: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert!(records.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn interactive_session() {
    let dir = TempDir::new().unwrap();
    let psi1 = generated(&dir, "psi1.json", &["running-example"]);
    let transcript = dir.path().join("t.json");
    let answers = "maybe\n".to_string() + &"y\n".repeat(20);
    let out = taxmine_with_input(
        &[
            "interactive",
            "-t",
            path_str(&psi1),
            "--transcript",
            path_str(&transcript),
        ],
        &answers,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Do these often occur together: (no items at all)? [y/n]"));
    assert!(text.contains("Please answer y or n."));
    assert!(text.contains("Frequent combinations: {bicycle_touring, indoor_cycling}"));
    let records: Value = serde_json::from_str(&fs::read_to_string(&transcript).unwrap()).unwrap();
    let records = records.as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["frequent"] == true));
}

#[test]
fn interactive_session_closed_early() {
    let dir = TempDir::new().unwrap();
    let psi1 = generated(&dir, "psi1.json", &["running-example"]);
    let transcript = dir.path().join("t.json");
    let out = taxmine_with_input(
        &[
            "interactive",
            "-t",
            path_str(&psi1),
            "--transcript",
            path_str(&transcript),
        ],
        "y\nn\n",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Session ended early"));
    let records: Value = serde_json::from_str(&fs::read_to_string(&transcript).unwrap()).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 2);
}

use std::collections::HashSet;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn loopy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn check_cycle_is_disconnected() {
    let o = loopy(&["check", "--seq", "2,2,2,2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["status"], "Disconnected");
    assert_eq!(v["m_star"], 4);
    let edges = v["witness"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 4);
    let mut degree = [0; 4];
    for e in edges {
        let (u, w) = (
            e[0].as_u64().unwrap() as usize,
            e[1].as_u64().unwrap() as usize,
        );
        assert_ne!(u, w);
        degree[u] += 1;
        degree[w] += 1;
    }
    assert_eq!(degree, [2; 4]);
}

#[test]
fn check_uses_the_max_degree_bound() {
    let o = loopy(&["check", "--seq", "4,4,3,3,2,2,2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["status"], "Connected");
    assert_eq!(v["method"], "MaxDegreeBound");
    assert!(v["witness"].is_null());
}

#[test]
fn check_exit_codes() {
    let o = loopy(&["check", "--seq", "3,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not loopy-graphical (odd degree sum)"));

    assert_eq!(loopy(&["check", "--seq", "2,x"]).status.code(), Some(2));
    assert_eq!(
        loopy(&["check", "--seq-file", "/nonexistent/seqs.txt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(loopy(&["check"]).status.code(), Some(2));
}

#[test]
fn check_reads_sequence_files_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let seqs = dir.path().join("seqs.txt");
    let out = dir.path().join("out.jsonl");
    fs::write(&seqs, "# two sequences\n2,2,2\n4 4 2\n").unwrap();
    let o = loopy(&[
        "check",
        "--seq-file",
        seqs.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let lines: Vec<Value> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["status"], "Disconnected");
    assert_eq!(lines[1]["status"], "Connected");
}

#[test]
fn sample_two_state_space() {
    let o = loopy(&[
        "sample",
        "--seq",
        "2,2,2",
        "--count",
        "1000",
        "--epsilon",
        "0.1",
        "--mode",
        "vertex",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 1000);
    let distinct: HashSet<&str> = blocks.iter().map(|b| b.trim_end()).collect();
    assert_eq!(distinct.len(), 2);
    assert!(distinct.contains("# n=3\n0 0\n1 1\n2 2"));
    assert!(distinct.contains("# n=3\n0 1\n0 2\n1 2"));
}

#[test]
fn sample_is_deterministic_and_reports_stats() {
    let args = [
        "sample",
        "--seq",
        "3,3,2,2,2",
        "--count",
        "20",
        "--seed",
        "3",
        "--format",
        "json",
        "--stats",
    ];
    let (a, b) = (loopy(&args), loopy(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_lines(&a).len(), 20);
    let stats: Value = serde_json::from_slice(&a.stderr).unwrap();
    let steps = stats["steps"].as_u64().unwrap();
    let parts = ["accepted_double", "accepted_triangle", "rejected"]
        .iter()
        .map(|k| stats[k].as_u64().unwrap())
        .sum::<u64>();
    assert_eq!(steps, parts);
    assert!(steps > 0);
}

#[test]
fn sample_refuses_double_swaps_on_disconnected_space() {
    let o = loopy(&["sample", "--seq", "2,2,2,2", "--epsilon", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("double swaps alone"));
    let o = loopy(&[
        "sample",
        "--seq",
        "2,2,2,2",
        "--epsilon",
        "auto",
        "--count",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sample_single_edge() {
    let o = loopy(&["sample", "--seq", "1,1", "--count", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 3);
    assert!(lines
        .iter()
        .all(|l| l["edges"] == serde_json::json!([[0, 1]])));
}

#[test]
fn enumerate_lists_every_graph() {
    let o = loopy(&["enumerate", "--seq", "2,2,2,2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 8);
    let distinct: HashSet<String> = lines.iter().map(|l| l.to_string()).collect();
    assert_eq!(distinct.len(), 8);

    let o = loopy(&["enumerate", "--seq", "2,2,2", "--dot"]);
    assert!(stdout(&o).starts_with("graph G {"));
    assert_eq!(
        loopy(&["enumerate", "--seq", "9,9,9,9"]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_reports() {
    let o = loopy(&["verify", "--seq", "2,2,2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["disconnected"], true);
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));

    let o = loopy(&["verify", "--seq", "6,3,3,3,3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["disconnected"], true);
    assert!(v["q2_count"].as_u64().unwrap() >= 1);

    let o = loopy(&["verify", "--seq", "6,3,3,3,3", "--bound", "16"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_has_no_violations() {
    let o = Command::new(env!("CARGO_BIN_EXE_loopy"))
        .args(["sweep", "--max-sum", "10"])
        .env("LOOPY_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.trim_end().ends_with("with violations"));
    assert!(text.contains(", 0 with violations"));

    let o = loopy(&["sweep", "--max-sum", "8", "--format", "json"]);
    let reports = json_lines(&o);
    let sequences: Vec<String> = reports.iter().map(|r| r["sequence"].to_string()).collect();
    assert_eq!(sequences[0], "[2]");
    assert!(reports.iter().all(|r| r["checks"]["e"] == true));

    assert_eq!(loopy(&["sweep", "--max-sum", "16"]).status.code(), Some(1));
}

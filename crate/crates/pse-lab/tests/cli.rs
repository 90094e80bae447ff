//! Exit codes and file handling of the `pse-lab` binary.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pse-lab"))
}

#[test]
fn unknown_flag_exits_1() {
    let out = bin().arg("encode").arg("--no-such-flag").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("encode"));
}

#[test]
fn missing_input_file_exits_1() {
    let out = bin().args(["stats", "--input", "/nonexistent/graphs.jsonl"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_jsonl_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(
        &path,
        "{\"num_nodes\":2,\"edges\":[[0,1]]}\nnot json at all\n",
    )
    .unwrap();
    let out = bin().args(["stats", "--input"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr was: {stderr}");
}

#[test]
fn edge_out_of_range_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(&path, "{\"num_nodes\":2,\"edges\":[[0,5]]}\n").unwrap();
    let out = bin().args(["stats", "--input"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn empty_input_gives_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.jsonl");
    fs::write(&input, "").unwrap();
    let out_path = dir.path().join("out.csv");
    let out = bin()
        .args(["encode", "--input"])
        .arg(&input)
        .args(["--out"])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&out_path).unwrap();
    assert_eq!(csv, "graph_id,node_id,kind,component_index,value\n");
}

#[test]
fn encode_emits_sidecar_with_config_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.jsonl");
    fs::write(&input, "{\"num_nodes\":3,\"edges\":[[0,1],[1,2],[0,2]]}\n").unwrap();
    let out_path = dir.path().join("enc.csv");
    let out = bin()
        .args(["encode", "--input"])
        .arg(&input)
        .args(["--out"])
        .arg(&out_path)
        .args(["--seed", "17"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let sidecar: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("enc.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["seed"], 17);
    assert!(sidecar["config"].is_object());
}

#[test]
fn verify_thm2_exits_0_and_reports_pass() {
    let out = bin().arg("verify-thm2").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is a JSON report");
    assert_eq!(report["pass"], true);
}

#[test]
fn gen_tri_writes_task_labels_not_colors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.jsonl");
    let out = bin()
        .args(["gen", "tri", "--nodes", "20", "--count", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for line in fs::read_to_string(&path).unwrap().lines() {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(rec["node_task_labels"].is_array());
        assert!(rec.get("node_labels").is_none());
    }
}

#[test]
fn quantize_rounds_csv_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.jsonl");
    fs::write(&input, "{\"num_nodes\":3,\"edges\":[[0,1],[1,2],[0,2]]}\n").unwrap();
    let out = bin()
        .args(["encode", "--input"])
        .arg(&input)
        .args(["--quantize", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for line in String::from_utf8_lossy(&out.stdout).lines().skip(1) {
        let value = line.rsplit(',').next().unwrap();
        let decimals = value.split('.').nth(1).map_or(0, str::len);
        assert_eq!(decimals, 3, "line: {line}");
    }
}

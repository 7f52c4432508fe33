use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplex-quant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_line(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn quantize_report() {
    let v = json_line(&run(&[
        "quantize",
        "--m",
        "3",
        "--n",
        "3",
        "0.55,0.25,0.20",
    ]));
    assert_eq!(v["point"], serde_json::json!([2, 1, 0]));
    assert!((v["distances"]["l1"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(v["distances"]["kl"], "inf");
    assert_eq!(v["rate"], 4);
}

#[test]
fn lattice_point_has_zero_distance() {
    let v = json_line(&run(&["quantize", "--n", "8", "0.125,0.5,0.375"]));
    for norm in ["l1", "l2", "linf", "kl"] {
        assert_eq!(v["distances"][norm].as_f64(), Some(0.0), "{norm}");
    }
}

#[test]
fn budget_picks_n() {
    let v = json_line(&run(&["quantize", "--rate", "3", "0.55,0.25,0.20"]));
    assert_eq!(v["n"], 2);
    let out = run(&["quantize", "--rate", "1", "0.55,0.25,0.20"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn encode_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let blob = dir.path().join("p.tqnt");
    let blob = blob.to_str().unwrap();
    let q = json_line(&run(&[
        "quantize",
        "--n",
        "8",
        "--beta",
        "1/5",
        "--out",
        blob,
        "0.1,0.2,0.3,0.15,0.25",
    ]));
    assert_eq!(std::fs::metadata(blob).unwrap().len(), 22);
    let d = json_line(&run(&["decode", blob]));
    assert_eq!(d["point"], q["point"]);
    assert_eq!(d["index"], q["index"]);
    assert_eq!(d["beta"], "1/5");
    assert_eq!(d["reconstruction"], q["reconstruction"]);
}

#[test]
fn decode_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tqnt");
    std::fs::write(&path, b"XXXXnot a blob at all").unwrap();
    let out = run(&["decode", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad magic"));
}

#[test]
fn input_file_with_several_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.txt");
    std::fs::write(&path, "# counts\n1 1 2\n3 0 1\n").unwrap();
    let out = run(&[
        "quantize",
        "--input",
        path.to_str().unwrap(),
        "--renormalize",
        "--n",
        "4",
    ]);
    assert!(out.status.success());
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["point"], serde_json::json!([3, 0, 1]));
}

#[test]
fn dual_report_and_encode_refusal() {
    let v = json_line(&run(&["quantize", "--n", "2", "--dual", "0.34,0.33,0.33"]));
    assert_eq!(v["coset"], 1);
    assert_eq!(v["rate"], 4);
    let out = run(&[
        "quantize",
        "--n",
        "2",
        "--dual",
        "--out",
        "x.tqnt",
        "0.34,0.33,0.33",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["quantize", "0.5,0.5"]).status.code(), Some(2));
    assert_eq!(
        run(&["quantize", "--n", "2", "--rate", "3", "0.5,0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["quantize", "--n", "2", "0.5,0.6"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["unrank", "--m", "3", "--n", "2", "6"]).status.code(),
        Some(3)
    );
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_simplex-quant"))
        .args(["rank", "1,1"])
        .env("SIMPLEX_QUANT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn rank_unrank_endpoints() {
    let out = run(&["rank", "0,0,0,7"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0");
    let out = run(&["rank", "7,0,0,0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "119");
    let out = run(&["unrank", "--m", "4", "--n", "7", "119"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "7,0,0,0");
}

#[test]
fn analyze_reports_match() {
    let out = run(&["analyze", "--m", "3", "--n", "2", "--norm", "linf"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().find(|l| l.starts_with("linf")).unwrap();
    let cols: Vec<f64> = row
        .split_whitespace()
        .skip(1)
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((cols[0] - 1.0 / 3.0).abs() < 1e-9 && (cols[1] - 1.0 / 3.0).abs() < 1e-9);
    assert!(text.contains("gap 1.013"));
}

#[test]
fn sweep_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("s{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_simplex-quant"))
            .args([
                "sweep",
                "--m",
                "4",
                "--rate",
                "10",
                "--samples",
                "5000",
                "--seed",
                "9",
                "--out",
            ])
            .arg(&path)
            .env("SIMPLEX_QUANT_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.pop().unwrap()).unwrap();
    for scheme in [
        "TYPE_LATTICE,",
        "TYPE_LATTICE_BIASED",
        "TYPE_LATTICE_DUAL",
        "HUFFMAN",
        "GILBERT_MOORE",
    ] {
        assert!(text.contains(scheme), "{scheme}");
    }
}

#[test]
fn compare_rows_for_m3() {
    let out = run(&["compare", "--m", "3", "--rate", "4", "--samples", "2000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let d1: Vec<f64> = text
        .lines()
        .filter(|l| l.starts_with("TYPE_LATTICE,"))
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    for (got, want) in d1.iter().zip([4.0 / 3.0, 2.0 / 3.0, 4.0 / 9.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("HUFFMAN") || l.starts_with("GILBERT_MOORE"))
            .count(),
        2
    );
}

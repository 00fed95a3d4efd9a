use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qaga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaga"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_model(dir: &Path, text: &str) -> String {
    let path = dir.join("model.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const PAIR: &str = r#"{"num_vars": 2, "h": {"1": -2.0, "2": 0.0}, "J": {"1,2": 1.0}}"#;

#[test]
fn exact_solve_of_a_pair() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), PAIR);
    let out = qaga(&["solve", "--model", &model, "--method", "exact"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["energy"], -3.0);
    assert_eq!(report["solution"]["1"], 1);
    assert_eq!(report["solution"]["2"], -1);

    let out = qaga(&[
        "solve", "--model", &model, "--method", "exact", "--format", "csv",
    ]);
    assert_eq!(stdout(&out), "label,spin\n1,1\n2,-1\n");
}

#[test]
fn every_method_reaches_the_pair_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), PAIR);
    for method in ["qa", "mqc", "qaga", "sa", "sqc-polish"] {
        let out = qaga(&[
            "solve", "--model", &model, "--method", method, "--reads", "20", "--gauges", "2",
            "--sweeps", "100",
        ]);
        assert!(
            out.status.success(),
            "{method}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["energy"], -3.0, "{method}");
    }
}

#[test]
fn offset_is_reported_separately() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(
        dir.path(),
        r#"{"num_vars": 1, "h": {"4": 1.0}, "offset": 10.0}"#,
    );
    let out = qaga(&["solve", "--model", &model, "--method", "exact"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["energy"], -1.0);
    assert_eq!(report["energy_with_offset"], 9.0);
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_model(dir.path(), r#"{"num_vars": 2, "h": {"1": 1.0"#);
    let out = qaga(&["solve", "--model", &bad, "--method", "exact"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let good = write_model(dir.path(), PAIR);
    let out = qaga(&[
        "solve", "--model", &good, "--method", "qaga", "--theta", "0.6",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = qaga(&["solve", "--model", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qaga(&["generate", "--sparsity", "1.5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qaga(&["expa", "--reads", "5", "--gauges", "10"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qaga(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreachable_remote_sampler_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), PAIR);
    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let url = format!("http://127.0.0.1:{port}/");
    let out = qaga(&[
        "solve",
        "--model",
        &model,
        "--method",
        "qa",
        "--endpoint",
        &url,
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generate_is_seeded_and_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_str().unwrap();
    let out = qaga(&[
        "generate",
        "--n",
        "6",
        "--sparsity",
        "0.5",
        "--seed",
        "9",
        "--out",
        p,
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["num_vars"], 6);
    let again = qaga(&["generate", "--n", "6", "--sparsity", "0.5", "--seed", "9"]);
    assert_eq!(stdout(&again), text);

    let out = qaga(&["solve", "--model", p, "--method", "exact"]);
    assert!(out.status.success());
}

#[test]
fn experiments_are_byte_identical_across_runs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let expa = |out: &str| {
        qaga(&[
            "expa",
            "--problems",
            "3",
            "--n",
            "10",
            "--sparsities",
            "0.25,1",
            "--reads",
            "40",
            "--gauges",
            "4",
            "--sweeps",
            "100",
            "--seed",
            "5",
            "--out",
            out,
        ])
    };
    let expb = |out: &str| {
        qaga(&[
            "expb",
            "--problems",
            "2",
            "--n",
            "10",
            "--reads",
            "40",
            "--gauges",
            "4",
            "--sweeps",
            "100",
            "--seed",
            "5",
            "--out",
            out,
        ])
    };
    let mut runs = Vec::new();
    for dir in &dirs {
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        let oa = expa(a.to_str().unwrap());
        let ob = expb(b.to_str().unwrap());
        assert!(
            oa.status.success(),
            "{}",
            String::from_utf8_lossy(&oa.stderr)
        );
        assert!(
            ob.status.success(),
            "{}",
            String::from_utf8_lossy(&ob.stderr)
        );
        let files: Vec<Vec<u8>> = [
            a.join("records.csv"),
            a.join("counts.csv"),
            a.join("summary.json"),
            b.join("stages.csv"),
            b.join("stages.json"),
        ]
        .iter()
        .map(|p| fs::read(p).unwrap())
        .collect();
        runs.push((oa.stdout, ob.stdout, files));
    }
    assert_eq!(runs[0], runs[1]);

    let records = String::from_utf8(runs[0].2[0].clone()).unwrap();
    // Header plus 3 problems x 3 distributions x 2 sparsities.
    assert_eq!(records.lines().count(), 1 + 18);
    let stages = String::from_utf8(runs[0].2[3].clone()).unwrap();
    assert_eq!(stages.lines().next(), Some("theta,0.05,0.25,0.5,0.75,1"));
    assert_eq!(stages.lines().count(), 5);
}

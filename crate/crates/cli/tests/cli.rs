use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const OMEGA_DIAG: &str = "[[[0,1],[0,0]],[[0,0],[0,2]]]";
const OMEGA_GENERIC: &str = "[[[0,1],[0.1,0.2]],[[0.1,0.2],[0,2]]]";
const HALVES: &str = r#"{"g":2,"dp":[1,1],"dpp":[1,1]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2theta")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn run_err(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).expect("json error")
}

#[test]
fn null_table_has_sixteen_rows_with_odd_zeros() {
    let v = run_ok(&["theta", "null-table", "--g", "2", "--omega", OMEGA_GENERIC]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for r in rows {
        let abs = r["abs"].as_f64().unwrap();
        if r["parity"] == "odd" {
            assert!(abs <= r["truncation_bound"].as_f64().unwrap() + 1e-12);
        } else {
            assert!(abs > 1e-3);
        }
    }
}

#[test]
fn group_commands() {
    let v = run_ok(&["group", "verify-figure2"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(run_ok(&["group", "reduce", "--word", "ABbC"])["word"], "AC");
    assert_eq!(run_ok(&["group", "trivial", "--word", "ABabCDcd"])["trivial"], true);
    assert_eq!(run_ok(&["group", "trivial", "--word", "A"])["trivial"], false);
    assert_eq!(run_ok(&["group", "abelianize", "--word", "BC"])["class"], serde_json::json!([0, 1, 1, 0]));
    let s = run_ok(&["group", "splitting", "--u", "A", "--v", "B"]);
    assert_eq!(s["canonical"]["v_plus"], serde_json::json!([[1, 0, 0, 0], [0, 1, 0, 0]]));
    let e = run_err(&["group", "reduce", "--word", "AxB"], 2);
    assert_eq!(e["error"]["code"], "malformed_input");
    let e = run_err(&["group", "splitting", "--u", "A", "--v", "A"], 1);
    assert_eq!(e["error"]["code"], "degenerate_input");
    assert_eq!(e["error"]["context"], "group splitting");
}

#[test]
fn strata_commands() {
    let v = run_ok(&["strata", "nerve", "--nbeta", "3", "--radius", "2"]);
    assert_eq!((v["components"].as_u64(), v["pairs"].as_u64()), (Some(150), Some(1875)));
    let v = run_ok(&["strata", "hc", "--nbeta", "1", "--radius", "0"]);
    assert_eq!(v["hc"], serde_json::json!({"5": 1, "6": 2}));
    let v = run_ok(&["strata", "gysin", "--hc", r#"{"5": 4, "6": 9}"#]);
    assert_eq!(v["forced_zero_degrees"], serde_json::json!([4, 5, 6, 7, 8]));
    assert_eq!(run_ok(&["strata", "kernel-rank", "--nbeta", "7"])["kernel_rank"], 7);
    let e = run_err(&["strata", "nerve", "--nbeta", "51"], 1);
    assert_eq!(e["error"]["code"], "resource");
}

#[test]
fn theta_and_locus_commands() {
    let z = "[[0.1,0.05],[-0.2,0.1]]";
    let v = run_ok(&["theta", "eval", "--delta", HALVES, "--omega", OMEGA_GENERIC, "--z", z, "--jet"]);
    assert_eq!(v["full_gradient"].as_array().unwrap().len(), 5);
    let v = run_ok(&["theta", "check", "parity", "--delta", HALVES, "--omega", OMEGA_GENERIC, "--z", z]);
    assert_eq!(v["passed"], true);
    let v = run_ok(&["theta", "check", "heat", "--delta", HALVES, "--omega", OMEGA_GENERIC, "--z", z]);
    assert!(v["relative"].as_f64().unwrap() < 1e-6);
    let v = run_ok(&[
        "theta", "check", "product", "--delta", HALVES, "--omega1", "[[[0,1]]]", "--omega2", "[[[0,2]]]", "--z", z,
    ]);
    assert!(v["relative_residual"].as_f64().unwrap() < 1e-10);
    let m = "[[0,0,-1,0],[0,0,0,-1],[1,0,0,0],[0,1,0,0]]";
    let v = run_ok(&["theta", "check", "transform", "--m", m, "--omega", OMEGA_GENERIC, "--delta", HALVES]);
    assert_eq!(v["table"].as_array().unwrap().len(), 1);

    let v = run_ok(&["locus", "verify-reducible", "--omega1", "[[[0,1]]]", "--omega2", "[[[0,2]]]"]);
    assert_eq!((v["node_count"].as_u64(), v["node_order"].as_u64()), (Some(1), Some(2)));
    let v = run_ok(&["locus", "trace", "--delta", HALVES, "--omega", OMEGA_GENERIC, "--cell-grid", "3"]);
    assert_eq!(v["slices"], 9);
    assert!(!v["points"].as_array().unwrap().is_empty());
    let v = run_ok(&["locus", "classify", "--delta", HALVES, "--omega", OMEGA_DIAG, "--z", "[[0,0],[0,0]]"]);
    assert_eq!(v["kind"], "Node");
    let e = run_err(&["locus", "classify", "--delta", HALVES, "--omega", OMEGA_DIAG, "--z", "[[0.2,0.1],[0.3,0.4]]"], 1);
    assert_eq!(e["error"]["code"], "not_on_locus");
}

#[test]
fn char_and_siegel_commands() {
    let v = run_ok(&["char", "enumerate", "--g", "2"]);
    let all = v["characteristics"].as_array().unwrap();
    assert_eq!(all.iter().filter(|c| c["parity"] == "even").count(), 10);
    assert_eq!(run_ok(&["char", "parity", "--delta", HALVES])["parity"], "even");
    assert_eq!(run_ok(&["char", "parity", "--delta", r#"{"g":2,"dp":[1,0],"dpp":[1,0]}"#])["parity"], "odd");
    let v = run_ok(&["siegel", "reducible", "--omega", OMEGA_DIAG]);
    assert_eq!(v["block_reducible"], true);
    assert_eq!(run_ok(&["siegel", "generators"])["generators"].as_array().unwrap().len(), 6);
    let e = run_err(&["siegel", "act", "--m", "[[1,1,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]", "--omega", OMEGA_DIAG], 1);
    assert_eq!(e["error"]["code"], "not_symplectic");
}

#[test]
fn malformed_input_exits_two() {
    let e = run_err(&["theta", "eval", "--delta", "{not json", "--omega", OMEGA_DIAG, "--z", "[[0,0],[0,0]]"], 2);
    assert_eq!(e["error"]["code"], "malformed_input");
    let e = run_err(&["theta", "eval", "--omega", OMEGA_DIAG, "--z", "[[0,0],[0,0]]"], 2);
    assert!(e["error"]["message"].as_str().unwrap().contains("delta"));
    let e = run_err(&["--target-err=0", "char", "enumerate"], 2);
    assert_eq!(e["error"]["code"], "malformed_input");
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn json_document_and_out_file() {
    let dir = std::env::temp_dir().join(format!("g2theta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("input.json");
    let output = dir.join("out.json");
    std::fs::write(&input, format!(r#"{{"delta": {HALVES}, "omega": {OMEGA_DIAG}, "z": [[0,0],[0.3,0.4]]}}"#)).unwrap();
    let out = run(&["locus", "classify", "--json", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["kind"], "Smooth");
    std::fs::remove_dir_all(&dir).unwrap();

    let mut child = Command::new(env!("CARGO_BIN_EXE_g2theta"))
        .args(["group", "abelianize", "--json", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"word": "CA"}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], serde_json::json!([1, 0, 1, 0]));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = run(&["strata", "gysin", "--nbeta", "2", "--radius", "1", "--seed", "5"]);
    let b = run(&["strata", "gysin", "--nbeta", "2", "--radius", "1", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

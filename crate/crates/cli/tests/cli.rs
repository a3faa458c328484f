use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn soficlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soficlab")).args(args).output().expect("binary runs")
}

fn soficlab_with_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soficlab"))
        .env("SOFICLAB_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn certify_writes_envelope_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = soficlab(&["certify", "--p", "13", "--family", "all", "--out", path_str(&cert)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(report["tool"], "soficlab");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config"]["args"]["p"], 13);
    let certs = report["result"]["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 3);
    assert_eq!(certs[0]["family"], "symmetric");
    assert_eq!(certs[0]["floor"]["value"], "5/12");
    assert_eq!(certs[1]["family"], "gl-rank");
    assert_eq!(certs[2]["floor"]["provenance"], "numeric");
    assert_eq!(certs[0]["transfer"]["kappa"], 191);
    assert_eq!(report["result"]["obstruction"], true);
}

#[test]
fn certify_is_byte_identical_across_thread_counts() {
    let args = ["certify", "--p", "13", "--family", "all", "--seed", "3"];
    let one = soficlab_with_threads("1", &args);
    let four = soficlab_with_threads("4", &args);
    let again = soficlab_with_threads("4", &args);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
}

#[test]
fn local_search_is_reproducible() {
    let args = ["solve", "--group", "cyclic:p=7:metric=lee", "--target", "symmetric:8", "--delta", "1/2", "--seed", "9", "--budget", "96x300"];
    let a = soficlab_with_threads("1", &args);
    let b = soficlab_with_threads("3", &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn certify_csv() {
    let out = soficlab(&["certify", "--p", "7", "--family", "symmetric", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,p,floor,provenance,obstruction,n_min,n_max"));
    assert_eq!(lines.next(), Some("symmetric,7,1/3,exact,true,1,200"));
}

#[test]
fn eval_commutator() {
    let z13 = json(&soficlab(&["eval", "--group", "cyclic:p=13:metric=lee", "--formula", "sup x. sup y. d(x*y,y*x)"]));
    assert_eq!(z13["result"]["value"]["value"], "0");
    assert_eq!(z13["result"]["value"]["provenance"], "exact");
    let s3 = json(&soficlab(&["eval", "--group", "symmetric:n=3:metric=hamming", "--formula", "sup x. sup y. d(x*y,y*x)"]));
    assert_eq!(s3["result"]["value"]["value"], "1");
    let numeric = json(&soficlab(&[
        "eval", "--group", "symmetric:n=3:metric=hamming", "--formula", "d(x, y)", "--assign", "x=213,y=123", "--numeric",
    ]));
    let v = numeric["result"]["value"]["value"].as_f64().unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(numeric["result"]["lipschitz_moduli"]["x"], "1");
}

#[test]
fn eval_check_failure_exits_one() {
    let args = ["eval", "--group", "symmetric:n=3:metric=hamming", "--formula", "sup x. sup y. d(x*y,y*x)", "--check"];
    let out = soficlab(&args);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["condition"]["holds"], false);
    let ok = soficlab(&["eval", "--group", "cyclic:p=5:metric=lee", "--formula", "sup x. sup y. d(x*y,y*x)", "--check"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn eval_syntax_error_exits_two() {
    let out = soficlab(&["eval", "--group", "cyclic:p=5:metric=lee", "--formula", "sup x d(x, e)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error at offset"));
}

#[test]
fn amplify_s3_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (nat, reg, amplified) = (dir.path().join("nat_s3.json"), dir.path().join("reg_s3.json"), dir.path().join("out.json"));
    assert!(soficlab(&["witness", "--natural", "3", "--out", path_str(&nat)]).status.success());
    assert!(soficlab(&["witness", "--regular", "symmetric:n=3:metric=hamming", "--out", path_str(&reg)]).status.success());
    let report = json(&soficlab(&[
        "amplify", "--eps", "1/2", "--theta", path_str(&nat), "--theta-prime", path_str(&reg), "--witness-out", path_str(&amplified),
    ]));
    let result = &report["result"];
    assert_eq!(result["degrees"]["m"], 6);
    assert_eq!(result["degrees"]["m_prime"], 18);
    assert_eq!(result["verified"], true);
    for pair in result["pairs"].as_array().unwrap() {
        assert_eq!(pair["within_tol"], true);
        assert!(pair["distance"] == "7/9" || pair["distance"] == "1", "{pair}");
    }
    assert_eq!(result["defect"]["max"]["value"], "0");
    let witness: Value = serde_json::from_str(&std::fs::read_to_string(&amplified).unwrap()).unwrap();
    assert_eq!(witness["degree"], 18);
    assert_eq!(witness["source"], "shift(symmetric:n=3:metric=hamming,eps=1/2)");
}

#[test]
fn amplify_rank_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let theta = dir.path().join("theta.json");
    let theta_prime = dir.path().join("theta_prime.json");
    // Labels 0, 3, 9 of Z(27) with the nested metric sit at distances 1/2, 1/4, 1/2.
    let file = r#"{"kind":"exponent-vector","source":"nested:p=3:s=3","fragment":["0","3","9"],"dimension":4,"modulus":3,"images":[[0,0,0,0],[1,1,0,0],[2,0,0,0]]}"#;
    std::fs::write(&theta, file).unwrap();
    std::fs::write(&theta_prime, file).unwrap();
    let report = json(&soficlab(&[
        "amplify", "--eps", "1", "--theta", path_str(&theta), "--theta-prime", path_str(&theta_prime),
        "--omega-group", "nested:p=3:s=3",
    ]));
    let distances: Vec<&str> = report["result"]["pairs"].as_array().unwrap().iter().map(|p| p["distance"].as_str().unwrap()).collect();
    assert_eq!(distances, ["1/2", "1/4", "1/2"]);
    assert_eq!(report["result"]["kind"], "exponent-vector");
    assert_eq!(report["result"]["verified"], true);
}

#[test]
fn amplify_rejects_non_discrete_theta_prime() {
    let dir = tempfile::tempdir().unwrap();
    let nat = dir.path().join("nat.json");
    assert!(soficlab(&["witness", "--natural", "3", "--out", path_str(&nat)]).status.success());
    let out = soficlab(&["amplify", "--eps", "1/2", "--theta", path_str(&nat), "--theta-prime", path_str(&nat)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_exit_codes() {
    let ok = json(&soficlab(&["validate", "--group", "shift(nested:p=3:s=2,eps=1/2)"]));
    assert_eq!(ok["result"]["passed"], true);
    assert_eq!(ok["result"]["floor"]["required"], "1/3");
    assert_eq!(ok["result"]["report"]["exhaustive"], true);
    let low = soficlab(&["validate", "--group", "cyclic:p=13:metric=lee", "--floor", "1/2"]);
    assert_eq!(low.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&low.stdout).unwrap();
    assert_eq!(report["result"]["floor"]["holds"], false);
    let bad = soficlab(&["validate", "--group", "cyclic:p=4:metric=lee"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn solve_from_instance_file_and_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("s3.txt");
    let witness = dir.path().join("w.json");
    std::fs::write(
        &instance,
        "# S3 into itself\nsource=symmetric:n=3:metric=hamming\ntarget=symmetric:3\ndelta=1/10\nseed=4\nbudget=32x200\n",
    )
    .unwrap();
    let report = json(&soficlab(&["solve", "--instance", path_str(&instance), "--witness-out", path_str(&witness)]));
    assert_eq!(report["result"]["method"], "local");
    assert_eq!(report["result"]["outcome"], "witness");
    assert_eq!(report["result"]["search"]["seed"], 4);
    assert!(report["config"]["instance_file"].as_str().unwrap().contains("delta=1/10"));
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(w["kind"], "permutation");
    assert_eq!(w["defect"]["max"]["value"], "0");
}

#[test]
fn solve_methods() {
    let alpha = json(&soficlab(&[
        "solve", "--group", "cyclic:p=5:metric=lee", "--target", "symmetric:5", "--delta", "1/10", "--alpha", "1/2",
    ]));
    assert_eq!(alpha["result"]["method"], "discrete");
    assert_eq!(alpha["result"]["outcome"], "witness");
    let cyclic = json(&soficlab(&["solve", "--method", "exhaustive-cyclic", "--p", "13", "--n", "156", "--delta", "1/2"]));
    assert_eq!(cyclic["result"]["solution"]["defect"], "5/12");
    assert_eq!(cyclic["result"]["solution"]["moved"], 91);
    let rank = json(&soficlab(&[
        "solve", "--method", "exhaustive-cyclic", "--family", "rank", "--p", "13", "--n", "12", "--delta", "1/2",
    ]));
    assert_eq!(rank["result"]["solution"]["defect"], "5/12");
    let powers = json(&soficlab(&["solve", "--method", "powers", "--p", "5", "--n", "10", "--delta", "1/2", "--budget", "8x200"]));
    assert_eq!(powers["result"]["method"], "powers");
}

#[test]
fn solve_missing_flag_is_usage_error() {
    let out = soficlab(&["solve", "--method", "exhaustive-cyclic", "--p", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
}

#[test]
fn unknown_flag_and_subcommand_exit_two() {
    assert_eq!(soficlab(&["certify", "--p", "13", "--bogus"]).status.code(), Some(2));
    assert_eq!(soficlab(&["frobnicate"]).status.code(), Some(2));
    let out = soficlab(&["certify", "--p", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

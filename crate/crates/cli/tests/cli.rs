use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_channellab"));
    c.env_remove("CHANNELLAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn envelope(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn emit(dir: &Path, id: &str, extra: &[&str]) -> PathBuf {
    let mut args = vec!["zoo-emit", id];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let path = dir.join(format!("{}.json", id.replace([':', '=', ','], "_")));
    std::fs::write(&path, out.stdout).unwrap();
    path
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = emit(dir.path(), "example-ergodic", &[]);
    let out = run(&["validate", arg(&good)]);
    assert_eq!(out.status.code(), Some(0));
    let env = envelope(&out);
    assert_eq!(env["command"], "validate");
    assert_eq!(env["report"]["passed"], true);
    assert_eq!(env["input_digest"].as_str().unwrap().len(), 64);

    let sub = write(dir.path(), "sub.json", r#"{"dim": 2, "kraus": [[[0.5, 0], [0, 0.5]]]}"#);
    let out = run(&["validate", arg(&sub)]);
    assert_eq!(out.status.code(), Some(2));
    assert!((f(&envelope(&out)["report"]["completeness_defect"]) - 0.75).abs() < 1e-15);

    let truncated = write(dir.path(), "trunc.json", "{\"dim\": 2,\n \"kraus\": [[[1, 0],");
    let out = run(&["validate", arg(&truncated)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = run(&["validate", "/nonexistent/channel.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_examples() {
    let dir = TempDir::new().unwrap();
    let ergodic = emit(dir.path(), "example-ergodic", &[]);
    let r = envelope(&run(&["classify", arg(&ergodic)]))["report"].clone();
    assert_eq!(r["verdict"], "ergodic_not_mixing");
    let peripheral = r["peripheral"].as_array().unwrap();
    assert_eq!(peripheral.len(), 2);
    assert!((f(&peripheral[0][0]) - 1.0).abs() < 1e-8);
    assert!((f(&peripheral[1][0]) + 1.0).abs() < 1e-8);
    assert!((f(&r["purity"]) - 0.5).abs() < 1e-9);

    let mixing = emit(dir.path(), "example-mixing", &[]);
    let out = run(&["classify", arg(&mixing), "--oracle", "--nmax", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let r = envelope(&out)["report"].clone();
    assert_eq!(r["verdict"], "mixing");
    assert_eq!(r["oracle"]["verdict"], "mixing");
    assert_eq!(r["oracle"]["agrees"], true);
    assert_eq!(r["pure_fixed_point_shortcut"], "confirms_mixing");

    let id = write(dir.path(), "id.json", r#"{"dim": 2, "kraus": [[[1, 0], [0, 1]]]}"#);
    let r = envelope(&run(&["classify", arg(&id)]))["report"].clone();
    assert_eq!(r["verdict"], "not_ergodic");
    assert_eq!(r["eigenvalue_one_multiplicity"], 4);
    assert_eq!(r["fixed_points"].as_array().unwrap().len(), 0);

    let sub = write(dir.path(), "sub.json", r#"{"dim": 2, "kraus": [[[0.5, 0], [0, 0.5]]]}"#);
    assert_eq!(run(&["classify", arg(&sub)]).status.code(), Some(2));
    assert_eq!(run(&["classify", arg(&mixing), "--oracle", "--nmax", "50"]).status.code(), Some(1));
}

#[test]
fn stinespring_documents_are_accepted() {
    let dir = TempDir::new().unwrap();
    let doc = r#"{"stinespring": {"dimA": 2, "dimB": 2,
        "unitary": [[1,0,0,0],[0,0,1,0],[0,1,0,0],[0,0,0,1]], "bath_state": [1, 0]}}"#;
    let path = write(dir.path(), "swap.json", doc);
    let r = envelope(&run(&["classify", arg(&path)]))["report"].clone();
    assert_eq!(r["verdict"], "mixing");
    assert!(f(&r["kappa"]).abs() < 1e-12);
}

fn orbit_lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn orbit_streams() {
    let dir = TempDir::new().unwrap();
    let mixing = emit(dir.path(), "example-mixing", &[]);
    let out = run(&["orbit", arg(&mixing), "--state", "basis:2", "--n", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let lines = orbit_lines(&out);
    let d: Vec<f64> = lines.iter().map(|l| f(&l["distance"])).collect();
    let expected = [2.0, 2.0, 0.0, 0.0, 0.0, 0.0];
    assert_eq!(d.len(), expected.len());
    for (a, b) in d.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }

    let dep = emit(dir.path(), "depolarizing:p=0.5", &[]);
    let out = run(&["orbit", arg(&dep), "--n", "20", "--functionals", "relative_entropy,trivial_lyapunov"]);
    let h: Vec<f64> = orbit_lines(&out).iter().map(|l| f(&l["relative_entropy"])).collect();
    assert!((h[0] - std::f64::consts::LN_2).abs() < 1e-12);
    for w in h.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    // near I/2 the relative entropy is quadratic in the Bloch radius 2⁻ⁿ
    assert!(h[20] < 1e-11);

    let out = run(&["orbit", arg(&mixing), "--n", "0"]);
    assert_eq!(orbit_lines(&out).len(), 1);

    let out = run(&["orbit", arg(&mixing), "--functionals", "energy"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("energy"));
    let out = run(&["orbit", arg(&mixing), "--state", "basis:7"]);
    assert_eq!(out.status.code(), Some(1));

    // relative entropy to a non-unique fixed point is a hypothesis failure
    let deph = emit(dir.path(), "dephasing:p=1", &[]);
    let out = run(&["orbit", arg(&deph), "--functionals", "relative_entropy"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dilation_examples() {
    let dir = TempDir::new().unwrap();
    let ps = emit(dir.path(), "partial-swap-dilation:theta=0.7853981633974483", &["--dilation"]);
    let out = run(&["dilation", arg(&ps)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = envelope(&out)["report"].clone();
    assert_eq!(r["factorizing"]["count"], 1);
    assert_eq!(r["factorizing"]["verdict"], "mixing");
    assert_eq!(r["agree"], true);

    let cz = emit(dir.path(), "cz-dilation:phi=3.141592653589793", &["--dilation"]);
    let r = envelope(&run(&["dilation", arg(&cz)]))["report"].clone();
    assert_eq!(r["factorizing"]["count"], 2);
    assert_eq!(r["factorizing"]["verdict"], "not_ergodic");

    let flip = r#"{"dimA": 2, "dimB": 2,
        "unitary": [[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]],
        "bath_state": [1, 0], "mA": [[1,0],[0,-1]], "mB": [[1,0],[0,-1]], "extremal": "max"}"#;
    let path = write(dir.path(), "flip.json", flip);
    let out = run(&["dilation", arg(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("commutator"));
    assert_eq!(envelope(&out)["report"]["conservation"]["failures"][0], "commutator");
}

#[test]
fn cesaro_examples() {
    let dir = TempDir::new().unwrap();
    let ergodic = emit(dir.path(), "example-ergodic", &[]);
    let r = envelope(&run(&["cesaro", arg(&ergodic), "--n", "10000"]))["report"].clone();
    assert!(f(&r["distance"]) <= 2e-4);
    let table = r["table"].as_array().unwrap();
    assert_eq!(table.len(), 5);
    assert_eq!(table[4]["n"], 10000);

    let r = envelope(&run(&["cesaro", arg(&ergodic), "--state", "mixed", "--n", "50"]))["report"].clone();
    assert!(f(&r["distance"]) < 1e-15);

    let mixing = emit(dir.path(), "example-mixing", &[]);
    let r = envelope(&run(&["cesaro", arg(&mixing), "--state", "basis:2", "--n", "100"]))["report"].clone();
    assert!((f(&r["distance"]) - 4.0 / 101.0).abs() < 1e-14);
}

#[test]
fn zoo_commands() {
    let env = envelope(&run(&["zoo-list"]));
    let entries = env["report"].as_array().unwrap();
    assert_eq!(entries.len(), 18);
    assert!(entries.iter().any(|e| e["id"] == "example-mixing" && e["expected_verdict"] == "mixing"));
    let out = run(&["zoo-emit", "nonesuch"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("example-ergodic"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["classify"]).status.code(), Some(1));
    assert_eq!(run(&["--seed", "x", "zoo-list"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let c = emit(dir.path(), "random:dim=3,rank=2,seed=11", &[]);
    let a = run(&["--seed", "5", "classify", arg(&c), "--oracle", "--nmax", "300"]);
    let b = run(&["--seed", "5", "classify", arg(&c), "--oracle", "--nmax", "300"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let via_env = bin()
        .env("CHANNELLAB_SEED", "5")
        .args(["classify", arg(&c), "--oracle", "--nmax", "300"])
        .output()
        .unwrap();
    assert_eq!(a.stdout, via_env.stdout);
    let other = run(&["--seed", "6", "classify", arg(&c), "--oracle", "--nmax", "300"]);
    assert_eq!(envelope(&other)["report"]["oracle"]["seed"], 6);
}

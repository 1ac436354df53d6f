use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EX4: &str = r#"{"poly":{"dim":2,"terms":[{"alpha":[2,2],"coef":1},{"alpha":[1,1],"coef":-2},{"alpha":[0,2],"coef":1},{"alpha":[0,0],"coef":1}]},"A":[[1,0],[0,1]],"b":[0,0]}"#;
const QUARTIC: &str = r#"{"poly":{"dim":2,"terms":[{"alpha":[4,0],"coef":1},{"alpha":[0,4],"coef":1},{"alpha":[2,2],"coef":1},{"alpha":[0,0],"coef":1}]},"A":[[2,0.5],[0.5,1]],"b":[1,-1]}"#;
const SQUARE: &str = r#"{"poly":{"dim":1,"terms":[{"alpha":[2],"coef":1}]},"A":[[1]],"b":[0]}"#;
const NEGATIVE: &str = r#"{"poly":{"dim":1,"terms":[{"alpha":[2],"coef":1},{"alpha":[0],"coef":-1}]},"A":[[1]],"b":[0]}"#;
const INDEFINITE: &str =
    r#"{"poly":{"dim":2,"terms":[{"alpha":[0,0],"coef":1}]},"A":[[1,2],[2,1]],"b":[0,0]}"#;
const P: &str = r#"{"dim":2,"terms":[{"alpha":[2,2],"coef":1},{"alpha":[1,1],"coef":2},{"alpha":[0,2],"coef":-2},{"alpha":[2,0],"coef":-1},{"alpha":[0,0],"coef":3}]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn pnd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnd"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ok_paths_exit_zero() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", QUARTIC);
    for cmd in ["validate", "charfn", "diagnose"] {
        let o = pnd(&[cmd, "--input", s(&q)]);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let cf = pnd(&["charfn", "--input", s(&q)]);
    let cf_path = write(&dir, "cf.json", std::str::from_utf8(&cf.stdout).unwrap());
    let back = pnd(&["invcharfn", "--input", s(&cf_path)]);
    assert_eq!(code(&back), 0);
    assert_eq!(json(&back)["b"], serde_json::json!([1.0, -1.0]));

    let out = dir.path().join("dec.json");
    let dec = pnd(&["decompose", "--input", s(&q), "--output", s(&out)]);
    assert_eq!(code(&dec), 0);
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let theta = d["theta"].as_f64().unwrap();
    assert!(theta > 0.0 && theta < 1.0);
    assert!(d["conv_error"].as_f64().unwrap() < 1e-8);

    let y = write(&dir, "y.json", &d["factor_Y"].to_string());
    let z = write(&dir, "z.json", &d["factor_Z"].to_string());
    let conv = pnd(&["verify", "conv", "--f", s(&q), "--y", s(&y), "--z", s(&z)]);
    assert_eq!(code(&conv), 0);
    assert!(json(&conv)["max_abs_error"].as_f64().unwrap() < 1e-8);

    let csv = dir.path().join("curve.csv");
    let ex = pnd(&["example4", "--csv", s(&csv)]);
    assert_eq!(code(&ex), 0);
    assert!(std::fs::read_to_string(&csv)
        .unwrap()
        .starts_with("x1,x2,f\n"));
    assert!(json(&ex)["B_closed_form"].as_f64().unwrap() < 0.0);

    let p = write(&dir, "p.json", P);
    let probe = pnd(&["probe", "--poly", s(&p), "--starts", "50"]);
    assert_eq!(code(&probe), 0);
    assert!(json(&probe)["residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    assert_eq!(code(&pnd(&["validate", "--input", s(&bad)])), 1);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&pnd(&["validate", "--input", s(&missing)])), 1);
    assert_eq!(code(&pnd(&["example4", "--a11", "1.5"])), 1);
    let q = write(&dir, "q.json", QUARTIC);
    assert_eq!(
        code(&pnd(&["decompose", "--input", s(&q), "--theta", "1.5"])),
        1
    );
}

#[test]
fn invalid_densities_exit_two() {
    let dir = TempDir::new().unwrap();
    let neg = write(&dir, "neg.json", NEGATIVE);
    let o = pnd(&["validate", "--input", s(&neg)]);
    assert_eq!(code(&o), 2);
    assert!(json(&o).get("witness").is_some());
    let ind = write(&dir, "ind.json", INDEFINITE);
    assert_eq!(code(&pnd(&["validate", "--input", s(&ind)])), 2);
}

#[test]
fn real_zero_exits_three() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let o = pnd(&["diagnose", "--input", s(&sq)]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["verdict"], "HasRealZero");
    assert_eq!(code(&pnd(&["decompose", "--input", s(&sq)])), 3);
}

#[test]
fn failed_condition_exits_four() {
    let dir = TempDir::new().unwrap();
    let ex = write(&dir, "ex4.json", EX4);
    let o = pnd(&["diagnose", "--input", s(&ex)]);
    assert_eq!(code(&o), 4);
    assert_eq!(json(&o)["verdict"], "FailsCondition337");
    assert_eq!(code(&pnd(&["decompose", "--input", s(&ex)])), 4);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", QUARTIC);
    let p = write(&dir, "p.json", P);
    let runs: [&[&str]; 3] = [
        &["decompose", "--input", s(&q), "--seed", "3"],
        &["probe", "--poly", s(&p), "--starts", "30", "--seed", "3"],
        &["diagnose", "--input", s(&q)],
    ];
    for args in runs {
        let a = pnd(args);
        let b = pnd(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

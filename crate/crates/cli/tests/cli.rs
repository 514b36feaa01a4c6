use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thinfd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinfd")).args(args).output().expect("spawn thinfd")
}

fn json(args: &[&str]) -> Value {
    let out = thinfd(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    thinfd(args).status.code().expect("exit code")
}

fn close(v: &Value, x: f64, tol: f64) -> bool {
    v.as_f64().is_some_and(|y| (y - x).abs() <= tol)
}

#[test]
fn decompose_examples() {
    let v = json(&["decompose", "1 0 0 1"]);
    assert_eq!((v["theta"].as_f64(), v["a"].as_f64(), v["t"].as_f64()), (Some(0.0), Some(1.0), Some(0.0)));

    let v = json(&["decompose", "3", "2", "4", "3", "--mode", "kna"]);
    assert!(close(&v["theta"], 4f64.atan2(3.0), 1e-15));
    assert!(close(&v["a"], 5.0, 1e-14));
    assert!(close(&v["T"], 18.0, 1e-13));

    assert_eq!(code(&["decompose", "1 0 0 2"]), 2);
    assert_eq!(code(&["decompose", "1 0 0"]), 2);
    assert_eq!(code(&["decompose", "1 x 0 1"]), 2);
}

#[test]
fn reduce_examples() {
    let v = json(&["reduce", "1 0 0 1", "--epsilon", "pi/12"]);
    assert_eq!(v["gamma"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(v["region"], "ThinF1");

    let v = json(&["reduce", "1", "5", "0", "1"]);
    assert_eq!(v["gamma"], serde_json::json!([[1, -5], [0, 1]]));

    let v = json(&["reduce", "0", "-1", "1", "0"]);
    assert_eq!(v["gamma"], serde_json::json!([[0, 1], [-1, 0]]));
    assert!(v["residual"].as_f64().unwrap() < 1e-9);

    let v = json(&["reduce", "--classical", "3 0 0 0.3333333333333333"]);
    assert_eq!(v["fundamental_set"], "classical");
    assert!(close(&v["coords"]["a"], 1.0 / 3.0, 1e-15));

    assert_eq!(code(&["reduce", "2 0 0 2"]), 2);
    assert_eq!(code(&["reduce", "1 0 0 1", "--epsilon", "0.7"]), 2);
}

#[test]
fn membership_examples() {
    let eps6 = ["--epsilon", "pi/6", "--allow-eps-max"];
    let v = json(&[&["membership", "0", "1", "0.4"][..], &eps6].concat());
    assert_eq!((v["region"].as_str(), v["membership"]["kind"].as_str()), (Some("ThinF1"), Some("Interior")));

    let v = json(&[&["membership", "0", "2", "0.01"][..], &eps6].concat());
    assert_eq!((v["region"].as_str(), v["membership"]["kind"].as_str()), (Some("ThinF4"), Some("Interior")));

    let v = json(&[&["membership", "0.6", "1", "0"][..], &eps6].concat());
    assert_eq!(v["membership"]["kind"], "Outside");
    assert!(v["region"].is_null());

    let v = json(&["membership", "0", "2", "0.04", "--mode", "kna", "--epsilon", "pi/6", "--allow-eps-max"]);
    assert_eq!(v["region"], "ThinF4");

    let v = json(&["membership", "--classical", "0.3", "1.0745699318235422", "0.5"]);
    assert_eq!(v["membership"]["kind"], "Boundary");

    // π/6 needs the explicit opt-in.
    assert_eq!(code(&["membership", "0", "1", "0.4", "--epsilon", "pi/6"]), 2);
    assert_eq!(code(&["membership", "0", "-1", "0.4"]), 2);
}

#[test]
fn t_set_example() {
    let v = json(&["t-set", "2", "0", "--epsilon", "pi/6", "--allow-eps-max"]);
    let r = 15f64.sqrt() / 4.0;
    let iv = v["intervals"].as_array().unwrap();
    assert_eq!(iv.len(), 2);
    assert!(close(&iv[0][1], 1.0 - r, 1e-15) && close(&iv[1][0], r, 1e-15));
    assert!(v.get("canonical").is_none());
}

#[test]
fn t_set_rejects_inadmissible_t() {
    assert_eq!(code(&["t-set", "2", "0", "--epsilon", "pi/6", "--allow-eps-max", "--t", "0.5"]), 2);
    let v = json(&["t-set", "2", "0", "--epsilon", "pi/6", "--allow-eps-max", "--t", "0.99"]);
    assert_eq!(v["canonical"]["shift"], -1);
    assert_eq!(v["canonical"]["region"], "ThinF4");
}

#[test]
fn boundary_golden_csv() {
    let out = thinfd(&["boundary", "--epsilon", "pi/12", "--theta", "0", "--n", "64", "--format", "csv"]);
    assert!(out.status.success());
    let golden =
        std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/boundary_pi12_theta0_n64.csv")).unwrap();
    assert_eq!(out.stdout, golden);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().next(), Some("region,a,t_lo,t_hi"));
}

#[test]
fn boundary_rows_share_endpoints() {
    let v = json(&["boundary", "--epsilon", "pi/12", "--theta", "0.1", "--n", "16"]);
    let rows = v.as_array().unwrap();
    let last_f1 = rows.iter().rfind(|r| r["region"] == "ThinF1").unwrap();
    let first_f2 = rows.iter().find(|r| r["region"] == "ThinF2").unwrap();
    assert!((last_f1["a"].as_f64().unwrap() - first_f2["a"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn boundary_svg_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.svg");
    let p = path.to_str().unwrap();
    assert_eq!(code(&["boundary", "--format", "svg", "--out", p, "--theta=-pi/24"]), 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<path id=").count(), 4);
    assert!(svg.contains("cusp"));

    let bad = dir.path().join("missing/dir/f.csv");
    assert_eq!(code(&["boundary", "--format", "csv", "--out", bad.to_str().unwrap()]), 4);
    assert_eq!(code(&["boundary", "--theta", "0.5"]), 2);
    assert_eq!(code(&["boundary", "--n", "1"]), 2);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["verify", "l2", "--samples", "20000", "--seed", "7"];
    let (a, b) = (thinfd(&args), thinfd(&args));
    assert_eq!(a.stdout, b.stdout);
    let one = Command::new(env!("CARGO_BIN_EXE_thinfd")).args(args).env("THINFD_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, one.stdout);
    assert_eq!(code(&["verify", "l2", "--samples", "10"]), 2);
}

#[test]
fn verify_stabilizer_suite() {
    let v = json(&["verify", "stabilizer", "--points", "100"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["stabilizer"]["thin_singletons"], 100);
    assert_eq!(v["stabilizer"]["hexagonal_pairs"], 6);
}

#[test]
fn verify_l2_suite() {
    let v = json(&["verify", "l2", "--seed", "42", "--samples", "1000000"]);
    assert_eq!(v["pass"], true);
    for case in v["l2"]["cases"].as_array().unwrap() {
        let r = &case["report"];
        let (l, r_, ls, rs) = (
            r["lhs_estimate"].as_f64().unwrap(),
            r["rhs_estimate"].as_f64().unwrap(),
            r["lhs_stderr"].as_f64().unwrap(),
            r["rhs_stderr"].as_f64().unwrap(),
        );
        assert!(l >= r_ - 3.0 * ls.hypot(rs));
    }
}

#[test]
fn verify_oracle_suite() {
    let v = json(&["verify", "oracle", "--lattices", "500"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["oracle"]["grid"]["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn pretty_and_bench() {
    let out = thinfd(&["reduce", "1 5 0 1", "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("region") && l.ends_with("ThinF1")));

    let v = json(&["bench", "--samples", "2000", "--seed", "3"]);
    let w = json(&["bench", "--samples", "2000", "--seed", "3"]);
    assert_eq!(v["checksum"], w["checksum"]);
    assert_eq!(v["timings"].as_array().unwrap().len(), 3);
    assert_eq!(code(&["bench", "--format", "csv"]), 2);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_thinfd"))
        .args(["decompose", "1 0 0 1"])
        .env("THINFD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

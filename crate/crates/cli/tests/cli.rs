use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geocycle")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn class_list_of_minus_20() {
    let o = run(&["forms", "classes", "-d=-20"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "[[1,0,5],[2,2,3]]\n");
    let o = run(&["forms", "classes", "-d=-20", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "a,b,c\n1,0,5\n2,2,3\n");
}

#[test]
fn geodesic_of_golden_form() {
    let o = run(&["geodesic", "info", "-A=1,1,-1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["eps"], serde_json::json!({"x": "3/2", "y": "1/2", "D": 5}));
    assert_eq!(v["automorph"], serde_json::json!([[1, 1], [1, 2]]));
    let w: f64 = v["w"].as_str().unwrap().parse().unwrap();
    let wp: f64 = v["w_prime"].as_str().unwrap().parse().unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((w + phi).abs() < 1e-15 && (wp - (phi - 1.0)).abs() < 1e-15);
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(code(&run(&["verify", "thm32", "-d", "4"])), 3);
    assert_eq!(code(&run(&["verify", "rationality", "-k", "4", "-d", "5"])), 3);
    assert_eq!(code(&run(&["verify", "rationality", "-k", "5", "-d", "5", "-g", "theta*E4*E6/Delta"])), 3);
    assert_eq!(code(&run(&["forms", "classes", "-d", "7"])), 3);
    assert_eq!(code(&run(&["geodesic", "info", "-A=-1,1,1"])), 3);
    assert_eq!(code(&run(&["nonsense"])), 3);
    assert_eq!(code(&run(&["eval", "f", "-k", "2", "-d=-4", "-z", "i"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn exit_code_for_insufficient_order() {
    let o = run(&["series", "mock", "-A", "1,1,-1", "--order", "2"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn empty_tau_list_is_success() {
    let o = run(&["verify", "thm32", "-d", "5", "--tau="]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["cells"], serde_json::json!([]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["prec"], 256);
}

#[test]
fn splitting_identity_at_d12_is_deterministic() {
    let args = ["verify", "thm32", "-d", "12", "--tau", "i", "--order", "30"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let dev: f64 = v["max_deviation"].as_str().unwrap().parse().unwrap();
    assert!(dev < 1e-20);
    // the identity is nontrivial here
    let lhs: f64 = v["cells"][0]["components"][0]["lhs"][0].as_str().unwrap().parse().unwrap();
    assert!(lhs.abs() > 1.0);
}

fn files(dir: &Path) -> usize {
    std::fs::read_dir(dir).map(|d| d.count()).unwrap_or(0)
}

#[test]
fn rationality_cold_and_warm_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "verify", "rationality", "-k", "3", "-d", "12", "-g", "theta*E4*E6/Delta"];
    let cold = run(&args);
    assert_eq!(code(&cold), 0, "{}", String::from_utf8_lossy(&cold.stderr));
    let n = files(dir.path());
    assert!(n >= 2, "mock parts and theta series are cached");
    let warm = run(&args);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(files(dir.path()), n);
    let v = json(&cold);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["recognized"], "36/1");
    assert_eq!(rows[0]["closed_form"], "36/1");
    assert_eq!(rows[0]["prefactor"], "-48/1");

    // an irrational multiple is refused by the reconstruction
    let irr = run(&["--cache-dir", cache, "verify", "rationality", "-k", "3", "-d", "12", "-g", "sqrt(2)*theta*E4*E6/Delta"]);
    assert_eq!(code(&irr), 2);
    let v = json(&irr);
    assert_eq!(v["rows"][0]["status"], "no rational found");
    assert_eq!(v["rows"][0]["agree"], true);
}

#[test]
fn series_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "series", "hecke", "-A=1,1,-1", "--order=10"];
    let plain = run(&["series", "hecke", "-A=1,1,-1", "--order=10"]);
    let cold = run(&args);
    let warm = run(&args);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(files(dir.path()), 1);
    let v = json(&cold);
    assert_eq!(v["weight"], "1/1");
    assert_eq!(v["order"], "10/1");
}

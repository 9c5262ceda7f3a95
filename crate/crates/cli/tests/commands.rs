use std::f64::consts::TAU;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_celestial")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().expect("numbers are strings").parse().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn spectrum_rows_and_torus() {
    let o = run(&["spectrum", "--c", "2.0", "--cutoff", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().next().unwrap(), "c,family,k,l,N,action,cz_index,window_lo,window_hi");
    let rows = csv_rows(&text);
    let torus = rows.iter().find(|r| r[1] == "torus").expect("a torus row");
    assert_eq!((torus[2].as_str(), torus[3].as_str()), ("5", "1"));
    assert!((torus[5].parse::<f64>().unwrap() - 14.99184732).abs() < 1e-8);
    let actions: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(actions.windows(2).all(|w| w[0] <= w[1]));

    let o = run(&["spectrum", "--c", "2.0", "--cutoff", "4"]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 2);
}

#[test]
fn spectrum_rejects_subcritical_energy() {
    let o = run(&["spectrum", "--c", "1.4", "--cutoff", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1.5"));
}

#[test]
fn bounds_at_critical_energy() {
    let o = run(&["bounds", "--c", "2.163374"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    let expect = [("retrograde", 0.43029, 0.49053, "1"), ("direct", 0.53713, 0.79370, "3")];
    for (r, (fam, lo, hi, cz)) in rows.iter().zip(expect) {
        assert_eq!(r[1], fam);
        assert!((r[3].parse::<f64>().unwrap() / TAU - lo).abs() < 5e-5);
        assert!((r[4].parse::<f64>().unwrap() / TAU - hi).abs() < 5e-6);
        assert_eq!(r[5], cz);
    }
    assert_eq!(run(&["bounds", "--c", "2.0"]).status.code(), Some(2));
}

#[test]
fn bounds_sweep_is_ordered_by_grid() {
    let o = run(&["bounds", "--sweep", "2.17:2.45:0.01", "--digits", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let cs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(cs.windows(2).all(|w| w[0] <= w[1]));
    assert!((cs[0] - 2.17).abs() < 1e-12 && (cs[cs.len() - 1] - 2.45).abs() < 1e-9);
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() <= r[4].parse::<f64>().unwrap());
    }
    // P = 5 from c_H^5 = 2.431 on
    assert!(rows.iter().any(|r| r[6] == "5" && r[2] == "5"));

    let below = csv_rows(&stdout(&run(&["bounds", "--c", "2.165"])));
    assert!(below.iter().all(|r| r[2] == "1"));
    assert_eq!(run(&["bounds", "--sweep", "2.3:2.2:0.01"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--inner", "hill:2.1634", "--outer", "rkp:1.5874"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["holds"], Value::Bool(true));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["inner", "outer", "holds", "worst_margin", "worst_at", "kappa_min", "kappa_max", "samples", "ring_trend", "disagreements"]
    );

    assert_eq!(run(&["verify", "--inner", "rkp:2.3033", "--outer", "hill:2.2"]).status.code(), Some(0));
    let o = run(&["verify", "--inner", "rkp:1.6", "--outer", "rkp:1.7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(num(&json(&o)["worst_margin"]) < 0.0);
    assert_eq!(run(&["verify", "--inner", "rkp", "--outer", "rkp:1.7"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--inner", "moon:2", "--outer", "rkp:1.7"]).status.code(), Some(2));
}

#[test]
fn hill_orbit_sits_in_its_interval() {
    let o = run(&["orbit", "--problem", "hill", "--family", "retrograde", "--c", "2.2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["inside"], Value::Bool(true));
    assert!((num(&v["initial"]["q1"]) - 0.1899001965).abs() < 1e-8);
    let (lo, hi, a) = (num(&v["interval"]["lo"]), num(&v["interval"]["hi"]), num(&v["action"]));
    assert!(lo <= a && a <= hi);
    assert_eq!(run(&["orbit", "--problem", "hill", "--family", "sideways", "--c", "2.2"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "--problem", "hill", "--family", "r", "--c", "2.0"]).status.code(), Some(2));
}

#[test]
fn rkp_orbit_has_no_interval() {
    let v = json(&run(&["orbit", "--problem", "rkp", "--family", "d", "--c", "2"]));
    assert!(v["interval"].is_null());
    assert!((num(&v["action"]) - 3.7508623461).abs() < 1e-8);
}

#[test]
fn systolic_methods_agree() {
    let o = run(&["systolic", "--c", "2.0", "--method", "all", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let res = v["results"].as_array().unwrap();
    assert_eq!(res.len(), 3);
    let quad = num(&res[0]["value"]);
    let closed = num(&res[1]["value"]);
    let mc = num(&res[2]["value"]);
    assert!((quad - closed).abs() < 1e-6 * closed);
    assert!((mc - closed).abs() < 3.0 * num(&res[2]["error_estimate"]));
    assert_eq!(res[2]["seed"], Value::String("42".into()));
    assert!((num(&v["systolic_ratio"]) - 2.5401514).abs() < 1e-6);
    assert_eq!(run(&["systolic", "--c", "1.5"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_and_thread_independent() {
    let args = ["systolic", "--c", "3.0", "--method", "mc", "--seed", "9", "--samples", "50000"];
    let one = Command::new(env!("CARGO_BIN_EXE_celestial")).args(args).env("CELESTIAL_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_celestial")).args(args).env("CELESTIAL_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_celestial")).args(args).env("CELESTIAL_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn digits_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let o = run(&["spectrum", "--c", "2", "--cutoff", "4", "--digits", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv_rows(&text)[0][5], "2.838");
    assert_eq!(run(&["spectrum", "--c", "2", "--cutoff", "4", "--digits", "40"]).status.code(), Some(2));
}

//! The `ggp` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

use ggp::json::{int_value, BigNumDto, JobSpec};
use ggp::{run_job, RunConfig};
use num_bigint::BigInt;
use serde_json::Value;

fn job(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs").join(name)
}

fn ggp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggp")).args(args).output().expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn disjoint_unitary_pair_is_one() {
    let p = job("pair_u2_u1_disjoint.json");
    let o = ggp(&["pair", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["value"], 1);
    assert_eq!(r["routes_agree"], true);
    assert_eq!(r["routes"].as_object().unwrap().len(), 3);
}

#[test]
fn minus_one_is_rejected_with_its_orbit() {
    let p = job("pair_so_minus_one.json");
    let o = ggp(&["pair", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[-1]"));
}

#[test]
fn injected_disagreement_exits_two() {
    let p = job("pair_u2_u1_disjoint.json");
    let o = ggp(&["pair", "--input", p.to_str().unwrap(), "--inject-fault", "factorized"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&o)["routes_agree"], false);
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let p = job("pair_u2_u1_disjoint.json");
    let a = ggp(&["pair", "--input", p.to_str().unwrap(), "--jobs", "1"]);
    let b = ggp(&["pair", "--input", p.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(without_timings(report(&a)), without_timings(report(&b)));
    let text = std::fs::read_to_string(&p).unwrap();
    let j = JobSpec::parse(&text).unwrap();
    let x = run_job(&j, &RunConfig::default()).unwrap();
    let y = run_job(&j, &RunConfig::default()).unwrap();
    assert_eq!(
        serde_json::to_string(&x.stable_report()).unwrap(),
        serde_json::to_string(&y.stable_report()).unwrap()
    );
}

#[test]
fn route_selection() {
    let p = job("pair_u2_u1_disjoint.json");
    let o = ggp(&["pair", "--input", p.to_str().unwrap(), "--routes", "direct,closed"]);
    let r = report(&o);
    let routes = r["routes"].as_object().unwrap();
    assert_eq!(routes.len(), 2);
    assert!(r.get("factorization").is_none());
    let o = ggp(&["pair", "--input", p.to_str().unwrap(), "--routes", "sideways"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn factorize_reports_the_sign_ledger() {
    let p = job("pair_u2_u1_disjoint.json");
    let r = report(&ggp(&["factorize", "--input", p.to_str().unwrap()]));
    assert_eq!(r["value"], 1);
    assert_eq!(r["factorization"]["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn multiplicities() {
    let r = report(&ggp(&["multiplicity", "--input", job("multiplicity_u1_u0.json").to_str().unwrap()]));
    assert_eq!(r["value"], 1);
    let o = ggp(&["multiplicity", "--input", job("multiplicity_u3_u2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["lhs_equals_rhs"], true);
    assert_eq!(r["nonnegative"], true);
    let r = report(&ggp(&["multiplicity", "--input", job("multiplicity_corank3.json").to_str().unwrap()]));
    assert_eq!(r["reduction"]["corank"], 3);
    assert_eq!(r["reduction"]["sigma_plus"]["group"]["n"], 4);
    assert_eq!(r["lhs_equals_rhs"], true);
}

#[test]
fn oracle_bounds() {
    let o = ggp(&["oracle", "--oracle-bound", "9"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ggp(&["oracle", "--oracle-bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["all_pass"], true);
    assert!(r["families"].as_array().unwrap().len() >= 6);
}

#[test]
fn malformed_input_exits_one() {
    let dir = std::env::temp_dir().join(format!("ggp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"command\": \"pair\", \"q\": 4}").unwrap();
    let o = ggp(&["pair", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&bad, "{\"command\": \"pair\", \"q\": 3, \"unexpected\": 1}").unwrap();
    let o = ggp(&["pair", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&bad, "not json").unwrap();
    let o = ggp(&["pair", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn large_integers_travel_as_strings() {
    let big = BigInt::from(1u64 << 60);
    assert_eq!(int_value(&big), Value::String("1152921504606846976".into()));
    assert_eq!(int_value(&BigInt::from(-7)), Value::from(-7));
    let d: BigNumDto = serde_json::from_str("\"1152921504606846976\"").unwrap();
    assert_eq!(d.to_biguint().unwrap(), num_bigint::BigUint::from(1u64 << 60));
    let d: BigNumDto = serde_json::from_str("12").unwrap();
    assert_eq!(d, BigNumDto::Num(12));
    // A string exponent in a job file.
    let text = std::fs::read_to_string(job("pair_u2_u1_disjoint.json")).unwrap().replace("\"exponent\": 1", "\"exponent\": \"9\"");
    let j = JobSpec::parse(&text).unwrap();
    let out = run_job(&j, &RunConfig::default()).unwrap();
    assert_eq!(out.report["value"], 1);
}

use std::process::Command;

use nilform::knot_pipeline::ReportSummary;

fn nilform(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilform")).args(args).env_remove("NILFORM_TABLE").output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn unknot_succeeds() {
    let (code, out, _) = nilform(&["knot", "--pd", "[]", "--json"]);
    assert_eq!(code, 0);
    let s: ReportSummary = serde_json::from_str(&out).unwrap();
    assert_eq!(s.hk_dimension, 0);
    assert!(s.divisors.is_empty());
}

#[test]
fn knot_json_round_trip() {
    let (code, out, _) = nilform(&["knot", "--name", "5_2", "--json"]);
    assert_eq!(code, 0);
    let s: ReportSummary = serde_json::from_str(&out).unwrap();
    assert_eq!(s.name.as_deref(), Some("5_2"));
    assert_eq!(s.divisors, vec!["2*t^2 - 3*t + 2".to_string()]);
    assert_eq!(s.center_rank, 1);
    assert!(s.isometry_ok && s.homogeneous_ok && s.quadratic_ok);
    let again = serde_json::to_value(&s).unwrap();
    assert_eq!(again, serde_json::from_str::<serde_json::Value>(&out).unwrap());
}

#[test]
fn lift_seed_does_not_change_the_form() {
    let (_, a, _) = nilform(&["knot", "--name", "6_2", "--json"]);
    let (_, b, _) = nilform(&["knot", "--name", "6_2", "--json", "--lift-seed", "12"]);
    let (a, b): (ReportSummary, ReportSummary) = (serde_json::from_str(&a).unwrap(), serde_json::from_str(&b).unwrap());
    assert_eq!(a.grams, b.grams);
}

#[test]
fn pretzel_and_inline_pd() {
    let (code, out, _) = nilform(&["knot", "--pretzel", "3,3,-3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("P(3,3,-3)"));
    let (code, out, _) = nilform(&["knot", "--pd", "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)"]);
    assert_eq!(code, 0);
    assert!(out.contains("t^2 - t + 1"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(nilform(&["knot", "--name", "nope"]).0, 2);
    assert_eq!(nilform(&["knot", "--pd", "X(1,2,3)"]).0, 2);
    assert_eq!(nilform(&["center", "--poly", "1 + * t"]).0, 2);
    assert_eq!(nilform(&["frobnicate"]).0, 2);
    let (code, out, _) = nilform(&["center", "--poly", "t"]);
    assert_eq!(code, 2);
    assert!(out.contains("not reciprocal"));
}

#[test]
fn computation_errors_exit_1() {
    // two-component link
    let (code, _, err) = nilform(&["knot", "--pd", "X(1,3,2,4);X(3,1,4,2)"]);
    assert!(code == 1 || code == 2, "{err}");
    // Δ(1) = 0 for the identity mapping class
    let (code, _, err) = nilform(&["mcg", "--genus", "2", "--twists", "1 -1"]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("degenerate module"));
}

#[test]
fn center_json_has_sorted_keys() {
    let (code, out, _) = nilform(&["center", "--poly", "t^2 + 3*t + 1", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rank"], 1);
    assert_eq!(v["basis_kind"], "C");
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn mcg_summary() {
    let (code, out, _) = nilform(&["mcg", "--twists", "2 3 -4 -5 1", "--json"]);
    assert_eq!(code, 0);
    let s: ReportSummary = serde_json::from_str(&out).unwrap();
    assert_eq!(s.char_poly.as_deref(), Some("t^4 - 2*t^3 + 3*t^2 - 2*t + 1"));
    assert_eq!(s.zeta_fixed, Some(true));
    assert_eq!(s.hf_dimension, Some(4));
}

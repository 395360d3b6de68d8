use std::path::Path;

use entrolab::run::{run_document, run_path, Options, Outcome};
use entrolab::selftest::{select, SUITES};
use serde_json::{json, Value};

fn run(doc: Value) -> (Value, Outcome) {
    let out = run_document(&doc, &Options::default());
    (out.json, out.outcome)
}

fn left_shift_z2() -> Value {
    json!({
        "task": "entstar",
        "group": {"kind": "window", "base": ["2"], "index_set": "naturals", "flavor": "direct_sum"},
        "endomorphism": {"kind": "shift", "shift": "left"},
        "topology": {"kind": "product"},
    })
}

#[test]
fn documented_examples() {
    let (v, o) = run(left_shift_z2());
    assert_eq!(o, Outcome::Ok);
    assert_eq!((&v["kind"], &v["alpha"]), (&json!("exact"), &json!("2")));

    let (v, o) = run(json!({
        "task": "hstar",
        "group": {"kind": "finite", "moduli": ["6"]},
        "endomorphism": {"kind": "identity"},
        "subgroup": {"generators": [["3"]]},
    }));
    assert_eq!(o, Outcome::Ok);
    assert_eq!(v["alpha"], json!("1"));

    let (v, o) = run(json!({"task": "bernoulli-cert", "certificate": {"p": "2", "m": "3", "n_max": "4"}}));
    assert_eq!(o, Outcome::Ok);
    assert_eq!((&v["verdict"], &v["alpha_lower"]), (&json!("verified"), &json!("8")));
    assert_eq!(v["certificate"]["levels"].as_array().map(Vec::len), Some(4));
}

#[test]
fn exit_codes() {
    assert_eq!(Outcome::Ok.exit_code(), 0);
    assert_eq!(Outcome::Mismatch.exit_code(), 1);
    assert_eq!(Outcome::Input.exit_code(), 2);
    assert_eq!(Outcome::Budget.exit_code(), 3);

    let (v, o) = run(json!({"task": "hstar", "group": {"kind": "finite", "moduli": [4]}}));
    assert_eq!(o, Outcome::Input);
    assert_eq!(v["error"]["class"], json!("input"));
    assert_eq!(run(json!({"task": "entstar", "group": {"kind": "lattice", "rank": "1"}})).1, Outcome::Input);
    assert_eq!(run(json!({"task": "htop", "group": {"kind": "finite", "moduli": ["2"]}, "endomorphism": {"kind": "identity"}, "topology": {"kind": "profinite"}})).1, Outcome::Input);

    // one cotrajectory step cannot confirm stabilization; the bound is still emitted
    let mut short = left_shift_z2();
    short["budget"] = json!({"max_steps": "1", "confirm_window": "1"});
    let (v, o) = run(short);
    assert_eq!(o, Outcome::Budget);
    assert_eq!(v["kind"], json!("at_least"));
    assert!(v["members"].as_array().is_some_and(|m| !m.is_empty()));

    let mut wrong = left_shift_z2();
    wrong["expect"] = json!({"alpha": "3"});
    let (v, o) = run(wrong);
    assert_eq!(o, Outcome::Mismatch);
    assert_eq!(v["expectation"], json!({"met": false, "failed": ["alpha"]}));
}

#[test]
fn batches_report_the_worst_member() {
    let bad = json!({"task": "hstar"});
    let (v, o) = run(json!({"problems": [left_shift_z2(), bad, left_shift_z2()]}));
    assert_eq!(o, Outcome::Input);
    assert_eq!(v["results"].as_array().map(Vec::len), Some(3));
    assert_eq!(v["results"][2]["alpha"], json!("2"));
}

#[test]
fn output_is_deterministic() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    let a = run_path(&dir, &Options { trace: true, jobs: 1 });
    let b = run_path(&dir, &Options { trace: true, jobs: 4 });
    assert_eq!(a.outcome, Outcome::Ok);
    assert_eq!(serde_json::to_string_pretty(&a.json).unwrap(), serde_json::to_string_pretty(&b.json).unwrap());
}

#[test]
fn suite_filters() {
    assert_eq!(select(None).len(), SUITES.len());
    assert_eq!(select(Some("duality")).len(), 5);
    assert_eq!(select(Some("duality/sums")).len(), 1);
    assert!(select(Some("dual")).is_empty());
    assert!(select(Some("nothing")).is_empty());
}

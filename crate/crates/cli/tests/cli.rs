use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_conjugacy"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stdout)
}

#[test]
fn klein_conj_parity_rule() {
    let (code, v, raw) = run(&["klein", "conj", "a^2 b^3 t", "a^2 b^5 t"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"verdict": "conjugate", "witness": "b"}));
    assert_eq!(raw.trim(), r#"{"verdict":"conjugate","witness":"b"}"#);
    let (_, v, _) = run(&["klein", "conj", "a^2 b^3 t", "a^2 b^4 t"]);
    assert_eq!(v["verdict"], "not_conjugate");
    assert!(v.get("witness").is_none());
}

#[test]
fn klein_arithmetic() {
    let (_, v, _) = run(&["klein", "mul", "a b^2 t", "a^3 b^4 t"]);
    assert_eq!(v, json!({"nf": "a^5 b^-2", "m": 5, "n": -2, "e": 0}));
    let (_, v, _) = run(&["klein", "nf", "t t b t^-1"]);
    assert_eq!(v["nf"], "b t");
    let (_, v, _) = run(&["klein", "inv", "b t"]);
    assert_eq!(v["nf"], "a^-1 b t");
    let (_, v, _) = run(&["klein", "zk", "a^3 b^2 t"]);
    assert_eq!(v, json!({"centralizer": "cyclic", "generators": ["b^2 t"]}));
    let (_, v, _) = run(&["klein", "zk", "a^3"]);
    assert_eq!(v["centralizer"], "whole_group");
}

#[test]
fn conj_reports_coset_mismatch() {
    let (code, _, raw) = run(&["conj", &fixture("free_xy.json"), "x", "y"]);
    assert_eq!(code, 0);
    assert_eq!(
        raw.trim(),
        r#"{"verdict":"not_conjugate","trace":[{"case":"coset-check"}]}"#
    );
}

#[test]
fn conj_through_the_pipeline() {
    let (code, v, _) = run(&["conj", &fixture("free_xy.json"), "y x", "x y"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "conjugate");
    assert_eq!(
        v["trace"].as_array().unwrap().last().unwrap()["case"],
        "cyclic-centralizer"
    );

    let (_, v, _) = run(&["conj", &fixture("klein.json"), "t", "b^2 t"]);
    assert_eq!(v["witness"], "b");
    let (_, v, _) = run(&["conj", &fixture("dinf.json"), "s t s", "t"]);
    assert_eq!(v["verdict"], "conjugate");
    let (_, v, _) = run(&["conj", &fixture("dinf.json"), "s", "t"]);
    assert_eq!(v["verdict"], "not_conjugate");
}

#[test]
fn small_budgets_exhaust() {
    let (code, v, _) = run(&["conj", &fixture("s3.json"), "s", "s t", "--budget", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "exhausted");
    let (code, v, _) = run(&["conj", &fixture("s3.json"), "s", "s t"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "conjugate");
}

#[test]
fn word_problem_and_centralizers() {
    let (_, v, _) = run(&["wp", &fixture("s3.json"), "s t s t"]);
    assert_eq!(v["verdict"], "identity");
    let (_, v, _) = run(&["wp", &fixture("klein.json"), "t b t^-1 b"]);
    assert_eq!(v["verdict"], "identity");
    let (_, v, _) = run(&["centralizer", &fixture("free_xy.json"), "x y x y"]);
    assert_eq!(v, json!({"verdict": "cyclic", "generators": ["x y"]}));
    let (_, v, _) = run(&["centralizer", &fixture("klein.json"), "b"]);
    assert_eq!(v["verdict"], "rank_two_abelian");
}

#[test]
fn extension_and_eigenbasis() {
    for (eps, p, class) in [
        ("1", "4", "ZxZ2"),
        ("1", "-3", "InfiniteCyclic"),
        ("-1", "0", "Z2freeZ2"),
        ("-1", "2", "Inconsistent"),
    ] {
        let (code, v, _) = run(&["classify-l1", eps, p]);
        assert_eq!(code, 0);
        assert_eq!(v["class"], class);
    }
    let (_, v, _) = run(&["eigenbasis", "1", "0", "0", "-1"]);
    assert_eq!(v, json!({"a": [1, 0], "b": [0, 1], "lattice_index": 1}));
    let (_, v, _) = run(&["eigenbasis", "0", "1", "1", "0"]);
    assert_eq!(v["lattice_index"], 2);
    let (code, v, _) = run(&["eigenbasis", "1", "1", "0", "1"]);
    assert_eq!(code, 1);
    assert!(v["error"].is_string());
}

#[test]
fn orientability_of_fixtures() {
    let (code, _, raw) = run(&["orient", &fixture("ball.json")]);
    assert_eq!(code, 0);
    assert_eq!(raw.trim(), r#"{"orientable":true}"#);
    let (_, v, _) = run(&["orient", &fixture("solid_klein.json")]);
    assert_eq!(v["orientable"], false);
    let (_, v, _) = run(&["pi1", &fixture("solid_klein.json")]);
    assert_eq!(v["generators"].as_array().unwrap().len(), 1);
    assert_eq!(
        v["character"].as_object().unwrap().values().next().unwrap(),
        -1
    );
    let (_, v, _) = run(&["boundary", &fixture("solid_klein.json")]);
    assert_eq!(v["components"][0]["euler"], 0);
    assert_eq!(v["components"][0]["orientable"], false);
}

#[test]
fn constructions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).display().to_string();

    let (code, v, _) = run(&[
        "cover",
        &fixture("solid_klein.json"),
        "--out",
        &path("cover.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["tets"], 6);
    assert_eq!(v["connected"], true);
    let (code, v, _) = run(&["orient", &path("cover.json")]);
    assert_eq!((code, v), (0, json!({"orientable": true})));

    let (_, v, _) = run(&[
        "double",
        &fixture("solid_klein.json"),
        "--out",
        &path("double.json"),
    ]);
    assert_eq!(v["closed"], true);
    let (code, v, _) = run(&["pi1", &path("double.json")]);
    assert_eq!(code, 0);
    assert!(v["relators"].is_array());

    let (_, v, _) = run(&["double", &fixture("ball.json"), "--faces", "0:0,0:1"]);
    assert_eq!(v["closed"], false);
    assert_eq!(v["triangulation"]["tets"], 2);

    let (_, v, _) = run(&["cap", &fixture("ball.json"), "--out", &path("cap.json")]);
    assert_eq!(v["added"], 4);
    let (_, v, _) = run(&["boundary", &path("cap.json")]);
    assert_eq!(v["components"], json!([]));
}

#[test]
fn subgroup_membership() {
    let (_, v, _) = run(&[
        "t2-member",
        &fixture("free_xy.json"),
        "x^2, y",
        "x^2 y x^-2",
    ]);
    assert_eq!(v["member"], true);
    let (_, v, _) = run(&["t2-member", &fixture("free_xy.json"), "x^2, y", "x y x^-1"]);
    assert_eq!(v["member"], false);
}

#[test]
fn bad_input_exits_one_with_json() {
    let (code, v, _) = run(&["wp", "/nonexistent/group.json", "x"]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("nonexistent"));
    let (code, v, _) = run(&["wp", &fixture("free_xy.json"), "z"]);
    assert_eq!(code, 1);
    assert!(v["error"].is_string());
    let (code, v, _) = run(&["no-such-command"]);
    assert_eq!(code, 1);
    assert!(v["error"].is_string());
}

#[test]
fn output_is_deterministic() {
    let args = ["pi1", &fixture("solid_klein.json")];
    let (_, _, a) = run(&args);
    let (_, _, b) = run(&args);
    assert_eq!(a, b);
}

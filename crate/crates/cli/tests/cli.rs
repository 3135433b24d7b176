use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file")
}

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", self.stdout))
    }
}

fn oscalg(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_oscalg"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8"),
    }
}

#[test]
fn classify_hermite_matches_golden() {
    let r = oscalg(&["classify", "--builtin", "hermite"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, golden("classify_hermite.json"));
    let v = r.json();
    assert_eq!(v["classification"]["verdict"], "finite");
    assert_eq!(v["classification"]["dim"], 4);
}

#[test]
fn closed_form_hermite_classifies_the_same() {
    let a = oscalg(&["classify", "--builtin", "hermite"]).json();
    let b = oscalg(&["classify", "--bsq", "(n+1)/2"]).json();
    assert_eq!(a["classification"], b["classification"]);
    assert_ne!(a["input_digest"], b["input_digest"]);
    let c = oscalg(&["classify", "--spec", fixture("hermite.json").to_str().unwrap()]).json();
    assert_eq!(b["classification"], c["classification"]);
    assert_eq!(b["input_digest"], c["input_digest"]);
}

#[test]
fn short_table_is_window_limited() {
    let v = oscalg(&["classify", "--table", "1/2,1,3/2,2"]).json();
    assert_eq!(v["classification"]["verdict"], "finite");
    assert_eq!(v["classification"]["R"], "1/2*n + 1/2");
    assert_eq!(v["classification"]["window_limited"], true);
}

#[test]
fn legendre_closure_does_not_stabilize() {
    let r = oscalg(&["closure", "--builtin", "legendre", "--max-dim", "16"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["symbolic"]["stabilized"], false);
    assert!(v["symbolic"]["dim"].as_u64().unwrap() > 16);
}

#[test]
fn quadratic_closure_matches_golden() {
    let r = oscalg(&["closure", "--bsq", "n^2+3*n+3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, golden("closure_quadratic.json"));
    let v = r.json();
    assert_eq!(v["symbolic"]["stabilized"], true);
    assert_eq!(v["symbolic"]["dim"], 4);
}

#[test]
fn cubic_closure_engines_agree() {
    let r = oscalg(&["closure", "--bsq", "n^3+1", "--oracle", "--max-depth", "6", "--max-dim", "12"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["symbolic"]["stabilized"], false);
    assert_eq!(v["oracle"]["stabilized"], false);
    assert_eq!(v["agree"], true);
}

#[test]
fn irregular_head_is_flagged() {
    let v = oscalg(&["closure", "--builtin", "gegenbauer", "--alpha", "-1/2", "--max-dim", "12"]).json();
    assert_eq!(v["head_len"], 1);
    assert_eq!(v["symbolic"]["tail_only"], true);
    let v = oscalg(&[
        "closure", "--builtin", "gegenbauer", "--alpha", "-1/2", "--oracle", "--margin", "0", "--max-dim", "12",
    ])
    .json();
    assert_eq!(v["oracle"]["stabilized"], false);
}

#[test]
fn verify_ccr_and_gdeformed() {
    assert_eq!(oscalg(&["verify", "--builtin", "hermite", "--what", "ccr"]).code, 0);
    let r = oscalg(&["verify", "--builtin", "hermite", "--what", "gdeformed", "--G", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, golden("verify_hermite_gdeformed.json"));
    assert_eq!(r.json()["C"], "1/2");
}

#[test]
fn verify_moments_reports_each_n() {
    let r = oscalg(&["verify", "--builtin", "legendre", "--what", "moments", "--nmax", "3"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for rep in reports {
        assert_eq!(rep["rows"].as_array().unwrap().len(), 3);
    }
    assert_eq!(v["matching_readings"], serde_json::json!(["shifted"]));
    // Only the literal reading, which fails from n = 2 on.
    let r = oscalg(&["verify", "--builtin", "legendre", "--what", "moments", "--nmax", "3", "--reading", "literal"]);
    assert_eq!(r.code, 1);
}

#[test]
fn verify_mj_ladder() {
    let r = oscalg(&["verify", "--bsq", "n^3+1", "--what", "mj", "--jmax", "4"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["pass"], true);
}

#[test]
fn family_gram() {
    let v = oscalg(&["family", "--family", "hermite", "--nmax", "12", "--points", "64", "--x", "0,0.5"]).json();
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-9);
    assert_eq!(oscalg(&["family", "--family", "hermite", "--nmax", "40", "--points", "64"]).code, 2);
}

#[test]
fn moments_command() {
    let v = oscalg(&["moments", "--builtin", "hermite", "--nmax", "2"]).json();
    assert_eq!(v["mu_even"][1], "1/2");
    assert_eq!(v["mu_even"][2], "3/4");
}

#[test]
fn multiboson_harmonic_example() {
    let r = oscalg(&["multiboson", "--spec", fixture("ca5.json").to_str().unwrap(), "--closure"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, golden("multiboson_ca5.json"));
    let v = r.json();
    assert_eq!(v["finite"], true);
    assert_eq!(v["harmonic"], true);
    assert_eq!(v["closure"][0]["dim"], 4);
    let builtin = oscalg(&["multiboson", "--example-ah", "1,1,1"]).json();
    assert_eq!(builtin["samples"][0]["table"], v["samples"][0]["table"]);
}

#[test]
fn multiboson_cubic_is_infinite() {
    let v = oscalg(&["multiboson", "--spec", fixture("cubic.json").to_str().unwrap()]).json();
    assert_eq!(v["finite"], false);
    assert_eq!(v["samples"][0]["classification"]["verdict"], "infinite");
}

#[test]
fn input_errors_exit_2() {
    let singular = oscalg(&["multiboson", "--spec", fixture("singular.json").to_str().unwrap()]);
    assert_eq!(singular.code, 2);
    assert!(singular.json()["error"].as_str().unwrap().contains("singular"));
    assert_eq!(oscalg(&["classify", "--spec", fixture("malformed.json").to_str().unwrap()]).code, 2);
    assert_eq!(oscalg(&["classify", "--bsq", "n^2", "--alpha", "1"]).code, 2);
    assert_eq!(oscalg(&["closure", "--table", "1,2,3"]).code, 2);
    assert_eq!(oscalg(&["classify", "--builtin", "gegenbauer", "--alpha", "-1"]).code, 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["closure", "--bsq", "n^3+1", "--oracle", "--max-depth", "4", "--max-dim", "20", "--dump"];
    let a = oscalg(&args);
    let b = oscalg(&args);
    assert_eq!(a.code, b.code);
    assert_eq!(a.stdout, b.stdout);
}

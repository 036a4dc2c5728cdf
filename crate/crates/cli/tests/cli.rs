use std::path::PathBuf;
use std::process::{Command, Output};

use symorb::algebra::{Poly2, RatFunc2, Rational, TruncSeries};
use symorb::operators::OperatorMatrix;

fn symorb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symorb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symorb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn theta_over(c: i64, d: i64) -> RatFunc2 {
    RatFunc2::from_poly(Poly2::linear(1, 1).scale(&Rational::new(c.into(), d.into())))
}

#[test]
fn hurwitz_examples() {
    let o = symorb(&["hurwitz", "--n", "2", "--profiles", "2;2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1/2");
    let o = symorb(&["hurwitz", "--gjv", "--sigma", "1+1", "--k", "2", "--b", "1"]);
    assert_eq!(stdout(&o).trim(), "1/2");
    let o = symorb(&["hurwitz", "--n", "2", "--profiles", "2;2;2", "--backend", "brute"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn backends_agree() {
    for profiles in ["2+1;2+1;3", "3;3;3", "2+1+1;2+2;3+1"] {
        let n = if profiles.starts_with("2+1+1") { "4" } else { "3" };
        let a = symorb(&["hurwitz", "--n", n, "--profiles", profiles, "--backend", "brute"]);
        let b = symorb(&["hurwitz", "--n", n, "--profiles", profiles, "--backend", "fast"]);
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(stdout(&a), stdout(&b), "{profiles}");
    }
}

#[test]
fn budget_exit_code() {
    let o = Command::new(env!("CARGO_BIN_EXE_symorb"))
        .args(["hurwitz", "--n", "5", "--profiles", "2+1+1+1;2+1+1+1", "--backend", "brute"])
        .env("SYMORB_ENUM_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(symorb(&["hurwitz", "--n", "2"]).status.code(), Some(2));
    let o = symorb(&["hurwitz", "--n", "3", "--profiles", "2;2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--profiles"));
    assert_eq!(symorb(&["two-point", "--left", "2(q1)", "--right", "2(E1)", "--n", "2", "--r", "1"]).status.code(), Some(2));
    assert_eq!(symorb(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(symorb(&[]).status.code(), Some(2));
}

#[test]
fn two_point_examples() {
    let o = symorb(&["two-point", "--left", "2(E1)", "--right", "2(E1)", "--n", "2", "--r", "1", "--s-order", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s: TruncSeries = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s.num_terms(), 3);
    for d in 1..=3 {
        assert_eq!(s.coeff(&[0, d]), theta_over(4, d as i64));
    }

    let o = symorb(&[
        "two-point", "--left", "1(E1)+2(E1)", "--right", "1(E1)+2(E1)", "--n", "3", "--r", "1", "--s-order", "2",
    ]);
    let s: TruncSeries = serde_json::from_str(&stdout(&o)).unwrap();
    for d in 1..=2 {
        assert_eq!(s.coeff(&[0, d]), theta_over(-12, d as i64));
    }

    // Only E_11 and E_33 fit in the box; each misses one of the insertions.
    let o = symorb(&["two-point", "--left", "2(E1)", "--right", "2(E3)", "--n", "2", "--r", "3", "--s-order", "1,0,1"]);
    let s: TruncSeries = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(s.is_zero());
}

#[test]
fn op_matrix_formats() {
    let path = scratch("m.json");
    let o = symorb(&[
        "op-matrix", "--n", "2", "--r", "1", "--u-order", "1", "--s-order", "2", "--table", "builtin", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let m = OperatorMatrix::from_json(&text).unwrap();
    assert!(m.gaps.is_empty());
    assert_eq!(m.dim(), 5);
    assert_eq!(OperatorMatrix::from_json(&m.to_json()).unwrap(), m);
    assert_eq!(m.entries[1][1].coeff(&[0, 1]), theta_over(-4, 1));

    let o = symorb(&["op-matrix", "--n", "2", "--r", "1", "--u-order", "0", "--s-order", "1", "--format", "csv"]);
    assert!(stdout(&o).starts_with("row,col,monomial,coefficient"));
    assert!(stderr(&o).contains("degree-zero"));

    let o = symorb(&["op-matrix", "--n", "2", "--r", "1", "--format", "latex", "--closed-form"]);
    let t = stdout(&o);
    assert!(t.contains("\\begin{pmatrix}") && t.contains("4 t_1 t_2") && t.contains("-\\frac{1}{2}"));
}

#[test]
fn op_matrix_default_basis_general_r() {
    let o = symorb(&["op-matrix", "--n", "2", "--r", "2", "--divisor", "D2", "--u-order", "0", "--s-order", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = OperatorMatrix::from_json(&stdout(&o)).unwrap();
    // (1,1) with 3 labels: 6 classes; (2): 3 classes.
    assert_eq!(m.dim(), 9);
}

#[test]
fn verify_runs() {
    let o = symorb(&["verify-a1n2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("25/25 entries match"));
    let o = symorb(&["verify-a1n2", "--u-order", "2", "--s-order", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_catches_corrupted_table() {
    let path = scratch("table.json");
    let o = symorb(&["table-a1n2", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let obj = v.as_object_mut().unwrap();
    let key = obj
        .iter()
        .find(|(_, val)| !val.as_array().unwrap().is_empty())
        .map(|(k, _)| k.clone())
        .unwrap();
    obj.insert(key, serde_json::json!([[0, "12345"]]));
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = symorb(&["verify-a1n2", "--u-order", "1", "--s-order", "1", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("24/25 entries match"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("mismatch: entry")).count(), 1, "{out}");
}

#[test]
fn eigencheck_variants() {
    let o = symorb(&["eigencheck"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("squarefree: distinct eigenvalues"));
    let o = symorb(&["eigencheck", "--s", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pole"));
    let o = symorb(&["eigencheck", "--identity-self-test"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("derogatory"));
}

#[test]
fn config_file_replaces_flags() {
    let path = scratch("job.json");
    std::fs::write(&path, r#"{"command": "hurwitz", "n": 2, "profiles": "2;2", "backend": "brute"}"#).unwrap();
    let o = symorb(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "1/2");

    std::fs::write(&path, r#"{"command": "verify-a1n2", "u_order": 1, "s_order": 2}"#).unwrap();
    let o = symorb(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    std::fs::write(&path, r#"{"n": 2}"#).unwrap();
    assert_eq!(symorb(&["--config", path.to_str().unwrap()]).status.code(), Some(2));
}

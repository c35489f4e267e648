use std::process::{Command, Output};

fn derham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derham")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn eval_examples() {
    let cases: &[(&[&str], &str)] = &[
        (&["eval", "--family", "w", "--m", "0", "--j", "0", "--at", "0.5,0"], "0.75"),
        (&["eval", "--family", "n+", "--m", "0", "--j", "1", "--at", "0.3,0.4"], "(0.6, 0.8)"),
        (&["eval", "--family", "z", "--lambda", "0", "--m", "0", "--j", "1", "--at", "1,0"], "1"),
    ];
    for (args, want) in cases {
        let o = derham(args);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(stdout(&o), *want, "{args:?}");
    }
}

#[test]
fn eval_json() {
    let o = derham(&["eval", "--family", "vz", "--nu", "1", "--m", "-1", "--j", "0", "--at", "0.2,-0.1", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family"], "vz");
    assert_eq!(v["m"], -1);
    assert_eq!(v["nu"], 1);
    assert_eq!(v["value_re"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(derham(&["eval", "--family", "q", "--m", "0", "--j", "0", "--at", "0,0"]).status.code(), Some(1));
    assert_eq!(derham(&["eval", "--family", "w", "--m", "0", "--j", "0", "--at", "0"]).status.code(), Some(1));
    assert_eq!(derham(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(derham(&["verify", "nosuchsuite"]).status.code(), Some(1));
    assert_eq!(derham(&["--help"]).status.code(), Some(0));
}

#[test]
fn gram_diagonal_and_mixed() {
    let o = derham(&["gram", "--family", "vN", "--maxdeg", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max_offdiag_rel="));
    let o = derham(&["gram", "--family", "z", "--lambda", "0", "--also-lambda", "1", "--maxdeg", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gram_writes_matrix() {
    let dir = std::env::temp_dir().join(format!("derham-gram-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.csv");
    let o = derham(&["gram", "--family", "mZ", "--lambda", "1", "--maxdeg", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("i,j,re,im"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_suite() {
    let o = derham(&["verify", "lemma11"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("PASS suite lemma11"));
}

#[test]
fn field_grid_csv() {
    let o = derham(&["field", "--family", "vz", "--lambda", "0", "--m", "1", "--j", "0", "--grid", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,re_u,im_u,re_v,im_v");
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[1], "-1.000000000000000e+00,-1.000000000000000e+00,,,,");
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 6));
}

#[test]
fn field_ring_tangential_trace() {
    let o = derham(&["field", "--family", "n+", "--m", "2", "--j", "1", "--ring", "32"]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    let tang = err
        .split_whitespace()
        .find_map(|w| w.strip_prefix("max_tangential="))
        .and_then(|v| v.parse::<f64>().ok())
        .unwrap();
    assert!(tang < 1e-12);
}

#[test]
fn chains_table() {
    let o = derham(&["chains", "--domain", "disk", "--mmax", "1", "--jmax", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,dims,ranks,homology,composition_max,exact"));
    let inexact = lines.filter(|l| l.ends_with(",false")).count();
    assert_eq!(inexact, 1);
}

#[test]
fn field_output_is_deterministic() {
    let args = ["field", "--family", "n", "--nu", "1", "--m", "1", "--j", "0", "--grid", "20"];
    let (a, b) = (derham(&args), derham(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 401);
}

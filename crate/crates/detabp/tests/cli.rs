use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn detabp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detabp")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn form(c: &str, coeffs: &[(usize, &str)]) -> String {
    let inner: Vec<String> = coeffs.iter().map(|(i, v)| format!("\"{i}\": \"{v}\"")).collect();
    format!("{{\"const\": \"{c}\", \"coeffs\": {{{}}}}}", inner.join(", "))
}

fn pencil(nvars: usize, rows: &[Vec<String>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!(
        "{{\"s\": {}, \"nvars\": {nvars}, \"field\": {{\"kind\": \"rational\"}}, \"entries\": [{}]}}",
        rows.len(),
        body.join(", ")
    )
}

/// `[[0, x, 0], [0, 1, y], [z, 0, 1]]`, determinant `xyz`, corank 1.
fn xyz() -> String {
    pencil(
        3,
        &[
            vec![form("0", &[]), form("0", &[(0, "1")]), form("0", &[])],
            vec![form("0", &[]), form("1", &[]), form("0", &[(1, "1")])],
            vec![form("0", &[(2, "1")]), form("0", &[]), form("1", &[])],
        ],
    )
}

/// `[[x, y], [z, w]]`, zero constant part.
fn generic_2x2() -> String {
    pencil(
        4,
        &[
            vec![form("0", &[(0, "1")]), form("0", &[(1, "1")])],
            vec![form("0", &[(2, "1")]), form("0", &[(3, "1")])],
        ],
    )
}

/// `[[1 + x, y], [1, z]]`, determinant `z + xz - y`.
fn non_homogeneous() -> String {
    pencil(3, &[vec![form("1", &[(0, "1")]), form("0", &[(1, "1")])], vec![form("1", &[]), form("0", &[(2, "1")])]])
}

fn linear_abp(var: usize) -> String {
    format!(
        "{{\"nvars\": 2, \"field\": {{\"kind\": \"rational\"}}, \"widths\": [1], \"b\": [{}], \"c\": [{}], \"mats\": []}}",
        form("0", &[(var, "1")]),
        form("1", &[])
    )
}

#[test]
fn convert_regular_pencil_takes_regular_path() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "xyz.json", &xyz());
    let out = dir.path().join("abp.json");
    let rep = dir.path().join("report.json");
    let run = detabp(&["convert", "--in", s(&input), "--out", s(&out), "--mode", "auto", "--report", s(&rep)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let report = json_of(&std::fs::read(&rep).unwrap());
    assert_eq!(report["path"], "Regular");
    assert_eq!(report["out_width"], 2);
    assert_eq!(report["d"], 3);
    assert_eq!(report["within_bounds"], true);
    let verify = detabp(&["verify", "--a", s(&input), "--b", s(&out), "--trials", "200", "--seed", "1"]);
    assert_eq!(code(&verify), 0);
    let verdict = json_of(&verify.stdout);
    assert_eq!(verdict["verdict"], "equal");
    assert_eq!(verdict["witness"], Value::Null);
    assert_eq!(verdict["trials"], 200);
    assert!(verdict["per_trial_error_bound"].as_str().unwrap().ends_with("/2305843009213693951"));
}

#[test]
fn convert_zero_constant_part_goes_direct() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "xyzw.json", &generic_2x2());
    let out = dir.path().join("abp.json");
    let run = detabp(&["convert", "--in", s(&input), "--out", s(&out)]);
    assert_eq!(code(&run), 0);
    let report = json_of(&run.stdout);
    assert_eq!(report["path"], "FullyHomogeneousDirect");
    let verify = detabp(&["verify", "--a", s(&input), "--b", s(&out), "--symbolic"]);
    assert_eq!(code(&verify), 0);
}

#[test]
fn non_homogeneous_pencil_is_a_precondition_violation() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", &non_homogeneous());
    let out = dir.path().join("abp.json");
    for extra in [&[][..], &["--degree", "2"][..]] {
        let mut args = vec!["convert", "--in", s(&input), "--out", s(&out)];
        args.extend_from_slice(extra);
        let run = detabp(&args);
        assert_eq!(code(&run), 3);
        let diag = json_of(&run.stderr);
        assert_eq!(diag["error"], "not-homogeneous");
        assert_eq!(diag["degrees"], serde_json::json!([1, 2]));
    }
    assert!(!out.exists());
}

#[test]
fn regular_mode_on_corank_two_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "xyzw.json", &generic_2x2());
    let run = detabp(&["convert", "--in", s(&input), "--out", s(&dir.path().join("o.json")), "--mode", "regular"]);
    assert_eq!(code(&run), 3);
    assert_eq!(json_of(&run.stderr)["error"], "not-regular");
}

#[test]
fn verify_distinct_linear_forms_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", &linear_abp(0));
    let y = write(dir.path(), "y.json", &linear_abp(1));
    let run = detabp(&["verify", "--a", s(&x), "--b", s(&y), "--trials", "200", "--seed", "0"]);
    assert_eq!(code(&run), 1);
    let verdict = json_of(&run.stdout);
    assert_eq!(verdict["verdict"], "not-equal");
    assert_eq!(verdict["witness"].as_array().unwrap().len(), 2);
    let same = detabp(&["verify", "--a", s(&x), "--b", s(&x)]);
    assert_eq!(code(&same), 0);
}

#[test]
fn verify_symbolic_on_three_by_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "xyz.json", &xyz());
    let out = dir.path().join("abp.json");
    assert_eq!(code(&detabp(&["convert", "--in", s(&input), "--out", s(&out)])), 0);
    let run = detabp(&["verify", "--a", s(&input), "--b", s(&out), "--symbolic"]);
    assert_eq!(code(&run), 0);
    let verdict = json_of(&run.stdout);
    assert_eq!(verdict["verdict"], "equal");
    assert_eq!(verdict["per_trial_error_bound"], Value::Null);
}

#[test]
fn gen_and_stats_power_sum() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ps.json");
    let run = detabp(&["gen", "--family", "powersum", "--n", "4", "--d", "3", "--seed", "0", "--out", s(&out)]);
    assert_eq!(code(&run), 0);
    let abp = json_of(&std::fs::read(&out).unwrap());
    assert_eq!(abp["widths"], serde_json::json!([4, 4]));
    let stats = detabp(&["stats", "--in", s(&out)]);
    assert_eq!(code(&stats), 0);
    let v = json_of(&stats.stdout);
    assert_eq!(v["size"], 8);
    assert_eq!(v["width"], 4);
    assert_eq!(v["layers"], 3);
    assert_eq!(v["homogeneous"], true);
}

#[test]
fn gen_r_regular_then_convert_general() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("rr.json");
    let run = detabp(&["gen", "--family", "r-regular", "--n", "2", "--d", "4", "--blocks", "2", "--seed", "3", "--out", s(&p)]);
    assert_eq!(code(&run), 0);
    let stats = json_of(&detabp(&["stats", "--in", s(&p)]).stdout);
    assert_eq!(stats["kind"], "pencil");
    assert_eq!(stats["r"], 2);
    assert_eq!(stats["degree"], 4);
    let out = dir.path().join("abp.json");
    let conv = detabp(&["convert", "--in", s(&p), "--out", s(&out)]);
    assert_eq!(code(&conv), 0);
    let report = json_of(&conv.stdout);
    assert_eq!(report["path"], "General");
    assert_eq!(report["r"], 2);
    assert_eq!(report["truncation"], 2);
    assert!(report["homogenization"].is_object());
    assert_eq!(code(&detabp(&["verify", "--a", s(&p), "--b", s(&out)])), 0);
}

#[test]
fn bench_power_sums() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let run = detabp(&["bench", "--family", "powersum", "--range", "n=2..6", "--d", "3", "--csv", s(&csv), "--seed", "0"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "family,n,d,s,r,path,out_size,out_width,bound_size,ratio,millis");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    for (row, n) in rows.iter().zip(2..) {
        assert_eq!(row[0], "powersum");
        assert_eq!(row[1], n.to_string());
        let ratio: f64 = row[9].parse().unwrap();
        assert!(ratio <= 64.0);
    }
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(dir.path(), "g.json", "{not json");
    let out = dir.path().join("o.json");
    let run = detabp(&["convert", "--in", s(&garbage), "--out", s(&out)]);
    assert_eq!(code(&run), 2);
    assert_eq!(json_of(&run.stderr)["error"], "invalid-input");
    assert_eq!(code(&detabp(&["stats", "--in", s(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&detabp(&["verify", "--a", s(&garbage), "--b", s(&garbage)])), 2);
    let bad_params = detabp(&["gen", "--family", "elemsym", "--n", "2", "--d", "5", "--out", s(&out)]);
    assert_eq!(code(&bad_params), 2);
    assert_eq!(code(&detabp(&["bench", "--family", "powersum", "--range", "q=1..2", "--csv", s(&out)])), 2);
    assert_eq!(code(&detabp(&["frobnicate"])), 2);
    let abp = write(dir.path(), "x.json", &linear_abp(0));
    assert_eq!(code(&detabp(&["convert", "--in", s(&abp), "--out", s(&out)])), 2);
}

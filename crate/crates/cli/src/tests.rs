use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::Value;

use super::{execute, report, Cli};

/// Exit status and stdout of one invocation; usage errors map to 2 as in `main`.
struct Output {
    code: u8,
    stdout: String,
}

fn coreep(args: &[&str]) -> Output {
    let argv = std::iter::once("coreep").chain(args.iter().copied());
    let result = Cli::try_parse_from(argv)
        .map_err(|e| e.to_string())
        .and_then(|cli| report(&cli));
    match result {
        Ok((code, stdout)) => Output { code, stdout },
        Err(_) => Output {
            code: 2,
            stdout: String::new(),
        },
    }
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).expect("stdout is json")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// A = I, B = E33, C = E12 + E23, as JSON files.
fn shift_files(dir: &Path) -> [PathBuf; 3] {
    [
        write(
            dir,
            "a.json",
            "[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]",
        ),
        write(dir, "b.csv", "0,0,0\n0,0,0\n0,0,1\n"),
        write(dir, "c.csv", "0,1,0\n0,0,1\n0,0,0\n"),
    ]
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn invert_shift_triple() {
    let dir = tempfile::tempdir().unwrap();
    let [a, b, c] = shift_files(dir.path());
    let out = coreep(&[
        "invert",
        "--kind",
        "bc-core-ep",
        "--matrices",
        s(&a),
        s(&b),
        s(&c),
    ]);
    assert_eq!(out.code, (0));
    let v = json(&out);
    assert_eq!(v["k"], 1);
    assert_eq!(v["verified"], true);
    let x = &v["inverse"];
    for r in 0..3 {
        for col in 0..3 {
            let want = if (r, col) == (1, 0) { 1.0 } else { 0.0 };
            let got = x[r][col][0].as_f64().unwrap();
            assert!((got - want).abs() < 1e-10, "({r},{col}) = {got}");
            assert!(x[r][col][1].as_f64().unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn inadmissible_k_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let [a, b, c] = shift_files(dir.path());
    let out = coreep(&[
        "invert",
        "--kind",
        "bc-core-ep",
        "--k",
        "0",
        "--matrices",
        s(&a),
        s(&b),
        s(&c),
    ]);
    assert_eq!(out.code, (1));
    assert_eq!(json(&out)["status"], "not_invertible");
}

#[test]
fn index_reports_rank_table() {
    let dir = tempfile::tempdir().unwrap();
    let [a, b, c] = shift_files(dir.path());
    let out = coreep(&["index", "--matrices", s(&a), s(&b), s(&c)]);
    assert_eq!(out.code, (0));
    let v = json(&out);
    assert_eq!(v["index"], 1);
    assert_eq!(v["rank_table"].as_array().unwrap().len(), 4);
}

#[test]
fn solve_projects_rhs() {
    let dir = tempfile::tempdir().unwrap();
    let [a, b, c] = shift_files(dir.path());
    let rhs = write(dir.path(), "rhs.csv", "1,2,3\n");
    let out = coreep(&["solve", "--matrices", s(&a), s(&b), s(&c), "--rhs", s(&rhs)]);
    assert_eq!(out.code, (0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    // X = E21 sends (1,2,3) to (0,1,0).
    let x: Vec<f64> = v["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z[0].as_f64().unwrap())
        .collect();
    assert!((x[1] - 1.0).abs() < 1e-10 && x[0].abs() < 1e-10 && x[2].abs() < 1e-10);
}

#[test]
fn monoid_inverse_in_z8() {
    let out = coreep(&[
        "invert",
        "--kind",
        "bc_core_ep",
        "--universe",
        "zn:8",
        "--elements",
        "1,1,2",
        "--kmax",
        "10",
    ]);
    assert_eq!(out.code, (0));
    let r = &json(&out)["result"];
    assert_eq!(r["members"], serde_json::json!([3, 4, 5, 6, 7, 8, 9, 10]));
    assert_eq!(r["index"], 3);
    assert_eq!(r["inverse"], 0);
}

#[test]
fn missing_inverse_exits_one() {
    // 2 is not a unit in Z_8, so it has no group inverse.
    let out = coreep(&[
        "invert",
        "--kind",
        "group",
        "--universe",
        "zn:8",
        "--elements",
        "2",
    ]);
    assert_eq!(out.code, (1));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "[[[1,0]],[]]");
    for args in [
        vec![
            "invert",
            "--kind",
            "bc-core-ep",
            "--matrices",
            s(&bad),
            s(&bad),
            s(&bad),
        ],
        vec![
            "invert",
            "--kind",
            "nonsense",
            "--universe",
            "zn:8",
            "--elements",
            "1",
        ],
        vec![
            "invert",
            "--kind",
            "group",
            "--universe",
            "zn:8",
            "--elements",
            "9",
        ],
        vec![
            "invert",
            "--kind",
            "group",
            "--universe",
            "zz:8",
            "--elements",
            "1",
        ],
        vec!["check", "--universe", "zn:4", "--only", "no_such_check"],
        vec!["invert", "--kind", "drazin"],
        vec!["frobnicate"],
    ] {
        assert_eq!(coreep(&args).code, (2), "{args:?}");
    }
    let [a, b, c] = shift_files(dir.path());
    let out = coreep(&[
        "invert",
        "--kind",
        "bc-core-ep",
        "--tol",
        "0",
        "--matrices",
        s(&a),
        s(&b),
        s(&c),
    ]);
    assert_eq!(out.code, (2));
}

#[test]
fn check_passes_and_fails_by_exit_code() {
    let out = coreep(&[
        "check",
        "--universe",
        "zn:6",
        "--only",
        "core_ep_equivalences,direct_sum",
    ]);
    assert_eq!(out.code, (0));
    let v = json(&out);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);

    // Cross-k uniqueness has counterexamples in M_2(Z_2).
    let out = coreep(&[
        "check",
        "--universe",
        "mat:2:2",
        "--only",
        "uniqueness_across_k",
    ]);
    assert_eq!(out.code, (1));
    assert_eq!(json(&out)["checks"][0]["status"], "fail");
}

#[test]
fn check_matrices_small_sweep() {
    let out = coreep(&[
        "check",
        "--universe",
        "matrices",
        "--count",
        "12",
        "--only",
        "matrix_rank_criterion",
        "--format",
        "table",
    ]);
    assert_eq!(out.code, (0));
    assert!(out.stdout.contains("matrix_rank_criterion"));
}

#[test]
fn reproduce_is_byte_stable() {
    for ex in ["z8", "shift"] {
        for fmt in ["json", "table"] {
            let first = coreep(&["reproduce", ex, "--format", fmt]);
            let second = coreep(&["reproduce", ex, "--format", fmt]);
            assert_eq!(first.code, (0));
            assert_eq!(first.stdout, second.stdout, "{ex} {fmt}");
        }
    }
    let table = coreep(&["reproduce", "z8", "--format", "table"]);
    let text = table.stdout;
    assert!(text.contains("= {3..10}, i = 3, inverse = 0"), "{text}");
    assert!(text.contains("i = 2"), "{text}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let cli = Cli::try_parse_from(["coreep", "reproduce", "z8", "--out", s(&path)]).unwrap();
    assert_eq!(execute(&cli), Ok(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["bc"]["index"], 3);
    assert_eq!(v["cc"]["index"], 2);
}

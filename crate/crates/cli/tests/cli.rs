use std::fs;
use std::path::PathBuf;
use std::process::Command;

use quartic_mass::{CountTable, FieldParams};
use quartic_mass_cli::{run_with, EXIT_MISMATCH, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};

const Q2: [&str; 8] = ["--e", "1", "--f", "1", "--d-minus-one", "2", "--minus-one-class", "ramified"];

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("quartic-mass").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn with_q2(cmd: &str, extra: &[&str]) -> (i32, String, String) {
    let mut args = vec![cmd];
    args.extend(Q2);
    args.extend(extra);
    run(&args)
}

#[test]
fn count_csv_matches_golden() {
    let (code, out, err) = with_q2("count", &[]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out, fs::read_to_string(data("q2_count.csv")).unwrap());
}

#[test]
fn count_json_matches_golden() {
    let (code, out, _) = with_q2("count", &["--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, fs::read_to_string(data("q2_count.json")).unwrap());
}

#[test]
fn count_range_ends_with_d4_twelve() {
    let (code, out, _) = with_q2("count", &["--m-min", "4", "--m-max", "11"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(*lines.last().unwrap(), "1,1,2,2,ramified,11,D4,12");
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let (_, csv, _) = with_q2("count", &["--all"]);
    let (_, json, _) = with_q2("count", &["--all", "--format", "json"]);
    let a = CountTable::read_csv(csv.as_bytes()).unwrap();
    let b = CountTable::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.params, FieldParams::q2());
    assert_eq!(a.rows.len(), 5 * 12);
}

#[test]
fn output_is_byte_stable() {
    for format in ["csv", "json", "table"] {
        let first = with_q2("count", &["--format", format]).1;
        assert_eq!(first, with_q2("count", &["--format", format]).1);
    }
}

#[test]
fn group_filter() {
    let (_, out, _) = with_q2("count", &["--group", "c4,v4", "--format", "table"]);
    assert_eq!(out, "   m  group        count\n   8  V4               4\n  11  C4               8\n");
}

#[test]
fn mass_with_serre_check() {
    let (code, out, _) = with_q2("mass", &["--check-serre"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, fs::read_to_string(data("q2_mass.txt")).unwrap());
    assert!(out.contains("total  1/8\n"));
    assert!(out.ends_with("serre: ok\n"));
    let (_, json, _) = with_q2("mass", &["--check-serre", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["total"], "1/8");
    assert_eq!(v["serre"], "ok");
    assert_eq!(v["masses"]["D4"], "35/1024");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["count", "--e", "1"],
        vec!["count", "--e", "1", "--f", "1", "--d-minus-one", "3", "--minus-one-class", "ramified"],
        vec!["count", "--e", "1", "--f", "1", "--d-minus-one", "2", "--minus-one-class", "sideways"],
        vec!["frobnicate"],
        vec!["verify", "--field", "/nonexistent.json", "--m-max", "4"],
        vec!["sweep", "--e-max", "2", "--f-max", "1", "--check", "nope"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
    let (_, _, err) = run(&["count", "--e", "1", "--f", "1", "--d-minus-one", "2", "--minus-one-class", "x"]);
    assert!(err.contains("--minus-one-class"), "{err}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("lmfdb-check"));
}

#[test]
fn verify_q2_all_oracles() {
    let field = data("q2.json");
    let (code, out, err) = run(&["verify", "--field", field.to_str().unwrap(), "--m-max", "11", "--oracle", "all"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.ends_with("pass: 27 rows, 0 failed\n"), "{out}");
}

#[test]
fn verify_json_and_jobs() {
    let field = data("sqrt2.json");
    let (code, out, _) = run(&[
        "verify", "--field", field.to_str().unwrap(), "--m-max", "8", "--oracle", "density", "--jobs", "2", "--format", "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["e"], 2);
    assert!(!v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn verify_fails_on_a_tampered_cache() {
    let dir = tempfile::tempdir().unwrap();
    let field = data("q2.json");
    let args = [
        "verify",
        "--field",
        field.to_str().unwrap(),
        "--m-max",
        "11",
        "--oracle",
        "tower",
        "--cache",
        dir.path().to_str().unwrap(),
    ];
    assert_eq!(run(&args).0, EXIT_OK);
    let path = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(run(&args).0, EXIT_OK);
    fs::write(&path, text.replacen("\"count\": \"12\"", "\"count\": \"13\"", 1)).unwrap();
    let (code, out, _) = run(&args);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(out.contains("FAIL"));
}

#[test]
fn verify_budget_exhaustion_exits_three() {
    let field = data("q2.json");
    let (code, _, err) = run(&[
        "verify", "--field", field.to_str().unwrap(), "--m-max", "11", "--oracle", "dedup", "--dedup-budget", "3",
    ]);
    assert_eq!(code, EXIT_RESOURCE, "{err}");
}

#[test]
fn derive_params_from_field() {
    let field = data("sqrt2.json");
    let (code, out, _) = run(&["derive-params", "--field", field.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "field x^2-2 over Q2\ne=2 f=1 q=2 d_minus_one=2 minus_one_class=ramified\n");
}

#[test]
fn lmfdb_check_on_fixture() {
    let (code, out, err) = run(&[
        "lmfdb-check",
        "--csv",
        data("q2_quartics.csv").to_str().unwrap(),
        "--field",
        data("q2.json").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.ends_with("48 quartic totally ramified rows, 0 malformed, 0 mismatches\n"), "{out}");
}

#[test]
fn lmfdb_check_reports_bad_rows_by_line() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let mut text = fs::read_to_string(data("q2_quartics.csv")).unwrap();
    text.push_str("2.4.11.99,4,4,1,eleven,4T3,[]\n2.4.11.98,4,4,1,11,4T9,[]\n");
    fs::write(&csv, text).unwrap();
    let (code, out, err) =
        run(&["lmfdb-check", "--csv", csv.to_str().unwrap(), "--field", data("q2.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("line 53: bad c"), "{err}");
    assert!(err.contains("line 54: unknown galois_label"), "{err}");
    assert!(out.contains("2 malformed"));

    let mut text = fs::read_to_string(data("q2_quartics.csv")).unwrap();
    text.push_str("2.4.11.99,4,4,1,11,4T1,[]\n");
    fs::write(&csv, text).unwrap();
    let (code, out, _) =
        run(&["lmfdb-check", "--csv", csv.to_str().unwrap(), "--field", data("q2.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(out.contains("  11  C4           8        9  FAIL"), "{out}");
}

#[test]
fn lmfdb_check_refuses_other_bases() {
    let (code, _, err) = run(&[
        "lmfdb-check",
        "--csv",
        data("q2_quartics.csv").to_str().unwrap(),
        "--field",
        data("sqrt2.json").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Q2 only"));
}

#[test]
fn sweep_small() {
    let (code, out, _) = run(&["sweep", "--e-max", "4", "--f-max", "2", "--check", "serre,c4-dual"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "sweep e<=4 f<=2: 20 formal tuples\nserre: ok\nc4-dual: ok\n");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_quartic-mass");
    let ok = Command::new(bin).arg("count").args(Q2).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), fs::read_to_string(data("q2_count.csv")).unwrap());
    let bad = Command::new(bin).args(["count", "--e", "0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}

use std::path::PathBuf;
use std::process::Command;

use halperin::cli::{run, EXIT_EMPTY, EXIT_FOUND, EXIT_USAGE};
use serde_json::Value;

fn halperin(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("halperin").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = halperin(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out:?} {err}"));
    (code, v)
}

fn rows(v: &Value) -> Vec<(i64, i64, i64, i64)> {
    v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            let g = |k: &str| s[k].as_i64().unwrap();
            (g("m"), g("n"), g("l"), g("det"))
        })
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("halperin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn enumerate_two_thirds_csv() {
    let (code, out, _) = halperin(&["enumerate", "--nu", "2/3", "--t", "1,1", "--max", "200", "--format", "csv"]);
    assert_eq!(code, EXIT_FOUND);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("m,n,l,det"));
    assert!(out.lines().any(|l| l == "2,6,3,3"));
}

#[test]
fn enumerate_gap_exits_one() {
    let (code, v) = json(&["enumerate", "--nu", "9/10", "--t", "1,1", "--max", "50", "--fix-l", "0"]);
    assert_eq!(code, EXIT_EMPTY);
    assert_eq!(v["outcome"], "empty");
    assert!(v["solutions"].as_array().unwrap().is_empty());
}

#[test]
fn enumerate_unit_filling() {
    let (code, out, _) = halperin(&["enumerate", "--nu", "1/1", "--t", "1,1", "--max", "10", "--format", "csv"]);
    assert_eq!(code, EXIT_FOUND);
    assert!(out.lines().any(|l| l == "2,5,3,1"));
    assert!(!out.lines().any(|l| l == "2,2,1,3" || l == "3,3,2,5"));
}

#[test]
fn construct_t11_residue_branch() {
    let (code, v) = json(&["construct", "--nu", "3/5", "--t", "1,1", "--min-det", "0", "--family", "t11"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(rows(&v), vec![(7, 2, 3, 5)]);
    let s = &v["solutions"][0];
    assert_eq!(s["family"], "t11_residue");
    assert_eq!(s["trace"]["a"], 4);
    assert_eq!(s["trace"]["b"], 1);
    assert_eq!(s["trace"]["t"], 1);
}

#[test]
fn construct_large_determinant() {
    let (code, v) = json(&["construct", "--nu", "13/17", "--t", "1,1", "--min-det", "1000000"]);
    assert_eq!(code, EXIT_FOUND);
    let s = &v["solutions"][0];
    assert_eq!(s["det"], 1_002_252);
    assert_eq!(s["trace"]["beta"], 17);
    assert_eq!(s["trace"]["scale"], 17);
    assert_eq!(s["family"], "integer_general");
}

#[test]
fn construct_bosonic() {
    let (code, v) = json(&["construct", "--nu", "3/5", "--t", "1,0", "--bosonic", "--alpha", "2"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(rows(&v), vec![(10, 300, 50, 500)]);
    assert_eq!(v["solutions"][0]["parity"], "bosonic");
    assert_eq!(v["solutions"][0]["trace"]["alpha"], 2);
}

#[test]
fn construct_family_switches() {
    let (code, v) = json(&["construct", "--nu", "3/5", "--t", "1,0", "--family", "t10", "--m", "2"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(rows(&v), vec![(2, 3, 1, 5)]);
    let (code, v) = json(&["construct", "--nu", "1", "--t", "1,1", "--family", "nu1", "--d1", "2", "--d2", "8"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(v["solutions"][0]["family"], "nu1_factorization");
    let (code, v) = json(&["construct", "--nu", "1", "--t", "2,1", "--family", "unity", "--beta", "3"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(v["solutions"][0]["det"], 36);
    let (code, _, err) = halperin(&["construct", "--nu", "3/5", "--t", "1,1", "--family", "t10"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("t10"));
    let (code, _, _) = halperin(&["construct", "--nu", "3/5", "--t", "1,0", "--family", "t10", "--m", "2", "--min-det", "100"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn large_values_are_strings() {
    let (code, v) = json(&["construct", "--nu", "13/17", "--t", "3,4", "--min-det", "1000000000000000000000"]);
    assert_eq!(code, EXIT_FOUND);
    let s = &v["solutions"][0];
    assert!(s["det"].is_string());
    assert!(s["det"].as_str().unwrap().len() >= 22);
}

#[test]
fn fixed_l_outcomes() {
    let (code, v) = json(&["fixed-l", "--nu", "3/4", "--t", "1,1", "--l", "1"]);
    assert_eq!(code, EXIT_EMPTY);
    assert_eq!(v["outcome"], "empty");

    let (code, v) = json(&["fixed-l", "--nu", "2/3", "--t", "1,1", "--l", "3"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(v["outcome"], "finite_list");
    assert_eq!(rows(&v), vec![(2, 6, 3, 3), (6, 2, 3, 3)]);

    let (code, out, _) = halperin(&["fixed-l", "--nu", "1/1", "--t", "1,1", "--l", "1"]);
    assert_eq!(code, EXIT_FOUND);
    assert!(out.contains("\"outcome\": \"infinite_family\""));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["family"].as_str().unwrap().contains("(m, 1, 1)"));
}

#[test]
fn reports() {
    let (code, v) = json(&["bound", "--t", "1,1", "--l", "0"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(v["certified_upper_bound"], "4/1");
    assert_eq!(v["empirical_max"], "2/1");

    let (code, v) = json(&["modcheck", "--eq", "3x^2+2=y^2", "--mod", "3"]);
    assert_eq!(code, EXIT_EMPTY);
    assert_eq!(v["solvable"], false);

    let (code, v) = json(&["modcheck", "--eq", "3x^2-7y^2-17z^2=0", "--mod", "7"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(v["solvable"], true);

    let (code, v) = json(&["triples", "--m", "2", "--n", "1", "--k", "1"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!((v["a"].as_i64(), v["b"].as_i64(), v["c"].as_i64()), (Some(3), Some(4), Some(5)));

    let (_, v) = json(&["residue", "--a", "-1", "--p", "7"]);
    assert_eq!(v["legendre"], -1);
    assert_eq!(v["is_residue"], false);

    let (_, v) = json(&["classify", "--k", "2,6,3", "--t", "1,1"]);
    assert_eq!(v["parity"], "bosonic");
    assert_eq!(v["nu"], "2/3");
    assert_eq!(v["det"], 3);

    let (_, v) = json(&["fermionic", "--nu", "2", "--t", "1,0"]);
    assert_eq!(v["fermionic"], "obstructed");

    let (code, v) = json(&["gap", "--t", "1,1", "--l", "0", "--nu", "9/10,11/12,2/3"]);
    assert_eq!(code, EXIT_FOUND);
    let gaps: Vec<&str> = v["unattainable"].as_array().unwrap().iter().map(|g| g["nu"].as_str().unwrap()).collect();
    assert_eq!(gaps, ["9/10", "11/12"]);
}

#[test]
fn usage_errors() {
    for args in [
        &["enumerate", "--nu", "2/3", "--t", "1,1"][..],
        &["enumerate", "--nu", "x", "--t", "1,1", "--max", "5"],
        &["enumerate", "--nu", "2/3", "--t", "1", "--max", "5"],
        &["enumerate", "--nu", "2/3", "--t", "1,1", "--max", "5", "--format", "xml"],
        &["construct", "--nu", "2/3", "--t", "1,1", "--min-det", "-1"],
        &["construct", "--nu", "2/3", "--t", "1,1", "--bosonic", "--alpha", "3"],
        &["fixed-l", "--nu", "2/3", "--t", "1,1", "--l", "-1"],
        &["residue", "--a", "3", "--p", "0"],
        &["modcheck", "--eq", "x+y=0", "--mod", "5"],
        &["verify", "--input", "/nonexistent/file.json"],
    ] {
        let (code, _, err) = halperin(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn unreduced_input_warns() {
    let (code, out, err) = halperin(&["enumerate", "--nu", "4/6", "--t", "1,1", "--max", "10", "--format", "csv"]);
    assert_eq!(code, EXIT_FOUND);
    assert!(err.contains("warning") && err.contains("2/3"));
    assert!(out.lines().any(|l| l == "2,6,3,3"));
}

#[test]
fn output_is_deterministic_across_jobs() {
    let base = ["enumerate", "--nu", "13/17", "--t", "1,1", "--m-max", "60", "--n-max", "200"];
    let reference = halperin(&[&base[..], &["--jobs", "1"]].concat()).1;
    for jobs in ["1", "2", "3", "8"] {
        for _ in 0..2 {
            assert_eq!(halperin(&[&base[..], &["--jobs", jobs]].concat()).1, reference);
        }
    }
}

#[test]
fn verify_round_trip() {
    let json_path = scratch("enum.json");
    let csv_path = scratch("enum.csv");
    let construct_path = scratch("construct.json");
    let fixed_path = scratch("fixed.json");
    let p = |path: &PathBuf| path.to_str().unwrap().to_owned();

    assert_eq!(halperin(&["enumerate", "--nu", "16/17", "--t", "1,1", "--m-max", "100", "--n-max", "600", "--out", &p(&json_path)]).0, 0);
    assert_eq!(halperin(&["enumerate", "--nu", "16/17", "--t", "1,1", "--m-max", "100", "--n-max", "600", "--format", "csv", "--out", &p(&csv_path)]).0, 0);
    assert_eq!(halperin(&["construct", "--nu", "7/9", "--t", "2,3", "--min-det", "1000000000000000000000000", "--out", &p(&construct_path)]).0, 0);
    assert_eq!(halperin(&["fixed-l", "--nu", "2/3", "--t", "1,1", "--l", "3", "--out", &p(&fixed_path)]).0, 0);

    for path in [&json_path, &construct_path, &fixed_path] {
        let (code, v) = json(&["verify", "--input", &p(path)]);
        assert_eq!(code, EXIT_FOUND, "{}", path.display());
        assert_eq!(v["all_verified"], true);
    }
    let (code, v) = json(&["verify", "--input", &p(&csv_path), "--nu", "16/17", "--t", "1,1"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(v["checked"], 11);

    // A row under the wrong filling fails verification.
    let (code, v) = json(&["verify", "--input", &p(&csv_path), "--nu", "2/3", "--t", "1,1"]);
    assert_eq!(code, EXIT_EMPTY);
    assert_eq!(v["all_verified"], false);
    assert_eq!(halperin(&["verify", "--input", &p(&csv_path)]).0, EXIT_USAGE);
}

#[test]
fn table_format() {
    let (_, out, _) = halperin(&["enumerate", "--nu", "2/3", "--t", "1,1", "--max", "6", "--format", "table"]);
    assert!(out.contains("# nu: 2/3"));
    assert!(out.lines().any(|l| l.split_whitespace().eq(["2", "6", "3", "3"])));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_halperin");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&["enumerate", "--nu", "2/3", "--t", "1,1", "--max", "20", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("2,6,3,3"));
    assert_eq!(status(&["fixed-l", "--nu", "3/4", "--t", "1,1", "--l", "1"]).status.code(), Some(1));
    assert_eq!(status(&["enumerate"]).status.code(), Some(2));
}

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_puremono"))
        .args(args)
        .env_remove("PUREMONO_OUT")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn text(args: &[&str]) -> String {
    let mut a = args.to_vec();
    a.extend(["--format", "text"]);
    let out = run(&a);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn analyze_examples() {
    let v = json(&["analyze", "--n", "4", "--m", "17"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "analyze");
    let r = &v["result"];
    assert_eq!(r["status"], "not_monogenic");
    assert_eq!((r["p"].as_u64(), r["d"].as_u64()), (Some(2), Some(1)));

    let r = json(&["analyze", "--n", "6", "--m", "24300000"])["result"].clone();
    assert_eq!(r["status"], "monogenic");
    assert_eq!((r["t"].as_u64(), r["s"].as_u64()), (Some(5), Some(4)));
    assert_eq!(r["g"], "x^6 - 30");

    let r = json(&["analyze", "--n", "3", "--m", "2"])["result"].clone();
    assert_eq!(r["status"], "inconclusive");
    assert!(!r["notes"].as_array().unwrap().is_empty());
}

#[test]
fn reducible_binomial_is_an_error() {
    let out = run(&["analyze", "--n", "4", "--m", "16"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:") && err.contains("reducible"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn negative_radicand_parses() {
    let r = json(&["analyze", "--n", "3", "--m", "-2"])["result"].clone();
    assert_eq!(r["m"], "-2");
}

#[test]
fn polygon_drawing_of_x4_minus_17() {
    let s = text(&["polygon", "--n", "4", "--m", "17", "--p", "2", "--phi", "x-1"]);
    for needle in ["S1: (0, 4) -- (1, 2)", "S2: (1, 2) -- (2, 1)", "S3: (2, 1) -- (4, 0)", "index contribution 3"] {
        assert!(s.contains(needle), "{needle} missing:\n{s}");
    }
    assert!(s.lines().all(|l| l.chars().count() <= 100));
    let v = json(&["polygon", "--n", "4", "--m", "17", "--p", "2", "--phi", "x-1"]);
    let f = &v["result"]["factors"][0];
    assert_eq!(f["parts"], serde_json::json!(["-16", "4", "6", "4", "1"]));
    let verts: Vec<(i64, i64)> = f["polygon"]["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["x"].as_i64().unwrap(), p["y"].as_i64().unwrap()))
        .collect();
    assert_eq!(verts, vec![(0, 4), (1, 2), (2, 1), (4, 0)]);
}

#[test]
fn eisenstein_polygon_is_one_segment() {
    let v = json(&["polygon", "--poly", "x^3 - 2", "--p", "2"]);
    let sides = v["result"]["factors"][0]["polygon"]["sides"].as_array().unwrap().clone();
    assert_eq!(sides.len(), 1);
}

#[test]
fn polygon_rejects_non_factor() {
    let out = run(&["polygon", "--poly", "x^2 + x + 1", "--p", "2", "--phi", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a factor"));
}

#[test]
fn svg_output_is_valid_xml() {
    let v = json(&["polygon", "--n", "4", "--m", "17", "--p", "2", "--render", "svg"]);
    let svg = v["result"]["factors"][0]["drawing"].as_str().unwrap();
    let opts = roxmltree::ParsingOptions { allow_dtd: true, ..Default::default() };
    let doc = roxmltree::Document::parse_with_options(svg, opts).unwrap();
    assert_eq!(doc.root_element().attribute("version"), Some("1.1"));
}

#[test]
fn out_directory_receives_report_and_svg() {
    let dir = std::env::temp_dir().join(format!("puremono-cli-test-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_puremono"))
        .args(["polygon", "--n", "4", "--m", "17", "--p", "2", "--render", "svg"])
        .env("PUREMONO_OUT", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("polygon.json")).unwrap()).unwrap();
    assert_eq!(report["command"], "polygon");
    let svg = std::fs::read_to_string(dir.join("polygon-1.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn closed_form_agrees_with_direct_polygon() {
    let v = json(&["polygon", "--n", "9", "--m", "10", "--p", "3", "--closed-form"]);
    for f in v["result"]["factors"].as_array().unwrap() {
        assert_eq!(f["closed_form"]["hull_matches"], true);
    }
}

#[test]
fn factor_reports_split() {
    let v = json(&["factor", "--n", "4", "--m", "17", "--p", "2"]);
    let split = &v["result"]["split"];
    assert_eq!(split["exact"], true);
    assert_eq!(split["index_valuation"]["value"], 3);
    let mut ef: Vec<(u64, u64)> = split["slots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["e"].as_u64().unwrap(), s["f"].as_u64().unwrap()))
        .collect();
    ef.sort();
    assert_eq!(ef, vec![(1, 1), (1, 1), (2, 1)]);
    assert_eq!(v["result"]["common_index_divisor"]["d"], 1);
}

#[test]
fn search_degree_27() {
    let v = json(&["search", "--n", "27", "--m", "2..200"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 199);
    let ms: Vec<i64> = rows.iter().map(|r| r["m"].as_str().unwrap().parse().unwrap()).collect();
    assert!(ms.windows(2).all(|w| w[0] < w[1]));
    for r in rows {
        let m: i64 = r["m"].as_str().unwrap().parse().unwrap();
        if (m % 81 == 1 || m % 81 == 80) && r["status"] != "reducible" {
            assert_eq!(r["status"], "not_monogenic", "m = {m}");
        }
    }
    let r82 = rows.iter().find(|r| r["m"] == "82").unwrap();
    assert_eq!((r82["p"].as_u64(), r82["d"].as_u64()), (Some(3), Some(1)));
}

#[test]
fn search_generator_family_is_monogenic() {
    let v = json(&["search", "--n", "6", "--a", "2..50", "--u", "5"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    let mut bases: Vec<String> = Vec::new();
    for r in rows {
        assert_eq!(r["status"], "monogenic");
        bases.push(r["verdict"]["a"].as_str().unwrap().to_string());
    }
    assert_eq!(bases, vec!["6", "30", "42"]);
}

#[test]
fn search_empty_range() {
    let v = json(&["search", "--n", "5..2", "--m", "3"]);
    assert!(v["result"]["rows"].as_array().unwrap().is_empty());
    let out = run(&["search", "--n", "5..2", "--m", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,m,status,provenance,p,d,lhs,rhs,detail\n");
}

#[test]
fn search_error_rows_set_exit_code() {
    let out = run(&["search", "--n", "3", "--m", "0..3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("3,0,error")));
    assert!(csv.lines().any(|l| l.starts_with("3,2,")));
}

#[test]
fn cns_examples() {
    let v = json(&["cns", "verify", "--poly", "x^2+2x+2", "--radius", "10"]);
    assert_eq!((v["result"]["total"].as_u64(), v["result"]["terminated"].as_u64()), (Some(441), Some(441)));

    let v = json(&["cns", "encode", "--poly", "x^2+2x+2", "--element", "-1,0"]);
    assert_eq!(v["result"]["expansion"]["digits"], serde_json::json!([1, 0, 1, 1, 1]));

    let v = json(&["cns", "decode", "--poly", "x^2+2x+2", "--digits", "1,0,1,1,1"]);
    assert_eq!(v["result"]["element"], serde_json::json!([-1, 0]));

    let v = json(&["cns", "verify", "--poly", "x^2-2", "--radius", "2"]);
    assert!(v["result"]["non_terminated"].as_u64().unwrap() > 0);
    assert!(!v["result"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn cns_decode_rejects_bad_digit() {
    let out = run(&["cns", "decode", "--poly", "x^2+2x+2", "--digits", "1,5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["analyze", "--n", "4", "--m", "17"]);
    assert!(v.get("timing_ms").is_none());
    let v = json(&["analyze", "--n", "4", "--m", "17", "--timing"]);
    assert!(v["timing_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn config_echo() {
    let v = json(&["--seed", "7", "analyze", "--n", "4", "--m", "17", "--d-bound", "3"]);
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["d_bound"], 3);
    assert_eq!(v["config"]["m"], "17");
}

#[test]
fn reruns_are_byte_identical() {
    let cases: &[&[&str]] = &[
        &["analyze", "--n", "27", "--m", "82"],
        &["polygon", "--n", "4", "--m", "17", "--p", "2", "--render", "svg"],
        &["factor", "--poly", "x^6 + 3x + 3", "--p", "3"],
        &["search", "--n", "2..12", "--m", "2..40"],
        &["cns", "verify", "--poly", "x^2-3", "--radius", "3", "--digit-mode", "signed"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let mut one = vec!["--jobs", "1"];
    one.extend(["search", "--n", "2..12", "--m", "2..40"]);
    let mut four = vec!["--jobs", "4"];
    four.extend(["search", "--n", "2..12", "--m", "2..40"]);
    assert_eq!(run(&one).stdout, run(&four).stdout);
}

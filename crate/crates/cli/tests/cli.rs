use std::path::PathBuf;
use std::process::Command;

use hicat_cli::{run, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    p.to_string_lossy().into_owned()
}

fn hicat(args: &[&str]) -> Outcome {
    run(std::iter::once("hicat").chain(args.iter().copied()))
}

fn report(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("not json ({e}): {}", o.stdout))
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn pair_groupoid_validates() {
    let o = hicat(&["validate", &fixture("pairgroupoid3.cat")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let r = report(&o);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["ok"], true);
    assert_eq!(r["cells"], 9);
}

#[test]
fn broken_associativity_reports_a_witness() {
    let o = hicat(&["validate", &fixture("broken_assoc.cat")]);
    assert_eq!(o.code, 1);
    let r = report(&o);
    let cat = r["checks"].as_array().unwrap().iter().find(|c| c["check"] == "category").unwrap();
    let v = &cat["violations"][0];
    assert_eq!(v["law"], "associativity");
    let w: Vec<&str> = v["witness"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(w.len(), 3);
    assert!(w == ["a", "a", "a"] || w == ["a", "b", "a"], "{w:?}");
}

#[test]
fn embedded_matrix_units_break_exchange() {
    let f = fixture("conv_m2_terminal2.cat");
    let o = hicat(&["validate", "--exchange", "full", &f]);
    assert_eq!(o.code, 1, "{}", o.stdout);
    let w = &report(&o)["exchange_witness"];
    assert!(w.is_object());
    assert_ne!(w["lhs"], w["rhs"]);
    let o = hicat(&["validate", "--exchange", "nc", &f]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn committed_embedding_matches_regeneration() {
    let o = hicat(&["embed", "--base", &fixture("terminal2.cat"), "--coeff", "M2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let committed = std::fs::read_to_string(fixture("conv_m2_terminal2.cat")).unwrap();
    assert_eq!(o.stdout, committed);
}

#[test]
fn ones_hypermatrix_norm() {
    let o = hicat(&["hyper", "norm", "--gamma", "1", &fixture("ones2.hyp")]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "2.0\n");
    let o = hicat(&["hyper", "norm", "--gamma", "none", &fixture("ones2.hyp")]);
    assert_eq!(o.stdout, "1.0\n");
}

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn read_scalar_section(text: &str) -> Vec<(String, C)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            (t[0].to_string(), (t[1].parse().unwrap(), t[2].parse().unwrap()))
        })
        .collect()
}

#[test]
fn convolution_matches_matrix_product_bitwise() {
    let a = read_scalar_section(&std::fs::read_to_string(fixture("a.sec")).unwrap());
    let b = read_scalar_section(&std::fs::read_to_string(fixture("b.sec")).unwrap());
    let entry = |s: &[(String, C)], i: usize, j: usize| {
        s.iter().find(|(n, _)| *n == format!("({},{})", i + 1, j + 1)).map(|x| x.1).unwrap_or((0.0, 0.0))
    };
    let o = hicat(&["convolve", "--base", &fixture("pairgroupoid2.cat"), "--coeff", "C", "--depth", "0", &fixture("a.sec"), &fixture("b.sec")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let c = read_scalar_section(&o.stdout);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = (0.0, 0.0);
            for k in 0..2 {
                let p = cmul(entry(&a, i, k), entry(&b, k, j));
                acc = (acc.0 + p.0, acc.1 + p.1);
            }
            let got = entry(&c, i, j);
            assert_eq!(got.0.to_bits(), acc.0.to_bits(), "({i},{j})");
            assert_eq!(got.1.to_bits(), acc.1.to_bits(), "({i},{j})");
        }
    }
}

#[test]
fn involution_is_conjugate_transpose() {
    let o = hicat(&["involve", "--base", &fixture("pairgroupoid2.cat"), "--coeff", "C", &fixture("a.sec")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let s = read_scalar_section(&o.stdout);
    let get = |n: &str| s.iter().find(|x| x.0 == n).unwrap().1;
    // a(2,1) = 3i, so the adjoint has -3i at (1,2)
    assert_eq!(get("(1,2)"), (0.0, -3.0));
    assert_eq!(get("(2,1)"), (2.0, 1.0));
}

#[test]
fn section_output_roundtrips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.sec").to_string_lossy().into_owned();
    let base = fixture("pairgroupoid2.cat");
    let o = hicat(&["convolve", "--base", &base, "--coeff", "C", &fixture("a.sec"), &fixture("b.sec"), "-o", &out]);
    assert_eq!(o.code, 0);
    let printed = hicat(&["convolve", "--base", &base, "--coeff", "C", &fixture("a.sec"), &fixture("b.sec")]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), printed.stdout);
    let again = hicat(&["convolve", "--base", &base, "--coeff", "C", &out, &fixture("b.sec")]);
    assert_eq!(again.code, 0);
}

#[test]
fn norm_of_section_is_the_matrix_norm() {
    let o = hicat(&["norm", "--base", &fixture("pairgroupoid2.cat"), "--coeff", "C", &fixture("a.sec")]);
    assert_eq!(o.code, 0);
    let v: f64 = o.stdout.trim().parse().unwrap();
    // largest singular value of [[1, 2-i], [3i, -2+0.5i]]
    assert!((v - 3.967340091839557).abs() < 1e-9, "{v}");
}

#[test]
fn hypermatrix_mul_and_invol_commands() {
    let dir = tempfile::tempdir().unwrap();
    let x = write_temp(&dir, "x.hyp", "hyper 2 2 2\n1 1 1 2 1 0\n2 1 1 1 0 1\n1 2 2 2 3 0\n");
    let o = hicat(&["hyper", "mul", "--gamma", "full", &x, &fixture("ones2.hyp")]);
    assert_eq!(o.code, 2);
    let o = hicat(&["hyper", "invol", "--gamma", "{1}", &x]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let back = write_temp(&dir, "y.hyp", &o.stdout);
    let o2 = hicat(&["hyper", "invol", "--gamma", "{1}", &back]);
    let twice = write_temp(&dir, "z.hyp", &o2.stdout);
    let m = hicat(&["hyper", "mul", "--gamma", "none", &x, &twice]);
    let m2 = hicat(&["hyper", "mul", "--gamma", "none", &x, &x]);
    assert_eq!(m.stdout, m2.stdout);
}

#[test]
fn suite_cstar_on_hypermatrices_passes() {
    let o = hicat(&["suite", "cstar", "--hyper", "2,2", "--gamma", "all", "--samples", "1000", "--seed", "7"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let r = report(&o);
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(r["runs"].as_array().unwrap().len(), 4);
    assert!(r["worst_slack"].as_f64().unwrap() < 1e-9);
}

#[test]
fn suite_reports_are_byte_identical() {
    let args = ["suite", "cstar", "--base", &fixture("pairgroupoid3.cat"), "--coeff", "M2", "--samples", "60", "--seed", "11"];
    let (a, b) = (hicat(&args), hicat(&args));
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let e = ["suite", "equivalence", "--hyper", "2,3", "--samples", "50"];
    assert_eq!(hicat(&e).stdout, hicat(&e).stdout);
}

#[test]
fn different_seeds_change_the_report() {
    let a = hicat(&["suite", "cstar", "--matrix", "3", "--samples", "30", "--seed", "1"]);
    let b = hicat(&["suite", "cstar", "--matrix", "3", "--samples", "30", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn collapse_suite_on_exchange_fixture() {
    let o = hicat(&["suite", "collapse", &fixture("terminal2.cat")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let r = report(&o);
    assert_eq!(r["full_exchange"], true);
    assert_eq!(r["confirmed"], 1);
}

#[test]
fn positivity_suite_over_groupoids() {
    for base in ["pairgroupoid3.cat", "s3_group.cat"] {
        let o = hicat(&["suite", "positivity", "--base", &fixture(base), "--coeff", "M2", "--samples", "40"]);
        assert_eq!(o.code, 0, "{base}: {}", o.stdout);
        assert!(report(&o)["max_adjoint_defect"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn conjugation_fixture_validates() {
    let o = hicat(&["validate", "--conjugation", &fixture("s3_delooped.cat")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn product_fixture_validates_with_hermitian_single_inversions() {
    let o = hicat(&["validate", &fixture("pg2x2.cat")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(report(&o)["involutions"].as_array().unwrap().len(), 4);
}

#[test]
fn blocked_assignment_exits_2_with_reason() {
    let o = hicat(&["suite", "positivity", "--base", &fixture("s3_codiscrete.cat"), "--coeff", "M2"]);
    assert_eq!(o.code, 2);
    let r = report(&o);
    assert_eq!(r["error"]["kind"], "input");
    assert!(r["error"]["message"].as_str().unwrap().contains("covariance"));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.cat", "[meta]\nkind globular\ndepth 1\ncells a\n\n[comp 0]\na b -> a\n");
    let o = hicat(&["validate", &bad]);
    assert_eq!(o.code, 2);
    let r = report(&o);
    assert_eq!(r["error"]["kind"], "parse");
    assert_eq!(r["error"]["line"], 7);
    assert!(!o.stderr.is_empty());

    let both = write_temp(&dir, "both.cat", "[builder]\nterminal 1\n[meta]\nkind globular\n");
    assert_eq!(hicat(&["validate", &both]).code, 2);

    let sec = write_temp(&dir, "bad.sec", "section 4\n(1,1) 1\n");
    let o = hicat(&["norm", "--base", &fixture("pairgroupoid2.cat"), "--coeff", "C", &sec]);
    assert_eq!(o.code, 2);

    let hyp = write_temp(&dir, "bad.hyp", "hyper 1 2\n3 1 1 0\n");
    let o = hicat(&["hyper", "norm", "--gamma", "1", &hyp, "--report", "json"]);
    assert_eq!(o.code, 2);
    assert_eq!(report(&o)["error"]["line"], 2);
}

#[test]
fn missing_file_and_bad_flags() {
    assert_eq!(hicat(&["validate", "/nonexistent/x.cat"]).code, 2);
    let o = hicat(&["frobnicate"]);
    assert_eq!(o.code, 2);
    assert_eq!(report(&o)["error"]["kind"], "usage");
    let o = hicat(&["convolve", "--base", &fixture("pairgroupoid2.cat"), "--coeff", "C", "--subset", "1", &fixture("a.sec"), &fixture("a.sec")]);
    assert_eq!(o.code, 2);
    let o = hicat(&["convolve", "--base", &fixture("pairgroupoid2.cat"), "--coeff", "M2", &fixture("a.sec"), &fixture("a.sec")]);
    assert_eq!(o.code, 2, "scalar section read with matrix coefficients");
    assert_eq!(hicat(&["--help"]).code, 0);
}

#[test]
fn export_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["pairgroupoid3.cat", "s3_delooped.cat", "pg2x2.cat", "s3_codiscrete.cat"] {
        let o = hicat(&["export", &fixture(name)]);
        assert_eq!(o.code, 0, "{name}");
        let p = write_temp(&dir, name, &o.stdout);
        assert_eq!(hicat(&["export", &p]).stdout, o.stdout, "{name}");
        let direct = report(&hicat(&["validate", &fixture(name)]));
        let exported = report(&hicat(&["validate", &p]));
        assert_eq!(direct["checks"], exported["checks"], "{name}");
    }
}

#[test]
fn binary_exit_codes_and_threads() {
    let bin = env!("CARGO_BIN_EXE_hicat");
    let ok = Command::new(bin).args(["validate", &fixture("pairgroupoid2.cat")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["validate", &fixture("broken_assoc.cat")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let args = ["suite", "cstar", "--hyper", "2,2", "--samples", "80", "--seed", "5"];
    let one = Command::new(bin).env("HICAT_THREADS", "1").args(args).output().unwrap();
    let many = Command::new(bin).env("HICAT_THREADS", "4").args(args).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

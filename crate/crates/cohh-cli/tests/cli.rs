//! End-to-end tests of the command-line surface: exit codes, deterministic
//! bytes, and the documented behavior of every subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cohh"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

#[test]
fn check_passes_on_a_good_file() {
    let out = run(&["check", fixture("gamma_x2_f2.json").to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("coassociativity   pass"));
    assert!(text.contains("cocommutativity   yes"));
    assert!(text.contains("conilpotency      pass"));
}

#[test]
fn check_rejects_bad_coefficients_as_usage_error() {
    let out = run(&["check", fixture("bad_coeff.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("parse error"));
}

#[test]
fn check_fails_with_witness_on_non_coassociative_input() {
    let out = run(&["check", fixture("non_coassoc.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("coassociativity   FAIL"));
    assert!(text.contains("witness: coassociativity fails on c"));
}

#[test]
fn cohh_of_the_trivial_coalgebra() {
    let out = run(&[
        "cohh",
        fixture("trivial.json").to_str().unwrap(),
        "--emit",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("s,t,dim"));
    assert!(text.contains("0,0,1"));
    assert_eq!(text.lines().filter(|l| l.contains(",1")).count(), 1);
}

#[test]
fn cohh_bigraded_table_of_gamma() {
    let out = run(&[
        "cohh",
        fixture("gamma_x2_f2.json").to_str().unwrap(),
        "--bigraded",
        "--reps",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("valid for internal degree <= 6"));
    // Row 1 carries the shifted divided-power classes.
    assert!(text.contains("(1,2): 1⊗γ1(x)"));
}

#[test]
fn cohh_total_degree_view() {
    let out = run(&[
        "cohh",
        fixture("lambda_y3_f3.json").to_str().unwrap(),
        "--total",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dimensions by total degree t - s"));
    // Λ(y)⊗k[w]: classes at t-s = 2a and 2a+3 within the window.
    assert!(text.contains("   0: 1"));
    assert!(text.contains("   2: 1"));
    assert!(text.contains("   3: 1"));
}

#[test]
fn cohh_partial_cosimplicial_window_is_labeled() {
    let out = run(&[
        "cohh",
        fixture("lambda_y3_f3.json").to_str().unwrap(),
        "--max-s",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("partial: cosimplicial degree <= 2"));
}

#[test]
fn cohh_rejects_truncation_above_the_file_window() {
    let out = run(&[
        "cohh",
        fixture("gamma_x2_f2.json").to_str().unwrap(),
        "--max-degree",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cohh_output_is_byte_deterministic() {
    let path = fixture("gamma_x2_f2.json");
    let args = ["cohh", path.to_str().unwrap(), "--emit", "json", "--reps"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_hkr_matches() {
    let out = run(&[
        "suite",
        "hkr",
        "--gens",
        "x:2",
        "--field",
        "F3",
        "--max-degree",
        "10",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("HKR comparison: MATCH"));
}

#[test]
fn suite_matching_reports_witnesses() {
    let out = run(&[
        "suite",
        "matching",
        "--input",
        fixture("gamma_x2_f2.json").to_str().unwrap(),
        "--n",
        "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("matching maps surjective with constructive witnesses"));
    assert!(text.contains("dim M_n"));
}

#[test]
fn suite_collapse_on_a_catalog_file() {
    let out = run(&[
        "suite",
        "collapse",
        "--input",
        fixture("bu2_f3.json").to_str().unwrap(),
        "--series-through",
        "4",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict: Collapses at E2"));
    assert!(text.contains("1, 1, 1, 2, 3"));
}

#[test]
fn suite_collapse_is_inapplicable_for_exterior_inputs() {
    let out = run(&[
        "suite",
        "collapse",
        "--input",
        fixture("lambda_y3_f3.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: Inapplicable"));
}

#[test]
fn out_of_scope_queries_fail_loudly() {
    let out = run(&[
        "suite",
        "e2",
        "--input",
        fixture("gamma_x2_f2.json").to_str().unwrap(),
        "--dr",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not computed — certified by paper hypothesis only"));

    let out = run(&[
        "suite",
        "collapse",
        "--input",
        fixture("bu2_f3.json").to_str().unwrap(),
        "--convergence",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not computed — certified by paper hypothesis only"));
}

#[test]
fn suite_e2_prints_cogenerator_bidegrees() {
    let out = run(&[
        "suite",
        "e2",
        "--input",
        fixture("gamma_x2_f2.json").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("cofree-type page"));
    assert!(text.contains("(0,2)"));
    assert!(text.contains("(1,2)"));
}

#[test]
fn catalog_round_trips_through_the_parser() {
    let out = run(&[
        "suite",
        "catalog",
        "--name",
        "BSp(1)",
        "--field",
        "F5",
        "--max-degree",
        "8",
    ]);
    assert!(out.status.success());
    let json = stdout(&out);
    let c = cohh::format::parse_presentation(&json).expect("catalog emits valid files");
    assert_eq!(c.truncation(), 8);
    // |z_1| = 4: dims 1, 0, 0, 0, 1, 0, 0, 0, 1.
    assert_eq!(c.space().dims(), vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
    // Serialize-parse is the identity on the normalized table.
    let again = cohh::format::to_json(&c);
    let c2 = cohh::format::parse_presentation(&again).unwrap();
    assert_eq!(cohh::format::to_json(&c2), again);
}

#[test]
fn env_vars_provide_defaults() {
    let out = bin()
        .args(["suite", "hkr", "--gens", "x:2"])
        .env("COHH_FIELD", "F5")
        .env("COHH_MAX_DEGREE", "6")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("--field F5"));
    assert!(stdout(&out).contains("internal degree <= 6"));
}

#[test]
fn suite_doi_reports_exactness() {
    let out = run(&["suite", "doi", "--degree", "2", "--field", "F3", "--max-degree", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("two-step resolution exact"));
}

//! Acceptance gate: one test per shipping criterion, each printing a single
//! pass/fail line. The first nine drive the library property suites at full
//! budget; the tenth checks byte-level determinism of both suite reports and
//! CLI output.

use std::process::Command;

use expgrid::harness::run_suite;

fn suite_criterion(number: usize, label: &str, suite: &str, budget: usize, seed: u64) {
    let report = run_suite(suite, budget, seed).expect("suite id is known");
    let ok = report.failed == 0 && report.passed == budget;
    if ok {
        println!("criterion {number} ({label}): pass [{budget}/{budget}]");
    } else {
        println!(
            "criterion {number} ({label}): FAIL — {} of {budget} instances failed; first: {:?}",
            report.failed,
            report.failures.first()
        );
    }
    assert!(ok, "suite {suite} reported failures: {:?}", report.failures);
}

#[test]
fn criterion_01_period_oracle_equivalence() {
    suite_criterion(
        1,
        "period_at equals the depth-8 exhaustive oracle on 500 mixed instances",
        "period_oracle",
        500,
        101,
    );
}

#[test]
fn criterion_02_iterate_cardinality_law() {
    suite_criterion(
        2,
        "|f^n(x)| <= k^n for n <= 5 on 500 instances",
        "kpow_bound",
        500,
        102,
    );
}

#[test]
fn criterion_03_colorable_implies_fixed_point_free() {
    suite_criterion(
        3,
        "200 verified colorings, every underlying map fixed-point free",
        "colorable_fpf",
        200,
        103,
    );
}

#[test]
fn criterion_04_fixed_point_free_implies_colorable() {
    suite_criterion(
        4,
        "synthesis succeeds and verifies on 200/200 fixed-point-free maps",
        "fpf_colorable",
        200,
        104,
    );
}

#[test]
fn criterion_05_brighten_contract() {
    suite_criterion(
        5,
        "bright refinement: <= 2^n sets, cover, positive resolution, step facts",
        "brighten_2n",
        200,
        105,
    );
}

#[test]
fn criterion_06_n_bright_neighborhoods() {
    suite_criterion(
        6,
        "a ball exists at every point of 100 acyclic instances, depth <= 3",
        "nbright_ball",
        100,
        106,
    );
}

#[test]
fn criterion_07_extension_construction() {
    suite_criterion(
        7,
        "50 planar lifts: exact on X, off-X images avoid X, periods preserved",
        "extension",
        50,
        107,
    );
}

#[test]
fn criterion_08_restriction_monotonicity() {
    suite_criterion(
        8,
        "periodic_set(f|_A, M) within periodic_set(f, M) and A on 200 triples",
        "restriction",
        200,
        108,
    );
}

#[test]
fn criterion_09_vietoris_hausdorff_compatibility() {
    suite_criterion(
        9,
        "exhaustive two-sided membership/distance chain on small spaces",
        "vietoris_hausdorff",
        6,
        109,
    );
}

#[test]
fn criterion_10_byte_determinism() {
    let a = run_suite("period_oracle", 25, 42).unwrap();
    let b = run_suite("period_oracle", 25, 42).unwrap();
    let reports_equal =
        serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();

    let cli = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_expgrid"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    let gen_args = ["gen", "--model", "geometric", "--dim", "2", "--size", "9", "--seed", "13"];
    let verify_args = ["verify", "--suite", "restriction", "--budget", "5", "--seed", "21"];
    let cli_equal = cli(&gen_args).stdout == cli(&gen_args).stdout
        && cli(&verify_args).stdout == cli(&verify_args).stdout;

    let ok = reports_equal && cli_equal;
    println!(
        "criterion 10 (byte-identical reports and CLI output across equal seeds): {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(reports_equal, "suite reports differ across identical runs");
    assert!(cli_equal, "CLI output differs across identical runs");
}

//! One test per acceptance criterion. Each prints a `[PASS]` or `[FAIL]` line with the measured
//! constants before asserting.

use twistl::experiment::ExperimentConfig;
use twistl::verify::*;

fn check(r: CriterionReport) {
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_gauss_modulus() {
    check(criterion_1());
}

#[test]
fn criterion_02_gauss_identities() {
    check(criterion_2());
}

#[test]
fn criterion_03_galois_average_support() {
    check(criterion_3());
}

#[test]
fn criterion_04_root_numbers() {
    check(criterion_4());
}

#[test]
fn criterion_05_kloosterman_envelope() {
    check(criterion_5());
}

#[test]
fn criterion_06_v_function() {
    check(criterion_6());
}

#[test]
fn criterion_07_afe_oracles() {
    check(criterion_7());
}

#[test]
fn criterion_08_functional_equation() {
    check(criterion_8());
}

#[test]
fn criterion_09_ramanujan() {
    check(criterion_9());
}

#[test]
fn criterion_10_nonvanishing_experiment() {
    let r = criterion_10(&ExperimentConfig::default());
    assert!(r.seconds < 600.0, "experiment took {:.0}s", r.seconds);
    check(r);
}

#[test]
fn criterion_11_lattice_counts() {
    check(criterion_11());
}

//! Acceptance suite: every published value the crate must reproduce, one
//! test per criterion, each printing its pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use fermat_core::verify::{
    criterion_cohomology_table, criterion_d2_decision, criterion_finite_fields,
    criterion_invariant_dimensions, criterion_kernel_data, criterion_norm_theorem,
    criterion_property_suites, criterion_unit_tables, render_outcome, CriterionOutcome,
};

const SEED: u64 = 0xfe52a7;

fn report(outcome: CriterionOutcome) {
    println!("{}", render_outcome(&outcome));
    assert!(
        outcome.pass,
        "criterion {} failed: {}",
        outcome.id, outcome.detail
    );
}

#[test]
fn criterion_1_unit_tables() {
    report(criterion_unit_tables(None));
}

#[test]
fn criterion_2_norm_theorem() {
    report(criterion_norm_theorem(None));
}

#[test]
fn criterion_3_invariant_dimensions() {
    report(criterion_invariant_dimensions(None));
}

#[test]
fn criterion_4_kernel_data() {
    report(criterion_kernel_data(None));
}

#[test]
fn criterion_5_cohomology_table() {
    report(criterion_cohomology_table(None));
}

#[test]
fn criterion_6_d2_decision() {
    report(criterion_d2_decision(None, SEED));
}

#[test]
fn criterion_7_property_suites() {
    report(criterion_property_suites(None, SEED));
}

#[test]
fn criterion_8_finite_fields() {
    report(criterion_finite_fields(None));
}

use rectdec_core::suites::run_criterion;

const SEED: u64 = 1;

fn criterion(index: usize) {
    let run = run_criterion(index, SEED).expect("criterion exists");
    let passed = run.report.passed();
    eprintln!(
        "criterion {index} [{}] {} ({} checks, {:.1?})",
        run.name,
        if passed { "PASS" } else { "FAIL" },
        run.report.checks.len(),
        run.elapsed
    );
    assert!(passed, "{}", run.report);
}

#[test]
fn criterion_1_round_trip_decomposition() {
    criterion(1);
}

#[test]
fn criterion_2_equivalence_triangle() {
    criterion(2);
}

#[test]
fn criterion_3_psi_witnesses() {
    criterion(3);
}

#[test]
fn criterion_4_hook_witness() {
    criterion(4);
}

#[test]
fn criterion_5_filtration_lemmas() {
    criterion(5);
}

#[test]
fn criterion_6_skeleta() {
    criterion(6);
}

#[test]
fn criterion_7_appendix() {
    criterion(7);
}

//! The acceptance suite: one test per criterion, each printing a
//! pass/fail line (visible with `--nocapture`). All arithmetic is exact,
//! so every comparison is equality; no tolerances anywhere.

use frobsplit::fixtures::run_criterion;

fn run(number: usize, id: &str) {
    match run_criterion(id, None) {
        Ok(rep) => {
            println!("criterion {number:2} ({id}): PASS — {}", rep.detail);
            assert!(rep.pass);
        }
        Err(e) => {
            println!("criterion {number:2} ({id}): FAIL — {e}");
            panic!("criterion {number} ({id}) failed: {e}");
        }
    }
}

#[test]
fn criterion_01_pointcount_congruence() {
    run(1, "pointcount-random");
}

#[test]
fn criterion_02_hyperbola_fixtures() {
    run(2, "hyperbola-fixtures");
}

#[test]
fn criterion_03_chevalley_warning() {
    run(3, "chevalley-warning");
}

#[test]
fn criterion_04_gvd_blowup() {
    run(4, "gvd-blowup");
}

#[test]
fn criterion_05_gvd_pathologies() {
    run(5, "gvd-pathologies");
}

#[test]
fn criterion_06_operator_axioms() {
    run(6, "operator-axioms");
}

#[test]
fn criterion_07_frobdegen() {
    run(7, "frobdegen");
}

#[test]
fn criterion_08_elliptic_posets() {
    run(8, "elliptic-posets");
}

#[test]
fn criterion_09_matrix_schubert() {
    run(9, "matrix-schubert");
}

#[test]
fn criterion_10_basic_elements() {
    run(10, "basic-elements");
}

#[test]
fn criterion_11_kazhdan_lusztig() {
    run(11, "kl-1232");
}

#[test]
fn criterion_12_init_stabilization() {
    run(12, "init-stabilization");
}

//! Theorem-checker fixtures: confirmed cases, hypotheses-not-met cases with
//! informational contrapositives, and determinism of the reports.

use num_complex::Complex64;

use evpos::checkers::{
    check_cyclicity_thm21, check_domination_lemma42, check_eigenspace_bound_thm43, check_lemma32,
    check_lemma53, check_niiro_sawashima, check_sequences_eq42, check_strong_convergence_cor22,
    check_thm31, check_thm51, check_thm52, default_n_list, run_all, run_check, CheckConfig,
    Verdict,
};
use evpos::generators::{generate, Family, GenParams};
use evpos::ComplexMatrix;

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows)
}

fn rotation() -> ComplexMatrix {
    real(&[&[0.0, -1.0], &[1.0, 0.0]])
}

fn nilpotent() -> ComplexMatrix {
    real(&[&[0.0, 1.0], &[0.0, 0.0]])
}

fn cfg() -> CheckConfig {
    CheckConfig {
        sample_count: 200,
        ..CheckConfig::default()
    }
}

#[test]
fn thm21_zero_matrix_confirmed() {
    let report = check_cyclicity_thm21(&ComplexMatrix::zeros(2, 2), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn thm21_rotation_contrapositive() {
    let report = check_cyclicity_thm21(&rotation(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::HypothesesNotMet);
    // Informational: the conclusion fails too, consistent with the
    // contrapositive (the semigroup is indeed not eventually positive).
    assert!(report.conclusions.iter().any(|c| !c.held));
    assert!(report.hypotheses.iter().any(|h| !h.held));
}

#[test]
fn thm21_generated_instance_confirmed() {
    let bundle = generate(Family::EvposSemigroup, 4, 21, &GenParams::default()).unwrap();
    let report = check_cyclicity_thm21(&bundle.matrix, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn cor22_diagonal_confirmed_both_true() {
    let a = ComplexMatrix::diag(&[Complex64::ZERO, Complex64::new(-1.0, 0.0)]);
    let report = check_strong_convergence_cor22(&a, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn cor22_nilpotent_confirmed_both_false() {
    // The semigroup [[1,t],[0,1]] is positive from the start, orbits are
    // unbounded and nothing converges: both sides of the equivalence are
    // false, so the equivalence is confirmed.
    let report = check_strong_convergence_cor22(&nilpotent(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
    assert!(report.hypotheses.iter().all(|h| h.held));
}

#[test]
fn thm31_diagonal_confirmed() {
    let a = ComplexMatrix::diag(&[Complex64::ZERO, Complex64::new(-1.0, 0.0)]);
    let report = check_thm31(&a, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn thm31_rotation_hypotheses_not_met_with_live_gap() {
    // Mean ergodic yet not convergent: the equivalence fails exactly where
    // the positivity hypothesis fails, showing the hypothesis does work.
    let report = check_thm31(&rotation(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::HypothesesNotMet);
    let concl = &report.conclusions[0];
    assert!(!concl.held);
}

#[test]
fn lemma32_symmetric_metzler_confirmed() {
    // Eigenvalues {0, -2}: bound 0, peripheral set {0}.
    let a = real(&[&[-1.0, 1.0], &[1.0, -1.0]]);
    let report = check_lemma32(&a, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn lemma32_rotation_contrapositive() {
    let report = check_lemma32(&rotation(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::HypothesesNotMet);
    assert!(report.conclusions.iter().any(|c| !c.held));
}

#[test]
fn niiro_sawashima_swap_confirmed() {
    // Peripheral {1, -1}, both first-order with one-dimensional spaces.
    let report = check_niiro_sawashima(&real(&[&[0.0, 1.0], &[1.0, 0.0]]), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn niiro_sawashima_identity_confirmed() {
    let report = check_niiro_sawashima(&ComplexMatrix::identity(3), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn niiro_sawashima_jordan_hypotheses_not_met() {
    // Pole order 2 at the radius: outside the theorem's reach, and the
    // checker must say so rather than assert anything.
    let report = check_niiro_sawashima(&real(&[&[1.0, 1.0], &[0.0, 1.0]]), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::HypothesesNotMet);
}

#[test]
fn thm43_swap_and_identity_confirmed() {
    let report = check_eigenspace_bound_thm43(&real(&[&[0.0, 1.0], &[1.0, 0.0]]), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
    let report = check_eigenspace_bound_thm43(&ComplexMatrix::identity(3), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn thm43_generated_power_instance_confirmed() {
    let params = GenParams {
        spectral_radius: 1.0,
        gap: 0.5,
        ..GenParams::default()
    };
    let bundle = generate(Family::EvposPower, 5, 33, &params).unwrap();
    let report = check_eigenspace_bound_thm43(&bundle.matrix, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn lemma42_projection_dominates_itself() {
    let p = real(&[&[0.5, 0.5], &[0.5, 0.5]]);
    let report = check_domination_lemma42(&p, &p, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn lemma42_zero_operator() {
    let p = real(&[&[0.5, 0.5], &[0.5, 0.5]]);
    let q = ComplexMatrix::zeros(2, 2);
    let report = check_domination_lemma42(&q, &p, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn lemma42_rotated_projection_has_trivial_fixed_space() {
    // Q = e^{i pi/3} P: domination holds with equality; Qf = f forces f = 0.
    let p = real(&[&[0.5, 0.5], &[0.5, 0.5]]);
    let phase = Complex64::new(0.0, std::f64::consts::FRAC_PI_3).exp();
    let q = p.scale(phase);
    let report = check_domination_lemma42(&q, &p, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
    assert!(report
        .conclusions
        .iter()
        .any(|c| c.evidence.contains("dim ker(I - Q) = 0")));
}

#[test]
fn lemma42_rejects_mismatched_shapes() {
    let p = real(&[&[0.5, 0.5], &[0.5, 0.5]]);
    let q = ComplexMatrix::zeros(3, 3);
    assert!(check_domination_lemma42(&q, &p, &cfg()).is_err());
}

#[test]
fn eq42_swap_matrix_at_minus_one() {
    // Empty correction sums (k0 = 0): the domination reduces to
    // |Q_n f| <= P_n |f|, and P_n approaches (1/2)[[1,1],[1,1]], the
    // projection at the radius (closed-form 2x2 resolvent).
    let t = real(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let report =
        check_sequences_eq42(&t, Complex64::new(-1.0, 0.0), 0, &default_n_list(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn eq42_identity_with_equality() {
    let report = check_sequences_eq42(
        &ComplexMatrix::identity(2),
        Complex64::ONE,
        0,
        &default_n_list(),
        &cfg(),
    )
    .unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn eq42_generated_power_instance() {
    let params = GenParams {
        spectral_radius: 1.0,
        gap: 0.5,
        ..GenParams::default()
    };
    let bundle = generate(Family::EvposPower, 3, 5, &params).unwrap();
    let report = run_check("eq-4.2-sequences", &bundle.matrix, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn thm51_nilpotent_confirmed_both_false() {
    let report = check_thm51(&nilpotent(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn thm51_diagonal_confirmed_both_true() {
    let a = ComplexMatrix::diag(&[Complex64::ZERO, Complex64::new(-1.0, 0.0)]);
    let report = check_thm51(&a, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn thm52_nilpotent_and_diagonal() {
    let report = check_thm52(&nilpotent(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);

    let a = ComplexMatrix::diag(&[Complex64::ZERO, Complex64::new(-1.0, 0.0)]);
    let report = check_thm52(&a, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
    assert!(report
        .conclusions
        .iter()
        .any(|c| c.evidence.contains("rank Some(1)")));
}

#[test]
fn lemma53_symmetric_metzler_confirmed() {
    let a = real(&[&[-1.0, 1.0], &[1.0, -1.0]]);
    let report = check_lemma53(&a, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn lemma53_generated_confirmed() {
    let bundle = generate(Family::EvposSemigroup, 5, 77, &GenParams::default()).unwrap();
    let report = check_lemma53(&bundle.matrix, &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
}

#[test]
fn lemma53_rotation_contrapositive() {
    let report = check_lemma53(&rotation(), &cfg()).unwrap();
    assert_eq!(report.verdict, Verdict::HypothesesNotMet);
    assert!(report.conclusions.iter().any(|c| !c.held));
}

#[test]
fn reports_are_deterministic() {
    let bundle = generate(Family::EvposSemigroup, 4, 9, &GenParams::default()).unwrap();
    let a = run_all(&bundle.matrix, &cfg()).unwrap();
    let b = run_all(&bundle.matrix, &cfg()).unwrap();
    for (ra, rb) in a.iter().zip(&b) {
        assert_eq!(ra.to_json(), rb.to_json());
    }
}

#[test]
fn generated_instances_never_violate() {
    let params = GenParams::default();
    for seed in [100u64, 101, 102] {
        let bundle = generate(Family::EvposSemigroup, 4, seed, &params).unwrap();
        for report in run_all(&bundle.matrix, &cfg()).unwrap() {
            assert_ne!(
                report.verdict,
                Verdict::Violation,
                "seed {seed} violated {}",
                report.theorem_id
            );
        }
    }
}

#[test]
fn unknown_theorem_id_is_rejected() {
    let err = run_check("thm-9.9", &ComplexMatrix::identity(2), &cfg()).unwrap_err();
    assert!(err.to_string().contains("thm-2.1"));
}

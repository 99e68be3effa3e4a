//! Checkers for the semigroup results: cyclicity of the peripheral point
//! spectrum, the strong-convergence equivalences, boundedness-based
//! peripheral triviality, and the balancing characterizations.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{
    format_spectrum, positivity_witness_value, semigroup_positivity_hypothesis, tolerance_record,
    CheckConfig, CheckReport, Condition, Witness,
};
use crate::dynamics::{
    is_mean_ergodic, norm_continuity_at_infinity, sampled_operator_convergence,
    semigroup_spectral_flags, shift, strong_convergence_verdict, uniform_balancing_verdict,
};
use crate::eig::{default_tol_cluster, eig};
use crate::error::Result;
use crate::matrix::ComplexMatrix;

/// Cyclicity of the peripheral point spectrum: for an eventually positive,
/// bounded semigroup the point spectrum on the imaginary axis is closed
/// under integer multiples. On a finite eigenvalue set that forces
/// `sigma_p(A) and iR (subset of) {0}`, which is what is asserted.
pub fn check_cyclicity_thm21(a: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = semigroup_positivity_hypothesis(a, cfg)?;
    let data = eig(a, default_tol_cluster(a))?;
    let flags = semigroup_spectral_flags(&data, cfg.tol_conv);

    let bounded_cond = Condition::new(
        "orbits-bounded",
        flags.bounded,
        format!(
            "spectral bound {:.6e}, peripheral pole order {} (orbit compactness reduces to boundedness in finite dimension)",
            flags.spectral_bound, flags.pole_order_at_bound
        ),
    );

    let axis: Vec<Complex64> = data
        .clusters
        .iter()
        .filter(|c| c.value.re.abs() <= cfg.tol_conv)
        .map(|c| c.value)
        .collect();
    let inclusion = axis.iter().all(|z| z.im.abs() <= cfg.tol_conv);
    let concl = Condition::new(
        "axis-point-spectrum-contained-in-zero",
        inclusion,
        format!(
            "closure under integer multiples forces the inclusion on a finite set; axis eigenvalues: {:?}",
            axis.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>()
        ),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("spectral_bound".into(), Witness::Real(flags.spectral_bound));
    witnesses.insert(
        "axis_point_spectrum".into(),
        Witness::ComplexList(axis.iter().map(|&z| z.into()).collect()),
    );
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));
    witnesses.insert("spectrum".into(), format_spectrum(&data));

    Ok(CheckReport::assemble(
        "thm-2.1",
        vec![pos_cond, bounded_cond],
        vec![concl],
        tolerance_record(cfg, a),
        witnesses,
        cfg.seed,
    ))
}

/// Strong convergence is equivalent to bounded orbits plus trivial axis
/// point spectrum (with 0 semisimple when present). The left side is the
/// purely sampled convergence verdict; the right side is purely spectral;
/// the checker's content is that the two agree.
pub fn check_strong_convergence_cor22(a: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = semigroup_positivity_hypothesis(a, cfg)?;
    let data = eig(a, default_tol_cluster(a))?;
    let flags = semigroup_spectral_flags(&data, cfg.tol_conv);

    let sampled = sampled_operator_convergence(a, cfg.t_max, cfg.tol_conv)?;
    let spectral_side = flags.bounded && flags.axis_in_zero && flags.zero_semisimple;
    let equivalence = sampled.converges == spectral_side;

    let concl = Condition::new(
        "convergence-iff-bounded-orbits-and-trivial-axis-spectrum",
        equivalence,
        format!(
            "sampled convergence = {} (tail defect {:.3e}); bounded = {}, axis in {{0}} = {}, zero semisimple = {}",
            sampled.converges,
            sampled.tail_defect,
            flags.bounded,
            flags.axis_in_zero,
            flags.zero_semisimple
        ),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("sampled_tail_defect".into(), Witness::Real(sampled.tail_defect));
    witnesses.insert("sampled_converges".into(), Witness::Bool(sampled.converges));
    witnesses.insert("spectral_side".into(), Witness::Bool(spectral_side));
    witnesses.insert("spectral_bound".into(), Witness::Real(flags.spectral_bound));
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "cor-2.2",
        vec![pos_cond],
        vec![concl],
        tolerance_record(cfg, a),
        witnesses,
        cfg.seed,
    ))
}

/// For bounded, eventually positive semigroups (norm continuity at infinity
/// is automatic here), strong convergence is equivalent to mean ergodicity.
pub fn check_thm31(a: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = semigroup_positivity_hypothesis(a, cfg)?;
    let data = eig(a, default_tol_cluster(a))?;
    let flags = semigroup_spectral_flags(&data, cfg.tol_conv);

    let nci = norm_continuity_at_infinity(a);
    let nci_cond = Condition::vacuous("norm-continuous-at-infinity", nci.note);
    let bounded_cond = Condition::new(
        "semigroup-bounded",
        flags.bounded,
        format!("spectral bound {:.6e}", flags.spectral_bound),
    );

    let strong = strong_convergence_verdict(a, cfg.t_max, cfg.tol_conv)?;
    let ergodic = is_mean_ergodic(a, cfg.t_max, cfg.tol_conv)?;
    let equivalence = strong.converges == ergodic.converges;

    let concl = Condition::new(
        "strong-convergence-iff-mean-ergodic",
        equivalence,
        format!(
            "strong convergence = {}, mean ergodic = {}",
            strong.converges, ergodic.converges
        ),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("strong_converges".into(), Witness::Bool(strong.converges));
    witnesses.insert("mean_ergodic".into(), Witness::Bool(ergodic.converges));
    witnesses.insert("strong_tail_defect".into(), Witness::Real(strong.tail_defect));
    witnesses.insert(
        "cesaro_raw_tail_defect".into(),
        Witness::Real(ergodic.certificate.raw_tail_defect),
    );
    if let Some(limit) = &ergodic.limit {
        witnesses.insert("mean_ergodic_limit".into(), Witness::Matrix(limit.clone()));
    }
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "thm-3.1",
        vec![pos_cond, nci_cond, bounded_cond],
        vec![concl],
        tolerance_record(cfg, a),
        witnesses,
        cfg.seed,
    ))
}

/// Bounded eventually positive semigroup with spectral bound 0 has
/// peripheral spectrum exactly `{0}`.
pub fn check_lemma32(a: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = semigroup_positivity_hypothesis(a, cfg)?;
    let data = eig(a, default_tol_cluster(a))?;
    let flags = semigroup_spectral_flags(&data, cfg.tol_conv);

    let bounded_cond = Condition::new(
        "semigroup-bounded",
        flags.bounded,
        format!("spectral bound {:.6e}", flags.spectral_bound),
    );
    let zero_bound_cond = Condition::new(
        "spectral-bound-is-zero",
        flags.spectral_bound.abs() <= cfg.tol_conv,
        format!("s = {:.6e}", flags.spectral_bound),
    );

    let singleton = flags
        .peripheral
        .iter()
        .all(|z| (z - Complex64::new(flags.spectral_bound, 0.0)).norm() <= cfg.tol_conv + data.tol_cluster);
    let concl = Condition::new(
        "peripheral-spectrum-is-singleton-zero",
        singleton,
        format!(
            "peripheral set: {:?}",
            flags.peripheral.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>()
        ),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert(
        "peripheral_set".into(),
        Witness::ComplexList(flags.peripheral.iter().map(|&z| z.into()).collect()),
    );
    witnesses.insert("spectral_bound".into(), Witness::Real(flags.spectral_bound));
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "lem-3.2",
        vec![pos_cond, bounded_cond, zero_bound_cond],
        vec![concl],
        tolerance_record(cfg, a),
        witnesses,
        cfg.seed,
    ))
}

/// Balancing characterization: the rescaled semigroup converges in operator
/// norm iff it is norm continuous at infinity (vacuous), bounded (the live
/// condition) and the bound is a pole of the resolvent (vacuous).
pub fn check_thm51(a: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = semigroup_positivity_hypothesis(a, cfg)?;
    let data = eig(a, default_tol_cluster(a))?;
    let s = data.spectral_bound();

    let shifted = shift(a, s);
    let shifted_data = eig(&shifted, default_tol_cluster(&shifted))?;
    let shifted_flags = semigroup_spectral_flags(&shifted_data, cfg.tol_conv);

    let balancing = uniform_balancing_verdict(a, cfg.t_max, cfg.tol_conv)?;
    let conditions = shifted_flags.bounded; // (i) and (iii) always hold here
    let equivalence = balancing.converges == conditions;

    let concl_eq = Condition::new(
        "balancing-iff-rescaled-bounded",
        equivalence,
        format!(
            "balancing = {}, rescaled semigroup bounded = {} (live content; the other two conditions are vacuous on matrices)",
            balancing.converges, shifted_flags.bounded
        ),
    );
    let nci = norm_continuity_at_infinity(a);
    let concl_nci = Condition::vacuous("condition-i-norm-continuous-at-infinity", nci.note);
    let concl_pole = Condition::vacuous(
        "condition-iii-spectral-bound-is-pole",
        "every matrix eigenvalue is a pole of the resolvent",
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("spectral_bound".into(), Witness::Real(s));
    witnesses.insert("balancing_converges".into(), Witness::Bool(balancing.converges));
    witnesses.insert("rescaled_bounded".into(), Witness::Bool(shifted_flags.bounded));
    witnesses.insert(
        "pole_order_at_bound".into(),
        Witness::Int(shifted_flags.pole_order_at_bound as i64),
    );
    if let Some(limit) = &balancing.limit {
        witnesses.insert("balancing_limit".into(), Witness::Matrix(limit.clone()));
    }
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "thm-5.1",
        vec![pos_cond],
        vec![concl_eq, concl_nci, concl_pole],
        tolerance_record(cfg, a),
        witnesses,
        cfg.seed,
    ))
}

/// Finite-rank balancing characterization: the rescaled semigroup converges
/// to a finite-rank operator iff the spectral bound is a first-order pole
/// (with finite-dimensional spectral space, vacuous here). Rank is always
/// finite on matrices; its value is reported.
pub fn check_thm52(a: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = semigroup_positivity_hypothesis(a, cfg)?;
    let data = eig(a, default_tol_cluster(a))?;
    let s = data.spectral_bound();
    let bound_cluster = data
        .clusters
        .iter()
        .filter(|c| (c.value.re - s).abs() <= data.tol_cluster * 2.0)
        .max_by_key(|c| c.index)
        .expect("bound attained");
    let pole_order = bound_cluster.index;

    let balancing = uniform_balancing_verdict(a, cfg.t_max, cfg.tol_conv)?;
    let left = balancing.converges; // limit rank is automatically finite
    let right = pole_order == 1;
    let equivalence = left == right;

    let concl_eq = Condition::new(
        "finite-rank-balancing-iff-first-order-pole",
        equivalence,
        format!(
            "balancing with finite-rank limit = {} (rank {:?}), pole order at bound = {}",
            left, balancing.certificate.limit_rank, pole_order
        ),
    );
    let concl_dim = Condition::vacuous(
        "spectral-space-finite-dimensional",
        "spectral spaces are finite-dimensional on matrices",
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("spectral_bound".into(), Witness::Real(s));
    witnesses.insert("pole_order_at_bound".into(), Witness::Int(pole_order as i64));
    if let Some(rank) = balancing.certificate.limit_rank {
        witnesses.insert("limit_rank".into(), Witness::Int(rank as i64));
    }
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "thm-5.2",
        vec![pos_cond],
        vec![concl_eq, concl_dim],
        tolerance_record(cfg, a),
        witnesses,
        cfg.seed,
    ))
}

/// Sharpest peripheral claim: when the bound is a first-order pole of the
/// resolvent (finite-dimensional spectral space is vacuous), the peripheral
/// spectrum is exactly `{s(A)}`: no second eigenvalue on the bounding line.
pub fn check_lemma53(a: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = semigroup_positivity_hypothesis(a, cfg)?;
    let data = eig(a, default_tol_cluster(a))?;
    let flags = semigroup_spectral_flags(&data, cfg.tol_conv);
    let s = flags.spectral_bound;

    let pole_cond = Condition::new(
        "spectral-bound-is-first-order-pole",
        flags.pole_order_at_bound == 1,
        format!("pole order at the bound = {}", flags.pole_order_at_bound),
    );

    let singleton = flags
        .peripheral
        .iter()
        .all(|z| (z - Complex64::new(s, 0.0)).norm() <= cfg.tol_conv + data.tol_cluster);
    let concl = Condition::new(
        "peripheral-spectrum-is-singleton-at-bound",
        singleton,
        format!(
            "peripheral set: {:?}, bound {:.6e}",
            flags.peripheral.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>(),
            s
        ),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert(
        "peripheral_set".into(),
        Witness::ComplexList(flags.peripheral.iter().map(|&z| z.into()).collect()),
    );
    witnesses.insert("spectral_bound".into(), Witness::Real(s));
    witnesses.insert("spectrum".into(), format_spectrum(&data));
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "lem-5.3",
        vec![pos_cond, pole_cond],
        vec![concl],
        tolerance_record(cfg, a),
        witnesses,
        cfg.seed,
    ))
}

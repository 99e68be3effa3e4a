//! Checkers for single-operator results: the first-order-pole transfer to
//! peripheral spectral values, the eigenspace dimension bound, the
//! projection-domination dimension estimate, and the explicit resolvent
//! sequences with their domination inequality.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    format_spectrum, positivity_witness_value, power_positivity_hypothesis, tolerance_record,
    CheckConfig, CheckReport, Condition, Witness,
};
use crate::eig::{default_tol_cluster, eig};
use crate::error::{Error, Result};
use crate::matrix::{vec_modulus, ComplexMatrix};
use crate::positivity::is_positive_matrix_direction;
use crate::resolvent::resolvent;
use crate::spectral::spectral_projection_algebraic_with;
use crate::svd::{norm_two, rank};

/// First-order-pole transfer: when the spectral radius of an eventually
/// positive operator is a first-order pole, every peripheral spectral value
/// is one too, with spectral space no larger than the one at the radius.
pub fn check_niiro_sawashima(t: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = power_positivity_hypothesis(t, cfg)?;
    let data = eig(t, default_tol_cluster(t))?;
    let r = data.spectral_radius();
    let tol = cfg.tol_conv + data.tol_cluster;

    let radius_cluster = data.cluster_of(Complex64::new(r, 0.0), tol);
    let pole_cond = match radius_cluster {
        Some(c) => Condition::new(
            "spectral-radius-is-first-order-pole",
            c.index == 1,
            format!("r = {:.6e}, pole order {}", r, c.index),
        ),
        None => Condition::new(
            "spectral-radius-is-first-order-pole",
            false,
            format!("r = {:.6e} is not an eigenvalue", r),
        ),
    };
    let dim_f = radius_cluster.map_or(1, |c| c.algebraic);

    let peripheral: Vec<_> = data
        .clusters
        .iter()
        .filter(|c| (c.value.norm() - r).abs() <= tol)
        .collect();
    let all_first_order = peripheral.iter().all(|c| c.index == 1);
    let dims_bounded = peripheral.iter().all(|c| c.algebraic <= dim_f);

    let concl_poles = Condition::new(
        "peripheral-values-are-first-order-poles",
        all_first_order,
        format!(
            "peripheral (value, pole order): {:?}",
            peripheral.iter().map(|c| ((c.value.re, c.value.im), c.index)).collect::<Vec<_>>()
        ),
    );
    let concl_dims = Condition::new(
        "peripheral-spectral-space-dims-bounded",
        dims_bounded,
        format!(
            "dims {:?} <= dim at radius {}",
            peripheral.iter().map(|c| c.algebraic).collect::<Vec<_>>(),
            dim_f
        ),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("spectral_radius".into(), Witness::Real(r));
    witnesses.insert("dim_at_radius".into(), Witness::Int(dim_f as i64));
    witnesses.insert(
        "peripheral_set".into(),
        Witness::ComplexList(peripheral.iter().map(|c| c.value.into()).collect()),
    );
    witnesses.insert("spectrum".into(), format_spectrum(&data));
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "thm-4.1",
        vec![pos_cond, pole_cond],
        vec![concl_poles, concl_dims],
        tolerance_record(cfg, t),
        witnesses,
        cfg.seed,
    ))
}

/// Eigenspace bound at the peripheral values: kernel dimensions (geometric
/// multiplicities) of `lambda I - T` are bounded by the one at the radius.
pub fn check_eigenspace_bound_thm43(t: &ComplexMatrix, cfg: &CheckConfig) -> Result<CheckReport> {
    let (pos_cond, pos_cert) = power_positivity_hypothesis(t, cfg)?;
    let data = eig(t, default_tol_cluster(t))?;
    let r = data.spectral_radius();
    let tol = cfg.tol_conv + data.tol_cluster;

    let radius_cluster = data.cluster_of(Complex64::new(r, 0.0), tol);
    let pole_cond = match radius_cluster {
        Some(c) => Condition::new(
            "spectral-radius-is-first-order-pole",
            c.index == 1,
            format!("r = {:.6e}, pole order {}", r, c.index),
        ),
        None => Condition::new(
            "spectral-radius-is-first-order-pole",
            false,
            format!("r = {:.6e} is not an eigenvalue", r),
        ),
    };
    let dim_radius = radius_cluster.map_or(1, |c| c.geometric);

    let peripheral: Vec<_> = data
        .clusters
        .iter()
        .filter(|c| (c.value.norm() - r).abs() <= tol)
        .collect();
    let bounded = peripheral.iter().all(|c| c.geometric <= dim_radius);
    let concl = Condition::new(
        "peripheral-kernel-dims-bounded",
        bounded,
        format!(
            "geometric multiplicities {:?} <= {} at the radius",
            peripheral.iter().map(|c| c.geometric).collect::<Vec<_>>(),
            dim_radius
        ),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("spectral_radius".into(), Witness::Real(r));
    witnesses.insert("kernel_dim_at_radius".into(), Witness::Int(dim_radius as i64));
    witnesses.insert(
        "peripheral_set".into(),
        Witness::ComplexList(peripheral.iter().map(|c| c.value.into()).collect()),
    );
    witnesses.insert("positivity_witness".into(), positivity_witness_value(&pos_cert));

    Ok(CheckReport::assemble(
        "thm-4.3",
        vec![pos_cond, pole_cond],
        vec![concl],
        tolerance_record(cfg, t),
        witnesses,
        cfg.seed,
    ))
}

/// Domination dimension estimate: if `P` is a projection and
/// `|Qf| <= P|f|` for all `f` (on entrywise-ordered coordinate space this
/// is exactly `|Q_ij| <= P_ij`), then `dim ker(I - Q) <= rank P`.
pub fn check_domination_lemma42(
    q: &ComplexMatrix,
    p: &ComplexMatrix,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let n = q.require_square()?;
    if p.rows() != n || p.cols() != n {
        return Err(Error::Dimension(format!(
            "operators must have equal square shapes, got {}x{} and {}x{}",
            q.rows(),
            q.cols(),
            p.rows(),
            p.cols()
        )));
    }

    let tol_proj = 1e-8 * (1.0 + norm_two(p));
    let idem_defect = norm_two(&(&(p * p) - p));
    let proj_cond = Condition::new(
        "p-is-projection",
        idem_defect <= tol_proj,
        format!("||P^2 - P|| = {idem_defect:.3e}"),
    );

    let tol_dom = cfg.resolved_tol_pos(p);
    let mut entrywise = true;
    let mut worst_entry = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            let margin = q[(i, j)].norm() - p[(i, j)].re;
            worst_entry = worst_entry.max(margin);
            if margin > tol_dom || p[(i, j)].im.abs() > tol_dom {
                entrywise = false;
            }
        }
    }

    // Vector-level evidence for the equivalence of the entrywise test with
    // |Qf| <= P|f| on all f.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4c4d_3432);
    let mut worst_vec = f64::NEG_INFINITY;
    for _ in 0..cfg.sample_count.min(200) {
        let f: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let qf = vec_modulus(&q.mul_vec(&f));
        let f_mod: Vec<Complex64> = f.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
        let pf = p.mul_vec(&f_mod);
        for i in 0..n {
            worst_vec = worst_vec.max(qf[i] - pf[i].re);
        }
    }
    let dom_cond = Condition::new(
        "p-dominates-q",
        entrywise,
        format!(
            "entrywise margin max(|Q_ij| - P_ij) = {worst_entry:.3e}; sampled max(|Qf| - P|f|) = {worst_vec:.3e}"
        ),
    );

    let eye = ComplexMatrix::identity(n);
    let fix_dim = n - rank(&(&eye - q), cfg.tol_rank)?;
    let rank_p = rank(p, cfg.tol_rank)?;
    let concl = Condition::new(
        "fixed-space-dim-bounded-by-projection-rank",
        fix_dim <= rank_p,
        format!("dim ker(I - Q) = {fix_dim}, rank P = {rank_p}"),
    );

    let mut witnesses = BTreeMap::new();
    witnesses.insert("fixed_space_dim".into(), Witness::Int(fix_dim as i64));
    witnesses.insert("projection_rank".into(), Witness::Int(rank_p as i64));
    witnesses.insert("entrywise_margin".into(), Witness::Real(worst_entry));
    witnesses.insert("sampled_margin".into(), Witness::Real(worst_vec));

    Ok(CheckReport::assemble(
        "lem-4.2",
        vec![proj_cond, dom_cond],
        vec![concl],
        tolerance_record(cfg, q),
        witnesses,
        cfg.seed,
    ))
}

/// Explicit resolvent sequences at a peripheral value `lambda` of `T`
/// (rescaled so the spectral radius is 1, per their derivation):
///
/// ```text
/// Q_n = (r_n l - l) Res(r_n l, T),   P_n = (r_n - 1) Res(r_n, T),
/// R_n = -(r_n - 1)    sum_{k<k0} (r_n l)^{-(k+1)} T^k,
/// S_n =  (r_n l - l)  sum_{k<k0} (r_n l)^{-(k+1)} T^k,   r_n = 1 + 1/n.
/// ```
///
/// Conclusions: (a) the entrywise domination
/// `|Q_n f| <= |S_n f| + (R_n + P_n)|f|` holds with slack at least `-1e-10`
/// on sampled and basis vectors, (b) `||R_n||` and `||S_n||` decrease toward
/// zero along the list, (c) `P_n` approaches the spectral projection at the
/// radius.
pub fn check_sequences_eq42(
    t: &ComplexMatrix,
    lambda: Complex64,
    k0: usize,
    n_list: &[usize],
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let n = t.require_square()?;
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::Parameter("n_list must be non-empty and positive".into()));
    }

    let data = eig(t, default_tol_cluster(t))?;
    let r = data.spectral_radius();
    if r <= cfg.tol_conv {
        return Err(Error::Parameter(format!(
            "spectral radius {r:.3e} too small to normalize"
        )));
    }
    let t_hat = t.scale_re(1.0 / r);
    let lambda_hat = lambda / r;
    let data_hat = eig(&t_hat, default_tol_cluster(&t_hat))?;

    let peripheral_cond = Condition::new(
        "lambda-on-the-peripheral-circle",
        (lambda_hat.norm() - 1.0).abs() <= cfg.tol_conv + data_hat.tol_cluster,
        format!("|lambda|/r = {:.12}", lambda_hat.norm()),
    );

    // Validate the positivity exponent: T^k positive for all tested k >= k0.
    let tol_pos = cfg.resolved_tol_pos(&t_hat);
    let mut direction = ComplexMatrix::identity(n);
    let mut positive_from_k0 = true;
    let scan_top = cfg.n_max.max(k0 + 16);
    for k in 1..=scan_top {
        direction = &direction * &t_hat;
        let scale = direction.norm_max();
        if scale > 0.0 {
            direction = direction.scale_re(1.0 / scale);
        }
        if k >= k0 && !is_positive_matrix_direction(&direction, tol_pos) {
            positive_from_k0 = false;
            break;
        }
    }
    let k0_cond = Condition::new(
        "powers-positive-from-k0",
        positive_from_k0,
        format!("T^k checked positive for k in [{k0}, {scan_top}]"),
    );

    // Spectral projection at the radius of the rescaled operator.
    let radius_cluster = data_hat.cluster_of(Complex64::ONE, cfg.tol_conv + data_hat.tol_cluster);
    let projection = match radius_cluster {
        Some(c) => Some(spectral_projection_algebraic_with(&t_hat, &data_hat, c.value, cfg.tol_rank)?.projection),
        None => None,
    };
    let radius_eig_cond = Condition::new(
        "spectral-radius-is-an-eigenvalue",
        projection.is_some(),
        format!("nearest eigenvalue to 1: {:?}", data_hat.nearest(Complex64::ONE)),
    );

    // Precompute powers of the rescaled operator for the finite sums.
    let mut powers = Vec::with_capacity(k0.max(1));
    powers.push(ComplexMatrix::identity(n));
    for _ in 1..k0 {
        let next = powers.last().unwrap() * &t_hat;
        powers.push(next);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4551_3432);
    let mut samples: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let mut e = vec![Complex64::ZERO; n];
            e[i] = Complex64::ONE;
            e
        })
        .collect();
    for _ in 0..cfg.sample_count {
        samples.push(
            (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        );
    }

    let mut min_slack = f64::INFINITY;
    let mut max_im_residue: f64 = 0.0;
    let mut r_norms = Vec::with_capacity(n_list.len());
    let mut s_norms = Vec::with_capacity(n_list.len());
    let mut p_defects = Vec::with_capacity(n_list.len());

    for &nn in n_list {
        let r_n = 1.0 + 1.0 / nn as f64;
        let shift_q = lambda_hat * r_n;
        let coeff_q = shift_q - lambda_hat;
        let coeff_p = Complex64::new(r_n - 1.0, 0.0);

        let q_n = resolvent(&t_hat, shift_q)?.scale(coeff_q);
        let p_n = resolvent(&t_hat, Complex64::new(r_n, 0.0))?.scale(coeff_p);

        let mut tail_sum = ComplexMatrix::zeros(n, n);
        for (k, tk) in powers.iter().enumerate().take(k0) {
            let w = shift_q.powi(-(k as i32) - 1);
            tail_sum = &tail_sum + &tk.scale(w);
        }
        let r_n_op = tail_sum.scale(-coeff_p);
        let s_n_op = tail_sum.scale(coeff_q);

        r_norms.push(norm_two(&r_n_op));
        s_norms.push(norm_two(&s_n_op));
        if let Some(p) = &projection {
            p_defects.push(norm_two(&(&p_n - p)));
        }

        let middle = &p_n + &r_n_op;
        for f in &samples {
            let qf = vec_modulus(&q_n.mul_vec(f));
            let sf = vec_modulus(&s_n_op.mul_vec(f));
            let f_mod: Vec<Complex64> = f.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
            let mf = middle.mul_vec(&f_mod);
            for i in 0..n {
                min_slack = min_slack.min(sf[i] + mf[i].re - qf[i]);
                max_im_residue = max_im_residue.max(mf[i].im.abs());
            }
        }
    }

    let concl_domination = Condition::new(
        "domination-inequality-holds",
        min_slack >= -1e-10 && max_im_residue <= 1e-8 * (1.0 + norm_two(t)),
        format!(
            "min entrywise slack {min_slack:.3e} over {} vectors and {} exponents; max imaginary residue {max_im_residue:.3e}",
            samples.len(),
            n_list.len()
        ),
    );

    let concl_vanishing = {
        let decreasing = decreasing_beyond(n_list, &r_norms, 8)
            && decreasing_beyond(n_list, &s_norms, 8);
        let toward_zero = toward_zero(&r_norms) && toward_zero(&s_norms);
        Condition::new(
            "correction-terms-vanish",
            decreasing && toward_zero,
            format!("||R_n|| = {r_norms:?}, ||S_n|| = {s_norms:?}"),
        )
    };

    let concl_projection = match &projection {
        Some(_) => {
            let decreasing = decreasing_beyond(n_list, &p_defects, 8);
            let final_small = *p_defects.last().unwrap()
                <= (0.1 * p_defects.first().unwrap()).max(1e-10);
            Condition::new(
                "resolvent-sequence-approaches-projection",
                decreasing && final_small,
                format!("||P_n - P|| = {p_defects:?}"),
            )
        }
        None => Condition::new(
            "resolvent-sequence-approaches-projection",
            false,
            "spectral radius is not an eigenvalue; no projection to compare".into(),
        ),
    };

    let mut witnesses = BTreeMap::new();
    witnesses.insert("lambda".into(), Witness::Complex(lambda.into()));
    witnesses.insert("k0".into(), Witness::Int(k0 as i64));
    witnesses.insert("spectral_radius".into(), Witness::Real(r));
    witnesses.insert(
        "n_list".into(),
        Witness::RealList(n_list.iter().map(|&k| k as f64).collect()),
    );
    witnesses.insert("min_slack".into(), Witness::Real(min_slack));
    witnesses.insert("r_norms".into(), Witness::RealList(r_norms.clone()));
    witnesses.insert("s_norms".into(), Witness::RealList(s_norms.clone()));
    witnesses.insert("projection_defects".into(), Witness::RealList(p_defects.clone()));

    Ok(CheckReport::assemble(
        "eq-4.2-sequences",
        vec![peripheral_cond, k0_cond, radius_eig_cond],
        vec![concl_domination, concl_vanishing, concl_projection],
        tolerance_record(cfg, t),
        witnesses,
        cfg.seed,
    ))
}

fn decreasing_beyond(n_list: &[usize], values: &[f64], threshold: usize) -> bool {
    n_list
        .windows(2)
        .zip(values.windows(2))
        .filter(|(ns, _)| ns[1] >= threshold)
        .all(|(_, vs)| vs[1] <= vs[0] + 1e-14)
}

fn toward_zero(values: &[f64]) -> bool {
    let first = values.first().copied().unwrap_or(0.0);
    let last = values.last().copied().unwrap_or(0.0);
    last <= first.max(1e-12)
}

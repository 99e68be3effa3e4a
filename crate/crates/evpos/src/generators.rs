//! Seeded instance families with exact ground truth.
//!
//! The flagship family builds `A = s P + K` from a strictly positive
//! rank-one projection `P = v w^T / (w^T v)` and a complement dynamics `K`
//! with prescribed spectrum: writing `V = [v | Z]` for an orthonormal basis
//! `Z` of the hyperplane `w^perp`, the matrix `A = V diag(s, B) V^{-1}`
//! satisfies `P = V E_11 V^{-1}`, `K P = P K = 0` and
//! `e^{t(A - sI)} = P + e^{t(B - sI)}-part -> P`. Every spectral quantity of
//! the bundle is therefore known in closed form.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::positivity::is_positive_matrix;
use crate::solve::lu;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `A = s P + K`: certified eventually positive semigroup with known
    /// projection, bound and gap.
    EvposSemigroup,
    /// Random off-diagonal non-negative generator with zero row sums:
    /// positive semigroup from the start, spectral bound 0.
    Metzler,
    /// `T = r P + C`: eventually positive powers with known radius and gap.
    EvposPower,
    /// The 2x2 rotation generator; nothing is eventually positive here.
    RotationCounterexample,
    /// The 2x2 nilpotent Jordan block: positive semigroup, second-order
    /// pole at the bound, rescaled semigroup unbounded.
    JordanCounterexample,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "evpos-semigroup" => Some(Family::EvposSemigroup),
            "metzler" => Some(Family::Metzler),
            "evpos-power" => Some(Family::EvposPower),
            "rotation-counterexample" => Some(Family::RotationCounterexample),
            "jordan-counterexample" => Some(Family::JordanCounterexample),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::EvposSemigroup => "evpos-semigroup",
            Family::Metzler => "metzler",
            Family::EvposPower => "evpos-power",
            Family::RotationCounterexample => "rotation-counterexample",
            Family::JordanCounterexample => "jordan-counterexample",
        }
    }
}

/// Tunables for the random families.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenParams {
    /// Spectral bound `s` of the dominant eigenvalue (semigroup family).
    pub spectral_bound: f64,
    /// Spectral radius `r` of the dominant eigenvalue (power family).
    pub spectral_radius: f64,
    /// Distance from the dominant eigenvalue to the rest of the spectrum
    /// (real-part gap for semigroups, modulus gap for powers).
    pub gap: f64,
    /// Rotation rate placed inside the complement dynamics.
    pub rotation: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            spectral_bound: 0.0,
            spectral_radius: 1.0,
            gap: 1.0,
            rotation: 1.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroundTruth {
    pub spectral_bound: Option<f64>,
    pub spectral_radius: Option<f64>,
    /// Spectral projection at the dominant eigenvalue, exact by
    /// construction.
    pub dominant_projection: Option<ComplexMatrix>,
    /// Distance from the dominant eigenvalue to the rest of the spectrum.
    pub spectral_gap: Option<f64>,
    /// Expected verdict per checker identifier.
    pub expected: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceBundle {
    pub matrix: ComplexMatrix,
    pub family: Family,
    pub ground_truth: GroundTruth,
    pub seed: u64,
}

pub fn generate(family: Family, n: usize, seed: u64, params: &GenParams) -> Result<InstanceBundle> {
    match family {
        Family::EvposSemigroup => evpos_semigroup(n, seed, params),
        Family::Metzler => metzler(n, seed),
        Family::EvposPower => evpos_power(n, seed, params),
        Family::RotationCounterexample => Ok(rotation_counterexample(seed)),
        Family::JordanCounterexample => Ok(jordan_counterexample(seed)),
    }
}

fn expected(entries: &[(&str, &str)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn rotation_counterexample(seed: u64) -> InstanceBundle {
    InstanceBundle {
        matrix: ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]),
        family: Family::RotationCounterexample,
        ground_truth: GroundTruth {
            spectral_bound: Some(0.0),
            spectral_radius: Some(1.0),
            dominant_projection: None,
            spectral_gap: None,
            expected: expected(&[
                ("thm-2.1", "hypotheses-not-met"),
                ("cor-2.2", "hypotheses-not-met"),
                ("thm-3.1", "hypotheses-not-met"),
                ("lem-3.2", "hypotheses-not-met"),
                ("lem-5.3", "hypotheses-not-met"),
            ]),
        },
        seed,
    }
}

fn jordan_counterexample(seed: u64) -> InstanceBundle {
    InstanceBundle {
        matrix: ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]),
        family: Family::JordanCounterexample,
        ground_truth: GroundTruth {
            spectral_bound: Some(0.0),
            spectral_radius: Some(0.0),
            dominant_projection: None,
            spectral_gap: None,
            expected: expected(&[
                ("cor-2.2", "confirmed"),
                ("thm-5.1", "confirmed"),
                ("thm-5.2", "confirmed"),
                ("thm-3.1", "hypotheses-not-met"),
            ]),
        },
        seed,
    }
}

fn metzler(n: usize, seed: u64) -> Result<InstanceBundle> {
    if n < 2 {
        return Err(Error::Parameter("metzler family needs n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4d45545a);
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let v = rng.gen_range(0.05..1.0);
                a[(i, j)] = Complex64::new(v, 0.0);
                row_sum += v;
            }
        }
        a[(i, i)] = Complex64::new(-row_sum, 0.0);
    }
    Ok(InstanceBundle {
        matrix: a,
        family: Family::Metzler,
        ground_truth: GroundTruth {
            spectral_bound: Some(0.0),
            spectral_radius: None,
            dominant_projection: None,
            spectral_gap: None,
            expected: expected(&[
                ("thm-2.1", "confirmed"),
                ("cor-2.2", "confirmed"),
                ("thm-3.1", "confirmed"),
                ("lem-3.2", "confirmed"),
                ("thm-5.1", "confirmed"),
                ("thm-5.2", "confirmed"),
                ("lem-5.3", "confirmed"),
            ]),
        },
        seed,
    })
}

/// Strictly positive pair (v, w) with entries in [0.2, 1] and an orthonormal
/// basis Z of the hyperplane orthogonal to w.
fn positive_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    // Householder reflection mapping e_1 to w/||w|| sends e_2..e_n to an
    // orthonormal basis of w^perp.
    let norm_w: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut u: Vec<f64> = w.iter().map(|x| x / norm_w).collect();
    u[0] -= 1.0;
    let unorm2: f64 = u.iter().map(|x| x * x).sum();
    let z: Vec<Vec<f64>> = (1..n)
        .map(|k| {
            let mut col = vec![0.0; n];
            col[k] = 1.0;
            if unorm2 > 1e-30 {
                let coef = 2.0 * u[k] / unorm2;
                for i in 0..n {
                    col[i] -= coef * u[i];
                }
            }
            col
        })
        .collect();
    (v, w, z)
}

/// Complement dynamics with prescribed eigenvalue real parts: a block
/// diagonal of rotation pairs and reals, conjugated by a random orthogonal
/// matrix. The extreme block is pinned at distance exactly `gap` below
/// `dominant` so the spectral gap is known.
fn complement_block(
    rng: &mut ChaCha8Rng,
    m: usize,
    dominant: f64,
    gap: f64,
    rotation: f64,
) -> ComplexMatrix {
    let mut b = ComplexMatrix::zeros(m, m);
    let mut placed = 0;
    let mut first = true;
    while placed < m {
        let re = if first {
            dominant - gap
        } else {
            dominant - gap - rng.gen_range(0.1..2.0)
        };
        if m - placed >= 2 && (first || rng.gen_bool(0.6)) {
            let om = rotation * rng.gen_range(0.5..1.5);
            b[(placed, placed)] = Complex64::new(re, 0.0);
            b[(placed + 1, placed + 1)] = Complex64::new(re, 0.0);
            b[(placed, placed + 1)] = Complex64::new(-om, 0.0);
            b[(placed + 1, placed)] = Complex64::new(om, 0.0);
            placed += 2;
        } else {
            b[(placed, placed)] = Complex64::new(re, 0.0);
            placed += 1;
        }
        first = false;
    }
    // Random orthogonal similarity (Householder of a random unit vector).
    let h: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let hn2: f64 = h.iter().map(|x| x * x).sum();
    if hn2 > 1e-12 {
        let q = ComplexMatrix::from_fn(m, m, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            Complex64::new(delta - 2.0 * h[i] * h[j] / hn2, 0.0)
        });
        b = &(&q * &b) * &q;
    }
    b
}

/// Assemble `V diag(d, B) V^{-1}` with `V = [v | Z]`, plus the exact
/// projection `P = v w^T / (w^T v)`.
fn assemble(
    v: &[f64],
    w: &[f64],
    z: &[Vec<f64>],
    dominant: f64,
    b: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = v.len();
    let mut basis = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        basis[(i, 0)] = Complex64::new(v[i], 0.0);
        for (k, col) in z.iter().enumerate() {
            basis[(i, k + 1)] = Complex64::new(col[i], 0.0);
        }
    }
    let mut d = ComplexMatrix::zeros(n, n);
    d[(0, 0)] = Complex64::new(dominant, 0.0);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            d[(i + 1, j + 1)] = b[(i, j)];
        }
    }
    let f = lu(&basis)?;
    if f.is_singular(1e-12) {
        return Err(Error::Parameter(
            "dominant direction nearly orthogonal to the positive pair".into(),
        ));
    }
    let a = &(&basis * &d) * &f.inverse();

    let wv: f64 = w.iter().zip(v).map(|(x, y)| x * y).sum();
    let p = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(v[i] * w[j] / wv, 0.0));
    Ok((a, p))
}

fn evpos_semigroup(n: usize, seed: u64, params: &GenParams) -> Result<InstanceBundle> {
    if n < 2 {
        return Err(Error::Parameter("evpos-semigroup family needs n >= 2".into()));
    }
    if !(params.gap > 0.0) {
        return Err(Error::Parameter(format!(
            "gap must be positive, got {}",
            params.gap
        )));
    }
    let s = params.spectral_bound;

    // Vary the draw and scale the rotation up until the generator has a
    // negative off-diagonal entry, so positivity genuinely fails at small
    // times.
    let mut rotation = params.rotation;
    for attempt in 0..24u64 {
        let mut attempt_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5345_4d49 ^ (attempt << 32));
        let (v, w, z) = positive_pair(&mut attempt_rng, n);
        let b = complement_block(&mut attempt_rng, n - 1, s, params.gap, rotation);
        let (a, p) = assemble(&v, &w, &z, s, &b)?;
        let has_negative_offdiag = (0..n).any(|i| {
            (0..n).any(|j| i != j && a[(i, j)].re < -1e-9)
        });
        if has_negative_offdiag {
            return Ok(InstanceBundle {
                matrix: a,
                family: Family::EvposSemigroup,
                ground_truth: GroundTruth {
                    spectral_bound: Some(s),
                    spectral_radius: None,
                    dominant_projection: Some(p),
                    spectral_gap: Some(params.gap),
                    expected: expected(&[
                        ("thm-2.1", if s <= 0.0 { "confirmed" } else { "hypotheses-not-met" }),
                        ("cor-2.2", "confirmed"),
                        ("thm-3.1", if s == 0.0 { "confirmed" } else { "hypotheses-not-met" }),
                        ("lem-3.2", if s == 0.0 { "confirmed" } else { "hypotheses-not-met" }),
                        ("thm-5.1", "confirmed"),
                        ("thm-5.2", "confirmed"),
                        ("lem-5.3", "confirmed"),
                    ]),
                },
                seed,
            });
        }
        rotation *= 1.4;
    }
    Err(Error::Parameter(
        "could not force a sign transient; increase the rotation parameter".into(),
    ))
}

fn evpos_power(n: usize, seed: u64, params: &GenParams) -> Result<InstanceBundle> {
    if n < 2 {
        return Err(Error::Parameter("evpos-power family needs n >= 2".into()));
    }
    let r = params.spectral_radius;
    if !(r > 0.0) || !(params.gap > 0.0) || params.gap >= r {
        return Err(Error::Parameter(format!(
            "need 0 < gap < spectral_radius, got gap {} radius {r}",
            params.gap
        )));
    }
    let rho = r - params.gap;

    let mut angle: f64 = 0.9;
    for attempt in 0..24u64 {
        let mut attempt_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x504f_5752 ^ (attempt << 32));
        let (v, w, z) = positive_pair(&mut attempt_rng, n);
        // Complement contraction of modulus exactly rho: rotation pairs
        // rho*[[cos, -sin],[sin, cos]] and reals +-rho.
        let m = n - 1;
        let mut b = ComplexMatrix::zeros(m, m);
        let mut placed = 0;
        while placed < m {
            if m - placed >= 2 {
                let th = angle * attempt_rng.gen_range(0.7..1.3);
                b[(placed, placed)] = Complex64::new(rho * th.cos(), 0.0);
                b[(placed + 1, placed + 1)] = Complex64::new(rho * th.cos(), 0.0);
                b[(placed, placed + 1)] = Complex64::new(-rho * th.sin(), 0.0);
                b[(placed + 1, placed)] = Complex64::new(rho * th.sin(), 0.0);
                placed += 2;
            } else {
                let sign = if attempt_rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                b[(placed, placed)] = Complex64::new(sign * rho * attempt_rng.gen_range(0.5..1.0), 0.0);
                placed += 1;
            }
        }
        let (t, p) = assemble(&v, &w, &z, r, &b)?;
        if !is_positive_matrix(&t, 1e-9) {
            return Ok(InstanceBundle {
                matrix: t,
                family: Family::EvposPower,
                ground_truth: GroundTruth {
                    spectral_bound: Some(r),
                    spectral_radius: Some(r),
                    dominant_projection: Some(p),
                    spectral_gap: Some(params.gap),
                    expected: expected(&[
                        ("thm-4.1", "confirmed"),
                        ("thm-4.3", "confirmed"),
                        ("eq-4.2-sequences", "confirmed"),
                    ]),
                },
                seed,
            });
        }
        angle *= 1.5;
    }
    Err(Error::Parameter(
        "could not force a sign transient in the power family".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics;
    use crate::eig::{default_tol_cluster, eig};
    use crate::positivity::{
        eventual_positivity_of_powers, eventual_positivity_of_semigroup, PositivityVerdict,
    };
    use crate::svd::norm_two;

    #[test]
    fn deterministic_under_seed() {
        let p = GenParams::default();
        let a = generate(Family::EvposSemigroup, 5, 7, &p).unwrap();
        let b = generate(Family::EvposSemigroup, 5, 7, &p).unwrap();
        assert_eq!(a.matrix, b.matrix);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn fixed_counterexamples() {
        let r = generate(Family::RotationCounterexample, 2, 0, &GenParams::default()).unwrap();
        assert_eq!(r.matrix, ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]));
        let j = generate(Family::JordanCounterexample, 2, 0, &GenParams::default()).unwrap();
        assert_eq!(j.matrix, ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]));
    }

    #[test]
    fn semigroup_family_ground_truth_is_recovered() {
        let params = GenParams::default();
        for seed in [1u64, 2, 3, 11, 42] {
            let bundle = generate(Family::EvposSemigroup, 4, seed, &params).unwrap();
            let a = &bundle.matrix;
            let gt = &bundle.ground_truth;
            let data = eig(a, default_tol_cluster(a)).unwrap();
            assert!(
                (data.spectral_bound() - gt.spectral_bound.unwrap()).abs() < 1e-7,
                "seed {seed}: bound mismatch"
            );
            // Exact limit: e^{t(A - s)} -> P.
            let p = gt.dominant_projection.as_ref().unwrap();
            let e = dynamics::semigroup_at(&dynamics::shift(a, gt.spectral_bound.unwrap()), 40.0)
                .unwrap();
            assert!(
                e.max_abs_diff(p) < 1e-7 * (1.0 + norm_two(p)),
                "seed {seed}: rescaled semigroup does not settle on P"
            );
            // P is idempotent and strictly positive.
            assert!((&(p * p) - p).norm_max() < 1e-12);
            assert!(p.entries().iter().all(|z| z.re > 0.0 && z.im == 0.0));
        }
    }

    #[test]
    fn semigroup_family_has_sign_transient_and_certificate() {
        let params = GenParams::default();
        for seed in [5u64, 8, 13] {
            let bundle = generate(Family::EvposSemigroup, 3, seed, &params).unwrap();
            let cert =
                eventual_positivity_of_semigroup(&bundle.matrix, 30.0, 120, 1e-9).unwrap();
            assert_eq!(
                cert.verdict,
                PositivityVerdict::CertifiedStrictlyEventuallyPositive,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn power_family_certified_with_delay() {
        let params = GenParams {
            spectral_radius: 1.0,
            gap: 0.5,
            ..GenParams::default()
        };
        for seed in [1u64, 4, 9] {
            let bundle = generate(Family::EvposPower, 4, seed, &params).unwrap();
            let cert = eventual_positivity_of_powers(&bundle.matrix, 200, 1e-9).unwrap();
            assert_eq!(
                cert.verdict,
                PositivityVerdict::CertifiedStrictlyEventuallyPositive,
                "seed {seed}"
            );
            let data = eig(&bundle.matrix, default_tol_cluster(&bundle.matrix)).unwrap();
            assert!((data.spectral_radius() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn metzler_family_is_positive_and_balanced_at_zero() {
        let bundle = generate(Family::Metzler, 5, 3, &GenParams::default()).unwrap();
        let a = &bundle.matrix;
        // Off-diagonal entries non-negative, row sums zero.
        for i in 0..5 {
            let mut sum = 0.0;
            for j in 0..5 {
                if i != j {
                    assert!(a[(i, j)].re >= 0.0);
                }
                sum += a[(i, j)].re;
            }
            assert!(sum.abs() < 1e-12);
        }
        let data = eig(a, default_tol_cluster(a)).unwrap();
        assert!(data.spectral_bound().abs() < 1e-9);
    }

    #[test]
    fn ground_truth_gap_is_recovered() {
        let params = GenParams { gap: 1.2, ..GenParams::default() };
        for seed in [14u64, 27] {
            let bundle = generate(Family::EvposSemigroup, 5, seed, &params).unwrap();
            let data = eig(&bundle.matrix, default_tol_cluster(&bundle.matrix)).unwrap();
            let s = data.spectral_bound();
            let second = data
                .clusters
                .iter()
                .map(|c| c.value.re)
                .filter(|re| (re - s).abs() > 1e-6)
                .fold(f64::NEG_INFINITY, f64::max);
            let gap = s - second;
            assert!(
                (gap - 1.2).abs() < 1e-7,
                "seed {seed}: recovered gap {gap}"
            );
        }
    }

    #[test]
    fn infeasible_parameters_error() {
        let p = GenParams { gap: 0.0, ..GenParams::default() };
        assert!(matches!(
            generate(Family::EvposSemigroup, 4, 1, &p),
            Err(Error::Parameter(_))
        ));
        let p = GenParams { gap: 2.0, spectral_radius: 1.0, ..GenParams::default() };
        assert!(matches!(
            generate(Family::EvposPower, 4, 1, &p),
            Err(Error::Parameter(_))
        ));
    }
}

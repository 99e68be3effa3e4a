//! Singular values and null spaces via one-sided Jacobi orthogonalization.
//!
//! One-sided Jacobi delivers high relative accuracy for the small singular
//! values that drive rank and null-space decisions, which matters more here
//! than raw speed at the n <= 64 sizes this crate targets.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub struct Svd {
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, one column per singular value.
    pub right_vectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 60;

/// Singular values and right singular vectors of a (possibly rectangular)
/// matrix. Columns of `right_vectors` are orthonormal.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let mut w = m.clone();
    let ncols = w.cols();
    let mut v = ComplexMatrix::identity(ncols);

    // Columns below this squared norm are spent: their singular values sit
    // at the rounding floor, and rotating against them only chatters (the
    // eps-sized residue left after zeroing a parallel column stays fully
    // correlated with the survivor).
    let negligible = (f64::EPSILON * m.norm_fro()).powi(2);

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..ncols {
            for q in p + 1..ncols {
                let (a, b, g) = column_gram(&w, p, q);
                if a <= negligible || b <= negligible {
                    continue;
                }
                let scale = (a * b).sqrt();
                // The threshold sits well above per-rotation rounding so
                // converged pairs cannot chatter.
                if g.norm() <= 32.0 * f64::EPSILON * scale {
                    continue;
                }
                rotated = true;
                // Re-phase column q so the pair Gram matrix is real symmetric,
                // then apply the classical Jacobi rotation.
                let phase = g / g.norm();
                let tau = (b - a) / (2.0 * g.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate_columns(&mut w, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NumericalFailure {
                what: "one-sided Jacobi SVD",
                iterations: sweeps,
                norm: m.norm_one(),
            });
        }
    }

    let mut order: Vec<usize> = (0..ncols).collect();
    let norms: Vec<f64> = (0..ncols).map(|j| crate::matrix::vec_norm2(&w.column(j))).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right_vectors =
        ComplexMatrix::from_columns(&order.iter().map(|&j| v.column(j)).collect::<Vec<_>>());

    Ok(Svd {
        singular_values,
        right_vectors,
    })
}

fn column_gram(w: &ComplexMatrix, p: usize, q: usize) -> (f64, f64, Complex64) {
    let mut a = 0.0;
    let mut b = 0.0;
    let mut g = Complex64::ZERO;
    for i in 0..w.rows() {
        let x = w[(i, p)];
        let y = w[(i, q)];
        a += x.norm_sqr();
        b += y.norm_sqr();
        g += x.conj() * y;
    }
    (a, b, g)
}

fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let pc = phase.conj();
    for i in 0..m.rows() {
        let x = m[(i, p)];
        let y = m[(i, q)];
        m[(i, p)] = x * c - y * pc * s;
        m[(i, q)] = x * s + y * pc * c;
    }
}

/// Operator (spectral) norm.
pub fn norm_two(m: &ComplexMatrix) -> f64 {
    svd(m).map(|s| s.singular_values[0]).unwrap_or_else(|_| m.norm_fro())
}

/// Number of singular values exceeding `tol_rank` times the largest one.
/// The zero matrix has rank 0.
pub fn rank(m: &ComplexMatrix, tol_rank: f64) -> Result<usize> {
    m.check_finite()?;
    if tol_rank <= 0.0 {
        return Err(Error::Parameter(format!(
            "tol_rank must be positive, got {tol_rank}"
        )));
    }
    let sv = svd(m)?.singular_values;
    let top = sv[0];
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol_rank * top).count())
}

/// Rank against an absolute singular-value threshold; used for rank decisions
/// on matrix powers where the relevant scale is inherited from the base
/// matrix rather than from the power itself.
pub fn rank_with_threshold(m: &ComplexMatrix, threshold: f64) -> Result<usize> {
    let sv = svd(m)?.singular_values;
    Ok(sv.iter().filter(|&&s| s > threshold).count())
}

/// Orthonormal basis of the numerical null space (right singular vectors
/// whose singular values fall at or below `threshold`).
pub fn null_space(m: &ComplexMatrix, threshold: f64) -> Result<Vec<Vec<Complex64>>> {
    let s = svd(m)?;
    Ok(s.singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &sv)| sv <= threshold)
        .map(|(j, _)| s.right_vectors.column(j))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        let m = ComplexMatrix::identity(4);
        assert_eq!(rank(&m, 1e-10).unwrap(), 4);
        let s = svd(&m).unwrap();
        for sv in s.singular_values {
            assert!((sv - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = ComplexMatrix::zeros(3, 3);
        assert_eq!(rank(&m, 1e-10).unwrap(), 0);
    }

    #[test]
    fn rank_one_outer_product() {
        // (1/2) * [[1,1],[1,1]] is vv^T with v = (1,1)/sqrt(2).
        let m = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert_eq!(rank(&m, 1e-10).unwrap(), 1);
        let s = svd(&m).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_values_match_hand_computed_2x2() {
        // [[3, 0], [4, 5]] has singular values sqrt(45) and sqrt(5):
        // A^T A = [[25, 20], [20, 25]] has eigenvalues 45 and 5.
        let m = ComplexMatrix::from_real(&[&[3.0, 0.0], &[4.0, 5.0]]);
        let s = svd(&m).unwrap();
        assert!((s.singular_values[0] - 45.0_f64.sqrt()).abs() < 1e-12);
        assert!((s.singular_values[1] - 5.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn right_vectors_are_orthonormal_and_diagonalize_gram() {
        let m = ComplexMatrix::new(
            3,
            3,
            vec![
                Complex64::new(1.0, 0.5),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(0.25, 0.0),
                Complex64::new(-1.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.5),
                Complex64::new(1.0, 0.0),
                Complex64::new(-0.75, 0.25),
            ],
        )
        .unwrap();
        let s = svd(&m).unwrap();
        let v = &s.right_vectors;
        let gram = &v.adjoint() * v;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        // M v_j has length sigma_j.
        for j in 0..3 {
            let mv = m.mul_vec(&v.column(j));
            assert!(
                (crate::matrix::vec_norm2(&mv) - s.singular_values[j]).abs() < 1e-10
            );
        }
    }

    #[test]
    fn null_space_of_projector_complement() {
        let m = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let ns = null_space(&m, 1e-12).unwrap();
        assert_eq!(ns.len(), 1);
        // Null vector is proportional to (1, -1)/sqrt(2).
        let v = &ns[0];
        assert!((v[0] + v[1]).norm() < 1e-12);
        assert!((crate::matrix::vec_norm2(v) - 1.0).abs() < 1e-12);
    }
}

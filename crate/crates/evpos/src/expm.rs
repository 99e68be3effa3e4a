//! Matrix exponential by scaling-and-squaring with a diagonal Padé(6,6)
//! approximant, scaled so the 1-norm of the argument is below 1/2. At that
//! norm the Padé truncation error is far below double rounding, so accuracy
//! is governed by the squaring phase alone.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::solve;

/// Padé(6,6) numerator coefficients for exp; the denominator uses the same
/// coefficients with alternating signs.
const PADE6: [f64; 7] = [
    1.0,
    0.5,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

const SCALE_TARGET: f64 = 0.5;
const MAX_SQUARINGS: u32 = 1024;

pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    m.check_finite()?;

    if n == 1 {
        let e = m[(0, 0)].exp();
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(range_error(m));
        }
        return Ok(ComplexMatrix::diag(&[e]));
    }

    let norm = m.norm_one();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let s = if norm > SCALE_TARGET {
        (norm / SCALE_TARGET).log2().ceil() as u32
    } else {
        0
    };
    if s > MAX_SQUARINGS {
        return Err(range_error(m));
    }

    let scaled = m.scale_re(0.5f64.powi(s as i32));
    let mut result = pade6(&scaled)?;
    for _ in 0..s {
        result = &result * &result;
        if !result.is_finite() {
            return Err(range_error(m));
        }
    }
    Ok(result)
}

fn range_error(m: &ComplexMatrix) -> Error {
    Error::Range {
        context: "matrix exponential overflow".into(),
        magnitude: m.norm_one(),
        advice: "rescale the generator (subtract the spectral bound) before exponentiating".into(),
    }
}

fn pade6(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let eye = ComplexMatrix::identity(n);

    let mut powers = Vec::with_capacity(7);
    powers.push(eye.clone());
    for k in 1..=6 {
        let next = &powers[k - 1] * a;
        powers.push(next);
    }

    let mut num = ComplexMatrix::zeros(n, n);
    let mut den = ComplexMatrix::zeros(n, n);
    for k in 0..=6 {
        let term = powers[k].scale_re(PADE6[k]);
        num = &num + &term;
        if k % 2 == 0 {
            den = &den + &term;
        } else {
            den = &den - &term;
        }
    }
    solve::solve(&den, &num)
}

/// Exact evaluation of the pair `(e^{tA}, \int_0^t e^{sA} ds)` via the
/// exponential of the block matrix `[[tA, tI], [0, 0]]`: its top row is
/// `[e^{tA}, \int_0^t e^{sA} ds]`.
pub fn expm_with_integral(a: &ComplexMatrix, t: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.require_square()?;
    if !t.is_finite() {
        return Err(Error::Parameter(format!("non-finite time {t}")));
    }
    let mut block = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            block[(i, j)] = a[(i, j)] * t;
        }
        block[(i, n + i)] = Complex64::new(t, 0.0);
    }
    let e = expm(&block)?;
    let top_left = ComplexMatrix::from_fn(n, n, |i, j| e[(i, j)]);
    let top_right = ComplexMatrix::from_fn(n, n, |i, j| e[(i, n + j)]);
    Ok((top_left, top_right))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_gives_exact_identity() {
        let m = ComplexMatrix::zeros(3, 3);
        assert_eq!(expm(&m).unwrap(), ComplexMatrix::identity(3));
    }

    #[test]
    fn diagonal_exponential() {
        let m = ComplexMatrix::diag(&[Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.5)]);
        let e = expm(&m).unwrap();
        assert!((e[(0, 0)] - Complex64::new(1.0f64.exp(), 0.0)).norm() < 1e-14);
        assert!((e[(1, 1)] - Complex64::new(-2.0, 0.5).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-15);
        assert!(e[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn rotation_closed_form() {
        // exp(t [[0,-1],[1,0]]) = [[cos t, -sin t], [sin t, cos t]].
        let g = ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        for &t in &[0.1, 1.0, 2.5, 10.0] {
            let e = expm(&g.scale_re(t)).unwrap();
            let want = ComplexMatrix::from_real(&[
                &[t.cos(), -t.sin()],
                &[t.sin(), t.cos()],
            ]);
            assert!(e.max_abs_diff(&want) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn nilpotent_closed_form() {
        // exp(t [[0,1],[0,0]]) = [[1, t],[0, 1]].
        let g = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let e = expm(&g.scale_re(3.25)).unwrap();
        let want = ComplexMatrix::from_real(&[&[1.0, 3.25], &[0.0, 1.0]]);
        assert!(e.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn large_norm_requires_scaling() {
        let m = ComplexMatrix::diag(&[Complex64::new(50.0, 0.0), Complex64::new(-50.0, 0.0)]);
        let e = expm(&m).unwrap();
        assert!((e[(0, 0)].re - 50.0f64.exp()).abs() / 50.0f64.exp() < 1e-11);
        assert!(e[(1, 1)].re.abs() < 1e-20);
    }

    #[test]
    fn overflow_is_a_range_error() {
        let m = ComplexMatrix::diag(&[Complex64::new(1e4, 0.0)]);
        assert!(matches!(expm(&m), Err(Error::Range { .. })));
    }

    #[test]
    fn integral_block_matches_quadrature_free_identity() {
        // For A = 0 the integral over [0, t] is t*I.
        let a = ComplexMatrix::zeros(2, 2);
        let (e, integral) = expm_with_integral(&a, 4.0).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(integral.max_abs_diff(&ComplexMatrix::identity(2).scale_re(4.0)) < 1e-13);
    }

    #[test]
    fn integral_satisfies_fundamental_theorem() {
        // A * \int_0^t e^{sA} ds = e^{tA} - I.
        let a = ComplexMatrix::from_real(&[
            &[0.2, -0.7, 0.1],
            &[0.4, 0.0, -0.3],
            &[-0.1, 0.5, -0.6],
        ]);
        let t = 7.5;
        let (e, integral) = expm_with_integral(&a, t).unwrap();
        let lhs = &a * &integral;
        let rhs = &e - &ComplexMatrix::identity(3);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}

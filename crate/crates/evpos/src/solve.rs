//! LU factorization with partial pivoting for complex linear systems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub struct LuFactors {
    /// Packed L (unit lower) and U factors of the permuted matrix.
    lu: ComplexMatrix,
    /// Row permutation applied before factorization.
    perm: Vec<usize>,
    /// Smallest pivot modulus encountered.
    pub min_pivot: f64,
    /// Largest pivot modulus encountered.
    pub max_pivot: f64,
}

/// Factor a square matrix. Near-singular systems are reported through
/// `min_pivot`; callers decide how singular is too singular for them.
pub fn lu(m: &ComplexMatrix) -> Result<LuFactors> {
    let n = m.require_square()?;
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot = 0.0f64;

    for col in 0..n {
        let mut best = col;
        let mut best_val = a[(col, col)].norm();
        for row in col + 1..n {
            let v = a[(row, col)].norm();
            if v > best_val {
                best = row;
                best_val = v;
            }
        }
        if best != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(best, j)];
                a[(best, j)] = tmp;
            }
            perm.swap(col, best);
        }
        let pivot = a[(col, col)];
        let p = pivot.norm();
        min_pivot = min_pivot.min(p);
        max_pivot = max_pivot.max(p);
        if p == 0.0 {
            // Exactly singular; leave the zero column untouched so the
            // caller sees min_pivot == 0.
            continue;
        }
        for row in col + 1..n {
            let factor = a[(row, col)] / pivot;
            a[(row, col)] = factor;
            for j in col + 1..n {
                let sub = factor * a[(col, j)];
                a[(row, j)] -= sub;
            }
        }
    }

    Ok(LuFactors {
        lu: a,
        perm,
        min_pivot,
        max_pivot,
    })
}

impl LuFactors {
    pub fn is_singular(&self, tol: f64) -> bool {
        self.min_pivot <= tol * self.max_pivot.max(1.0)
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        // Forward: L y = Pb
        for i in 1..n {
            for k in 0..i {
                let sub = self.lu[(i, k)] * x[k];
                x[i] -= sub;
            }
        }
        // Backward: U x = y
        for i in (0..n).rev() {
            for k in i + 1..n {
                let sub = self.lu[(i, k)] * x[k];
                x[i] -= sub;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_mat(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let cols: Vec<Vec<Complex64>> = (0..b.cols()).map(|j| self.solve_vec(&b.column(j))).collect();
        ComplexMatrix::from_columns(&cols)
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_mat(&ComplexMatrix::identity(self.lu.rows()))
    }
}

/// Solve `A X = B`, failing on numerically singular systems.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let f = lu(a)?;
    if f.is_singular(1e-14) {
        return Err(Error::NumericalFailure {
            what: "linear solve (singular pivot)",
            iterations: 0,
            norm: a.norm_one(),
        });
    }
    Ok(f.solve_mat(b))
}

//! Complex Schur decomposition: Householder reduction to Hessenberg form
//! followed by shifted QR iteration with Givens rotations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub struct Schur {
    /// Unitary factor; `m = q * t * q^*`.
    pub q: ComplexMatrix,
    /// Upper triangular factor carrying the eigenvalues on its diagonal.
    pub t: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

const MAX_ITERS_PER_EIGENVALUE: usize = 60;

pub fn schur(m: &ComplexMatrix) -> Result<Schur> {
    let n = m.require_square()?;
    m.check_finite()?;

    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    reduce_to_hessenberg(&mut h, &mut q);

    if n == 1 {
        return Ok(Schur { q, t: h });
    }

    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut total_iters = 0usize;
    let mut since_deflation = 0usize;
    let max_iters = MAX_ITERS_PER_EIGENVALUE * n;

    while hi > 0 {
        // Deflate negligible subdiagonal entries at the bottom of the
        // active block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= eps * local.max(f64::MIN_POSITIVE) {
                h[(lo, lo - 1)] = Complex64::ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total_iters += 1;
        since_deflation += 1;
        if total_iters > max_iters {
            return Err(Error::NumericalFailure {
                what: "shifted QR iteration",
                iterations: total_iters,
                norm: m.norm_one(),
            });
        }

        let mu = if since_deflation.is_multiple_of(12) {
            // Occasional ad hoc shift to break symmetric stalls.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };

        qr_step(&mut h, &mut q, lo, hi, mu);
    }

    // Clean below-diagonal dust so downstream code sees an exactly
    // triangular factor.
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = Complex64::ZERO;
        }
    }

    Ok(Schur { q, t: h })
}

fn reduce_to_hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for the column below the subdiagonal.
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = crate::matrix::vec_norm2(&v);
        if norm_x == 0.0 {
            continue;
        }
        let phase = if v[0] == Complex64::ZERO {
            Complex64::ONE
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase * norm_x;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // h <- H h with H = I - beta v v^* acting on rows k+1..n.
        for j in k..n {
            let w: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            let w = w * beta;
            for i in 0..v.len() {
                let sub = w * v[i];
                h[(k + 1 + i, j)] -= sub;
            }
        }
        // h <- h H on columns k+1..n.
        for i in 0..n {
            let w: Complex64 = (0..v.len()).map(|l| h[(i, k + 1 + l)] * v[l]).sum();
            let w = w * beta;
            for l in 0..v.len() {
                let sub = w * v[l].conj();
                h[(i, k + 1 + l)] -= sub;
            }
        }
        // q <- q H.
        for i in 0..n {
            let w: Complex64 = (0..v.len()).map(|l| q[(i, k + 1 + l)] * v[l]).sum();
            let w = w * beta;
            for l in 0..v.len() {
                let sub = w * v[l].conj();
                q[(i, k + 1 + l)] -= sub;
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        for i in k + 2..n {
            h[(i, k)] = Complex64::ZERO;
        }
    }
}

fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let mid = (a + d) * 0.5;
    let disc = (mid * mid - (a * d - b * c)).sqrt();
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

struct Givens {
    c: f64,
    s: Complex64,
}

/// Rotation with `G (f, g)^T = (r, 0)^T`, `G = [[c, s], [-conj(s), c]]`.
fn givens(f: Complex64, g: Complex64) -> Givens {
    if g == Complex64::ZERO {
        return Givens {
            c: 1.0,
            s: Complex64::ZERO,
        };
    }
    if f == Complex64::ZERO {
        return Givens {
            c: 0.0,
            s: g.conj() / g.norm(),
        };
    }
    let d = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = f.norm() / d;
    let s = (f / f.norm()) * g.conj() / d;
    Givens { c, s }
}

/// One explicit single-shift QR step on the active block `lo..=hi`.
fn qr_step(h: &mut ComplexMatrix, q: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    let n = h.rows();
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }

    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let g = givens(h[(k, k)], h[(k + 1, k)]);
        // Apply from the left to rows k, k+1.
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = g.c * x + g.s * y;
            h[(k + 1, j)] = -g.s.conj() * x + g.c * y;
        }
        h[(k + 1, k)] = Complex64::ZERO;
        rotations.push(g);
    }
    for (idx, g) in rotations.iter().enumerate() {
        let k = lo + idx;
        // Apply G^* from the right to columns k, k+1.
        let top = (k + 2).min(hi + 1);
        for i in 0..top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * g.c + y * g.s.conj();
            h[(i, k + 1)] = -x * g.s + y * g.c;
        }
        for i in 0..n {
            let x = q[(i, k)];
            let y = q[(i, k + 1)];
            q[(i, k)] = x * g.c + y * g.s.conj();
            q[(i, k + 1)] = -x * g.s + y * g.c;
        }
    }

    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reassemble(s: &Schur) -> ComplexMatrix {
        &(&s.q * &s.t) * &s.q.adjoint()
    }

    fn assert_unitary(q: &ComplexMatrix, tol: f64) {
        let gram = &q.adjoint() * q;
        assert!(
            gram.max_abs_diff(&ComplexMatrix::identity(q.rows())) < tol,
            "factor is not unitary"
        );
    }

    #[test]
    fn diagonal_matrix_is_its_own_schur_form() {
        let m = ComplexMatrix::diag(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]);
        let s = schur(&m).unwrap();
        assert_unitary(&s.q, 1e-13);
        assert!(reassemble(&s).max_abs_diff(&m) < 1e-12);
        let mut ev: Vec<f64> = s.eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 2.0).abs() < 1e-12);
        assert!((ev[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        // Characteristic polynomial of [[0,-1],[1,0]] is x^2 + 1.
        let m = ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let s = schur(&m).unwrap();
        let mut ev = s.eigenvalues();
        ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!(reassemble(&s).max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn random_matrix_factorization_residual_is_small() {
        // Deterministic pseudo-random fill, scaled to norm ~ 1.
        let n = 8;
        let mut seedval = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seedval = seedval.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seedval >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
        let s = schur(&m).unwrap();
        assert_unitary(&s.q, 1e-12);
        assert!(reassemble(&s).max_abs_diff(&m) < 1e-11 * (1.0 + m.norm_one()));
        // Strictly lower part of t is exactly zero.
        for i in 1..n {
            for j in 0..i {
                assert_eq!(s.t[(i, j)], Complex64::ZERO);
            }
        }
    }

    #[test]
    fn jordan_block_eigenvalues_cluster_at_one() {
        let m = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let s = schur(&m).unwrap();
        for ev in s.eigenvalues() {
            assert!((ev - Complex64::ONE).norm() < 1e-7);
        }
        // Trace is exact, so the mean of the eigenvalues is accurate.
        let mean = (s.eigenvalues()[0] + s.eigenvalues()[1]) * 0.5;
        assert!((mean - Complex64::ONE).norm() < 1e-13);
    }
}

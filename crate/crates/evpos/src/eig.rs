//! Eigenstructure: clustered eigenvalues, eigenvectors, multiplicities and
//! the index (size of the largest Jordan block) of each eigenvalue cluster.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::schur::{schur, Schur};
use crate::svd;

/// Default relative rank tolerance.
pub const DEFAULT_TOL_RANK: f64 = 1e-10;

/// Default clustering tolerance, scale-aware: `1e-7 * (1 + ||M||)`.
pub fn default_tol_cluster(m: &ComplexMatrix) -> f64 {
    1e-7 * (1.0 + svd::norm_two(m))
}

#[derive(Debug, Clone)]
pub struct EigenCluster {
    /// Cluster representative (mean of the merged computed eigenvalues).
    pub value: Complex64,
    /// Schur positions merged into this cluster.
    pub members: Vec<usize>,
    pub algebraic: usize,
    pub geometric: usize,
    /// Smallest k with ker((vI - M)^k) = ker((vI - M)^{k+1}); the pole order
    /// of the resolvent at this eigenvalue.
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct EigenData {
    /// Computed eigenvalues in Schur order, one per matrix dimension.
    pub values: Vec<Complex64>,
    /// Clusters merged within the clustering tolerance, sorted by descending
    /// real part (ties by ascending imaginary part).
    pub clusters: Vec<EigenCluster>,
    /// Unit right eigenvectors, column j belonging to `values[j]`.
    pub right_vectors: ComplexMatrix,
    /// Unit left eigenvectors, row j belonging to `values[j]`
    /// (row * M = value * row).
    pub left_vectors: ComplexMatrix,
    pub tol_cluster: f64,
}

impl EigenData {
    pub fn spectral_bound(&self) -> f64 {
        self.clusters.iter().map(|c| c.value.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.clusters.iter().map(|c| c.value.norm()).fold(0.0, f64::max)
    }

    pub fn cluster_of(&self, lambda: Complex64, tol: f64) -> Option<&EigenCluster> {
        self.clusters
            .iter()
            .filter(|c| (c.value - lambda).norm() <= tol)
            .min_by(|a, b| {
                let da = (a.value - lambda).norm();
                let db = (b.value - lambda).norm();
                da.partial_cmp(&db).unwrap()
            })
    }

    pub fn nearest(&self, z: Complex64) -> (Complex64, f64) {
        self.clusters
            .iter()
            .map(|c| (c.value, (c.value - z).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("at least one cluster")
    }

    /// Distance from z to the spectrum.
    pub fn distance_to_spectrum(&self, z: Complex64) -> f64 {
        self.nearest(z).1
    }
}

/// Eigenvalues clustered within `tol_cluster`, with unit eigenvectors and
/// per-cluster multiplicities obtained from rank tests on powers of
/// `(vI - M)`.
pub fn eig(m: &ComplexMatrix, tol_cluster: f64) -> Result<EigenData> {
    m.require_square()?;
    if tol_cluster <= 0.0 {
        return Err(Error::Parameter(format!(
            "tol_cluster must be positive, got {tol_cluster}"
        )));
    }
    let s = schur(m)?;
    let values = s.eigenvalues();

    let right_vectors = right_vectors_from_schur(&s);
    let left_vectors = left_vectors_from_schur(&s);

    let mut clusters = cluster_values(&values, tol_cluster);
    for c in &mut clusters {
        let (geometric, index) = multiplicities(m, c.value, c.members.len(), DEFAULT_TOL_RANK, tol_cluster)?;
        c.geometric = geometric;
        c.index = index;
    }

    Ok(EigenData {
        values,
        clusters,
        right_vectors,
        left_vectors,
        tol_cluster,
    })
}

fn cluster_values(values: &[Complex64], tol: f64) -> Vec<EigenCluster> {
    let n = values.len();
    // Single-linkage merge via union-find.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != c {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(g) => groups[g].push(i),
            None => {
                roots.push(r);
                groups.push(vec![i]);
            }
        }
    }
    let mut clusters: Vec<EigenCluster> = groups
        .into_iter()
        .map(|members| {
            let sum: Complex64 = members.iter().map(|&i| values[i]).sum();
            let value = sum / members.len() as f64;
            let algebraic = members.len();
            EigenCluster {
                value,
                members,
                algebraic,
                geometric: 1,
                index: 1,
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        b.value
            .re
            .partial_cmp(&a.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    clusters
}

/// Geometric multiplicity and index of an eigenvalue via rank decisions on
/// powers of `B = lambda I - M`.
///
/// Thresholds for the k-th power are anchored at the scale of `B^k` inherited
/// from the base matrix: clustering fuzz of size tol_cluster in B compounds
/// to roughly `tol_cluster * (1 + ||B||)^(k-1)` in `B^k`, so a purely
/// relative cutoff on `B^k` would misread nearly-nilpotent powers.
fn multiplicities(
    m: &ComplexMatrix,
    value: Complex64,
    cluster_size: usize,
    tol_rank: f64,
    tol_cluster: f64,
) -> Result<(usize, usize)> {
    let n = m.rows();
    let b = &ComplexMatrix::diag(&vec![value; n]) - m;
    let norm_b = svd::norm_two(&b);

    let mut ranks = Vec::new();
    let mut power = ComplexMatrix::identity(n);
    let mut scale = 1.0;
    for _ in 1..=cluster_size + 1 {
        power = &power * &b;
        let sv = svd::svd(&power)?.singular_values;
        let threshold = (tol_rank * sv[0]).max(tol_cluster * scale);
        ranks.push(sv.iter().filter(|&&s| s > threshold).count());
        scale *= 1.0 + norm_b;
        if ranks.len() >= 2 && ranks[ranks.len() - 1] == ranks[ranks.len() - 2] {
            break;
        }
    }

    let geometric = (n - ranks[0]).clamp(1, cluster_size);
    let index = if ranks.len() >= 2 && ranks[ranks.len() - 1] == ranks[ranks.len() - 2] {
        (ranks.len() - 1).clamp(1, cluster_size)
    } else {
        cluster_size
    };
    Ok((geometric, index))
}

/// Smallest k with `ker((lambda I - M)^k) = ker((lambda I - M)^{k+1})`.
/// Fails when lambda is not an eigenvalue within the clustering tolerance.
pub fn matrix_index(m: &ComplexMatrix, lambda: Complex64, tol_rank: f64) -> Result<usize> {
    if tol_rank <= 0.0 {
        return Err(Error::Parameter(format!(
            "tol_rank must be positive, got {tol_rank}"
        )));
    }
    let tol_cluster = default_tol_cluster(m);
    let data = eig(m, tol_cluster)?;
    let cluster = data.cluster_of(lambda, tol_cluster).ok_or_else(|| {
        let (nearest, distance) = data.nearest(lambda);
        Error::NotASpectralValue {
            point: lambda,
            nearest,
            distance,
        }
    })?;
    let (_, index) = multiplicities(m, cluster.value, cluster.algebraic, tol_rank, tol_cluster)?;
    Ok(index)
}

fn right_vectors_from_schur(s: &Schur) -> ComplexMatrix {
    let n = s.t.rows();
    let t = &s.t;
    let smallnum = f64::EPSILON * (1.0 + t.norm_one());
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut x = vec![Complex64::ZERO; n];
        x[k] = Complex64::ONE;
        for j in (0..k).rev() {
            let rhs: Complex64 = (j + 1..=k).map(|l| t[(j, l)] * x[l]).sum();
            let mut den = t[(j, j)] - lambda;
            if den.norm() < smallnum {
                den = Complex64::new(smallnum, 0.0);
            }
            x[j] = -rhs / den;
        }
        let v = s.q.mul_vec(&x);
        let norm = crate::matrix::vec_norm2(&v);
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_columns(&cols)
}

fn left_vectors_from_schur(s: &Schur) -> ComplexMatrix {
    let n = s.t.rows();
    let t = &s.t;
    let smallnum = f64::EPSILON * (1.0 + t.norm_one());
    let qh = s.q.adjoint();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        // Row vector r with r (T - lambda I) = 0, r[j] = 0 for j < k.
        let mut r = vec![Complex64::ZERO; n];
        r[k] = Complex64::ONE;
        for j in k + 1..n {
            let rhs: Complex64 = (k..j).map(|l| r[l] * t[(l, j)]).sum();
            let mut den = t[(j, j)] - lambda;
            if den.norm() < smallnum {
                den = Complex64::new(smallnum, 0.0);
            }
            r[j] = -rhs / den;
        }
        // Left eigenvector row of M is r Q^*.
        let mut row = vec![Complex64::ZERO; n];
        for (j, rj) in r.iter().enumerate() {
            if *rj == Complex64::ZERO {
                continue;
            }
            for c in 0..n {
                row[c] += rj * qh[(j, c)];
            }
        }
        let norm = crate::matrix::vec_norm2(&row);
        for (c, z) in row.into_iter().enumerate() {
            out[(k, c)] = z / norm;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows)
    }

    #[test]
    fn diagonal_spectrum_with_unit_multiplicities() {
        let m = ComplexMatrix::diag(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]);
        let e = eig(&m, default_tol_cluster(&m)).unwrap();
        assert_eq!(e.clusters.len(), 3);
        for c in &e.clusters {
            assert_eq!(c.algebraic, 1);
            assert_eq!(c.geometric, 1);
            assert_eq!(c.index, 1);
        }
        let mut vals: Vec<f64> = e.clusters.iter().map(|c| c.value.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_generator_eigenvalues_are_plus_minus_i() {
        // Characteristic polynomial x^2 + 1 = 0.
        let m = real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let e = eig(&m, default_tol_cluster(&m)).unwrap();
        assert_eq!(e.clusters.len(), 2);
        let (i_pos, _) = e.nearest(Complex64::new(0.0, 1.0));
        let (i_neg, _) = e.nearest(Complex64::new(0.0, -1.0));
        assert!((i_pos - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((i_neg - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn jordan_block_multiplicities() {
        let m = real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let e = eig(&m, default_tol_cluster(&m)).unwrap();
        assert_eq!(e.clusters.len(), 1);
        let c = &e.clusters[0];
        assert!((c.value - Complex64::ONE).norm() < 1e-10);
        assert_eq!(c.algebraic, 2);
        assert_eq!(c.geometric, 1);
        assert_eq!(c.index, 2);
    }

    #[test]
    fn merged_near_eigenvalues_act_semisimple() {
        // Two distinct eigenvalues closer than the clustering tolerance merge
        // into one semisimple cluster.
        let m = ComplexMatrix::diag(&[Complex64::new(0.0, 0.0), Complex64::new(1e-9, 0.0)]);
        let e = eig(&m, 1e-7).unwrap();
        assert_eq!(e.clusters.len(), 1);
        assert_eq!(e.clusters[0].algebraic, 2);
        assert_eq!(e.clusters[0].geometric, 2);
        assert_eq!(e.clusters[0].index, 1);
    }

    #[test]
    fn eigenvector_residuals_are_small() {
        let m = real(&[
            &[0.5, 0.3, -0.2, 0.0],
            &[0.1, -0.4, 0.7, 0.2],
            &[0.0, 0.6, 0.1, -0.5],
            &[-0.3, 0.2, 0.4, 0.0],
        ]);
        let e = eig(&m, default_tol_cluster(&m)).unwrap();
        let norm = svd::norm_two(&m);
        for (j, &lambda) in e.values.iter().enumerate() {
            let v = e.right_vectors.column(j);
            let mv = m.mul_vec(&v);
            let defect: f64 = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(defect <= 1e-8 * norm, "right residual {defect}");

            let w = e.left_vectors.row(j);
            let wm = m.transpose().mul_vec(&w);
            let left_defect: f64 = wm
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(left_defect <= 1e-8 * norm, "left residual {left_defect}");
        }
    }

    #[test]
    fn real_matrix_spectrum_is_conjugation_closed() {
        let m = real(&[
            &[0.0, -2.0, 1.0],
            &[1.0, 0.5, 0.0],
            &[0.3, 0.0, -1.0],
        ]);
        let e = eig(&m, default_tol_cluster(&m)).unwrap();
        for c in &e.clusters {
            let conj = c.value.conj();
            assert!(
                e.cluster_of(conj, e.tol_cluster).is_some(),
                "conjugate of {} missing",
                c.value
            );
        }
    }

    #[test]
    fn matrix_index_on_nilpotent_blocks() {
        let m = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(matrix_index(&m, Complex64::ZERO, DEFAULT_TOL_RANK).unwrap(), 2);

        let m = ComplexMatrix::diag(&[Complex64::ZERO, Complex64::ZERO]);
        assert_eq!(matrix_index(&m, Complex64::ZERO, DEFAULT_TOL_RANK).unwrap(), 1);

        // 3x3 Jordan block at 2.
        let m = real(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 0.0, 2.0]]);
        assert_eq!(
            matrix_index(&m, Complex64::new(2.0, 0.0), DEFAULT_TOL_RANK).unwrap(),
            3
        );
    }

    #[test]
    fn matrix_index_rejects_non_spectral_points() {
        let m = ComplexMatrix::diag(&[Complex64::ZERO, Complex64::new(-1.0, 0.0)]);
        let err = matrix_index(&m, Complex64::new(0.5, 0.0), DEFAULT_TOL_RANK).unwrap_err();
        assert!(matches!(err, Error::NotASpectralValue { .. }));
    }

    #[test]
    fn one_by_one_matrix() {
        let m = ComplexMatrix::new(1, 1, vec![Complex64::new(2.0, -3.0)]).unwrap();
        let e = eig(&m, 1e-7).unwrap();
        assert_eq!(e.clusters.len(), 1);
        assert!((e.clusters[0].value - Complex64::new(2.0, -3.0)).norm() < 1e-14);
        assert_eq!(e.clusters[0].index, 1);
    }

    #[test]
    fn non_square_input_is_a_dimension_error() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig(&m, 1e-7), Err(Error::Dimension(_))));
    }
}

//! Spectral quantities: spectral bound and radius, peripheral spectrum,
//! pole orders, Riesz-point data, and spectral projections computed by two
//! independent methods (generalized-eigenspace bases and contour
//! quadrature of the resolvent).

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::eig::{default_tol_cluster, eig, matrix_index, EigenData};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::report::ComplexPair;
use crate::resolvent::resolvent;
use crate::solve;
use crate::svd;

/// Matrices have empty essential spectrum; the essential spectral radius is
/// reported as this constant rather than computed.
pub const ESSENTIAL_SPECTRAL_RADIUS: f64 = f64::NEG_INFINITY;

/// Scale-aware default peripheral tolerance: `1e-7 * (1 + ||A||)`.
pub fn default_tol_peripheral(a: &ComplexMatrix) -> f64 {
    1e-7 * (1.0 + svd::norm_two(a))
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigen: EigenData,
    /// `s(A)`: maximum real part over the spectrum.
    pub spectral_bound: f64,
    /// `r(A)`: maximum modulus over the spectrum.
    pub spectral_radius: f64,
    /// Eigenvalues with real part within `tol_peripheral` of the bound.
    pub peripheral_set: Vec<Complex64>,
    /// Point spectrum on the imaginary axis (real part within tolerance
    /// of zero); coincides with the peripheral set when the bound is zero.
    pub peripheral_point_set_on_axis: Vec<Complex64>,
    pub tol_peripheral: f64,
}

/// For matrices the growth bound of the semigroup equals the spectral bound
/// of the generator; reports carry this note verbatim.
pub const GROWTH_NOTE: &str =
    "for matrices the semigroup growth bound equals the spectral bound of the generator";

impl SpectrumReport {
    /// Peripheral set shifted down by the spectral bound (so it sits on the
    /// imaginary axis).
    pub fn peripheral_shifted(&self) -> Vec<Complex64> {
        self.peripheral_set
            .iter()
            .map(|z| z - Complex64::new(self.spectral_bound, 0.0))
            .collect()
    }

    /// The peripheral set is the singleton `{s(A)}` within tolerance.
    pub fn peripheral_is_singleton_at_bound(&self) -> bool {
        self.peripheral_set.iter().all(|z| {
            (z - Complex64::new(self.spectral_bound, 0.0)).norm() <= self.tol_peripheral
        })
    }
}

#[derive(Serialize)]
struct EigenvalueRow {
    value: ComplexPair,
    algebraic: usize,
    geometric: usize,
    index: usize,
}

impl Serialize for SpectrumReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            spectral_bound: f64,
            spectral_radius: f64,
            eigenvalues: Vec<EigenvalueRow>,
            peripheral_set: Vec<ComplexPair>,
            peripheral_point_set_on_axis: Vec<ComplexPair>,
            tol_peripheral: f64,
            growth_note: &'a str,
        }
        Repr {
            spectral_bound: self.spectral_bound,
            spectral_radius: self.spectral_radius,
            eigenvalues: self
                .eigen
                .clusters
                .iter()
                .map(|c| EigenvalueRow {
                    value: c.value.into(),
                    algebraic: c.algebraic,
                    geometric: c.geometric,
                    index: c.index,
                })
                .collect(),
            peripheral_set: self.peripheral_set.iter().map(|&z| z.into()).collect(),
            peripheral_point_set_on_axis: self
                .peripheral_point_set_on_axis
                .iter()
                .map(|&z| z.into())
                .collect(),
            tol_peripheral: self.tol_peripheral,
            growth_note: GROWTH_NOTE,
        }
        .serialize(serializer)
    }
}

pub fn spectrum_report(a: &ComplexMatrix, tol_peripheral: f64) -> Result<SpectrumReport> {
    let data = eig(a, default_tol_cluster(a))?;
    let bound = data.spectral_bound();
    let radius = data.spectral_radius();
    let peripheral: Vec<Complex64> = data
        .clusters
        .iter()
        .filter(|c| c.value.re >= bound - tol_peripheral)
        .map(|c| c.value)
        .collect();
    let axis: Vec<Complex64> = data
        .clusters
        .iter()
        .filter(|c| c.value.re.abs() <= tol_peripheral)
        .map(|c| c.value)
        .collect();
    Ok(SpectrumReport {
        eigen: data,
        spectral_bound: bound,
        spectral_radius: radius,
        peripheral_set: peripheral,
        peripheral_point_set_on_axis: axis,
        tol_peripheral,
    })
}

/// Pole order of the resolvent at an eigenvalue; equals 1 iff the eigenvalue
/// is semisimple.
pub fn pole_order(a: &ComplexMatrix, lambda: Complex64, tol_rank: f64) -> Result<usize> {
    matrix_index(a, lambda, tol_rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionMethod {
    Algebraic,
    Contour,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProjectionResiduals {
    /// `||P^2 - P||`.
    pub idempotency: f64,
    /// `||A P - P A||`.
    pub commutation: f64,
    /// `|trace(P) - algebraic multiplicity|`.
    pub trace_gap: f64,
}

#[derive(Clone, Debug)]
pub struct ProjectionResult {
    pub projection: ComplexMatrix,
    pub eigenvalue: Complex64,
    pub method: ProjectionMethod,
    pub residuals: ProjectionResiduals,
}

fn residuals_for(
    a: &ComplexMatrix,
    p: &ComplexMatrix,
    multiplicity: usize,
) -> ProjectionResiduals {
    let p2 = p * p;
    let idempotency = svd::norm_two(&(&p2 - p));
    let commutation = svd::norm_two(&(&(a * p) - &(p * a)));
    let trace_gap = (p.trace() - Complex64::new(multiplicity as f64, 0.0)).norm();
    ProjectionResiduals {
        idempotency,
        commutation,
        trace_gap,
    }
}

/// Spectral projection with range `ker((vI - A)^m)` and kernel
/// `im((vI - A)^m)`, `m` the pole order, assembled from orthonormal bases of
/// the right and left generalized eigenspaces: `P = U (W^* U)^{-1} W^*`.
pub fn spectral_projection_algebraic(
    a: &ComplexMatrix,
    lambda: Complex64,
    tol: f64,
) -> Result<ProjectionResult> {
    let data = eig(a, default_tol_cluster(a))?;
    spectral_projection_algebraic_with(a, &data, lambda, tol)
}

/// Same as [`spectral_projection_algebraic`] with a precomputed
/// eigendecomposition (used when projecting at every cluster).
pub fn spectral_projection_algebraic_with(
    a: &ComplexMatrix,
    data: &EigenData,
    lambda: Complex64,
    _tol: f64,
) -> Result<ProjectionResult> {
    let n = a.rows();
    let cluster = data.cluster_of(lambda, data.tol_cluster).ok_or_else(|| {
        let (nearest, distance) = data.nearest(lambda);
        Error::NotASpectralValue {
            point: lambda,
            nearest,
            distance,
        }
    })?;
    let value = cluster.value;
    let m = cluster.index;
    let d = cluster.algebraic;

    let b = &ComplexMatrix::diag(&vec![value; n]) - a;
    let bm = b.pow_u(m);

    // The d right/left singular directions with smallest singular values
    // span the generalized eigenspace and its left counterpart.
    let u_cols = smallest_right_vectors(&bm, d)?;
    let w_cols = smallest_right_vectors(&bm.adjoint(), d)?;
    let u = ComplexMatrix::from_columns(&u_cols);
    let w = ComplexMatrix::from_columns(&w_cols);

    let gram = &w.adjoint() * &u;
    let gram_sv = svd::svd(&gram)?.singular_values;
    let smin = *gram_sv.last().unwrap();
    let smax = gram_sv[0];
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(Error::IllConditioned {
            estimate: if smin > 0.0 { smax / smin } else { f64::INFINITY },
        });
    }

    let x = solve::solve(&gram, &w.adjoint())?;
    let p = &u * &x;
    let residuals = residuals_for(a, &p, d);
    Ok(ProjectionResult {
        projection: p,
        eigenvalue: value,
        method: ProjectionMethod::Algebraic,
        residuals,
    })
}

fn smallest_right_vectors(m: &ComplexMatrix, count: usize) -> Result<Vec<Vec<Complex64>>> {
    let s = svd::svd(m)?;
    let n = s.singular_values.len();
    assert!(count <= n);
    Ok((n - count..n).map(|j| s.right_vectors.column(j)).collect())
}

/// Default node count for contour quadrature; trapezoidal rules on circles
/// converge geometrically for analytic integrands.
pub const DEFAULT_CONTOUR_NODES: usize = 64;

/// Default contour radius: half the distance from the eigenvalue to the
/// nearest other cluster (or half of `1 + |lambda|` for a singleton
/// spectrum).
pub fn default_contour_radius(data: &EigenData, lambda: Complex64) -> f64 {
    let cluster = match data.cluster_of(lambda, data.tol_cluster) {
        Some(c) => c,
        None => return 0.5 * (1.0 + lambda.norm()),
    };
    let nearest = data
        .clusters
        .iter()
        .filter(|c| (c.value - cluster.value).norm() > data.tol_cluster)
        .map(|c| (c.value - cluster.value).norm())
        .fold(f64::INFINITY, f64::min);
    if nearest.is_finite() {
        nearest / 2.0
    } else {
        0.5 * (1.0 + lambda.norm())
    }
}

/// Spectral projection by trapezoidal quadrature of the normalized Cauchy
/// integral `(2 pi i)^{-1} \oint Res(z, A) dz` over a circle about the
/// eigenvalue. The circle must separate the target cluster from the rest of
/// the spectrum.
pub fn spectral_projection_contour(
    a: &ComplexMatrix,
    lambda: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<ProjectionResult> {
    let n = a.rows();
    if !(radius > 0.0) || nodes < 4 {
        return Err(Error::Parameter(format!(
            "need positive radius and at least 4 nodes, got radius {radius}, nodes {nodes}"
        )));
    }
    let data = eig(a, default_tol_cluster(a))?;
    let cluster = data.cluster_of(lambda, data.tol_cluster).ok_or_else(|| {
        let (nearest, distance) = data.nearest(lambda);
        Error::NotASpectralValue {
            point: lambda,
            nearest,
            distance,
        }
    })?;
    let center = cluster.value;

    let margin = (data.tol_cluster * 10.0).max(1e-3 * radius);
    for c in &data.clusters {
        let dist = (c.value - center).norm();
        let same = (c.value - cluster.value).norm() <= data.tol_cluster;
        if (dist - radius).abs() <= margin {
            return Err(Error::CircleIntersectsSpectrum {
                center,
                radius,
                eigenvalue: c.value,
                margin: (dist - radius).abs(),
            });
        }
        if !same && dist < radius {
            return Err(Error::ForeignEigenvalueEnclosed {
                center,
                radius,
                eigenvalue: c.value,
            });
        }
    }

    let mut acc = ComplexMatrix::zeros(n, n);
    for j in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let w = Complex64::new(0.0, theta).exp();
        let z = center + w * radius;
        let r = resolvent(a, z)?;
        acc = &acc + &r.scale(w);
    }
    let p = acc.scale_re(radius / nodes as f64);

    let residuals = residuals_for(a, &p, cluster.algebraic);
    // Backstop: a trace far from the expected multiplicity means the circle
    // enclosed mass it should not have (or missed some).
    if residuals.trace_gap > 1e-2 {
        return Err(Error::ForeignEigenvalueEnclosed {
            center,
            radius,
            eigenvalue: Complex64::new(f64::NAN, f64::NAN),
        });
    }
    Ok(ProjectionResult {
        projection: p,
        eigenvalue: center,
        method: ProjectionMethod::Contour,
        residuals,
    })
}

/// Riesz-point record. On finite-dimensional spaces every spectral value is
/// a pole of the resolvent with finite-dimensional spectral space, so
/// `is_riesz` is always true; the content is the pole order and the
/// dimension (trace of the spectral projection).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RieszPointReport {
    pub is_riesz: bool,
    pub pole_order: usize,
    pub spectral_space_dim: usize,
}

pub fn riesz_point_check(
    t: &ComplexMatrix,
    lambda: Complex64,
    tol: f64,
) -> Result<RieszPointReport> {
    let proj = spectral_projection_algebraic(t, lambda, tol)?;
    let data = eig(t, default_tol_cluster(t))?;
    let cluster = data.cluster_of(lambda, data.tol_cluster).expect("projection succeeded");
    let dim = proj.projection.trace().re.round() as usize;
    Ok(RieszPointReport {
        is_riesz: true,
        pole_order: cluster.index,
        spectral_space_dim: dim,
    })
}

/// Algebraic spectral projections at every cluster; their sum resolves the
/// identity.
pub fn spectral_resolution(a: &ComplexMatrix, tol: f64) -> Result<Vec<ProjectionResult>> {
    let data = eig(a, default_tol_cluster(a))?;
    data.clusters
        .iter()
        .map(|c| spectral_projection_algebraic_with(a, &data, c.value, tol))
        .collect()
}

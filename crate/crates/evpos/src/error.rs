use num_complex::Complex64;
use thiserror::Error;

/// Errors shared across the analysis kernel and the verdict layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Mismatched or unsupported matrix dimensions (empty matrices included).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// An iterative kernel failed to converge.
    #[error("numerical failure: {what} did not converge after {iterations} iterations (matrix 1-norm {norm:.3e})")]
    NumericalFailure {
        what: &'static str,
        iterations: usize,
        norm: f64,
    },

    /// A computed quantity left the representable range.
    #[error("range error: {context} (magnitude {magnitude:.3e}); {advice}")]
    Range {
        context: String,
        magnitude: f64,
        advice: String,
    },

    /// A resolvent was requested at (or numerically on top of) a spectral value.
    #[error("spectral collision: point {point} is within {distance:.3e} of eigenvalue {eigenvalue}")]
    SpectralCollision {
        point: Complex64,
        eigenvalue: Complex64,
        distance: f64,
    },

    /// A value claimed to be an eigenvalue is not one within tolerance.
    #[error("not a spectral value: {point} is at distance {distance:.3e} from the nearest eigenvalue {nearest}")]
    NotASpectralValue {
        point: Complex64,
        nearest: Complex64,
        distance: f64,
    },

    /// A contour passes through or too close to the spectrum.
    #[error("contour intersects spectrum: eigenvalue {eigenvalue} lies within {margin:.3e} of the circle |z - {center}| = {radius}")]
    CircleIntersectsSpectrum {
        center: Complex64,
        radius: f64,
        eigenvalue: Complex64,
        margin: f64,
    },

    /// A contour encloses an eigenvalue cluster other than the requested one.
    #[error("contour encloses foreign eigenvalue {eigenvalue} (circle |z - {center}| = {radius})")]
    ForeignEigenvalueEnclosed {
        center: Complex64,
        radius: f64,
        eigenvalue: Complex64,
    },

    /// Basis assembly for a projection is too ill-conditioned to trust.
    #[error("ill-conditioned basis assembly: condition estimate {estimate:.3e}")]
    IllConditioned { estimate: f64 },

    /// The spectral and sampled pathways disagree beyond tolerance; this
    /// signals a tolerance or horizon misconfiguration rather than a verdict.
    #[error("inconsistent verdicts: {context} (spectral: {spectral}, sampled: {sampled})")]
    Inconsistency {
        context: String,
        spectral: String,
        sampled: String,
    },

    /// Infeasible or contradictory generator/checker parameters.
    #[error("parameter error: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

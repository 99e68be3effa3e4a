//! The resolvent map `z -> (zI - M)^{-1}`.

use num_complex::Complex64;

use crate::eig::{default_tol_cluster, eig};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::solve::lu;

/// `(zI - M)^{-1}` by LU factorization. A numerically singular system is
/// reported as a spectral collision carrying the offending eigenvalue.
pub fn resolvent(m: &ComplexMatrix, z: Complex64) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let shifted = &ComplexMatrix::diag(&vec![z; n]) - m;
    let f = lu(&shifted)?;
    if f.is_singular(1e-14) {
        let data = eig(m, default_tol_cluster(m))?;
        let (eigenvalue, distance) = data.nearest(z);
        return Err(Error::SpectralCollision {
            point: z,
            eigenvalue,
            distance,
        });
    }
    Ok(f.inverse())
}

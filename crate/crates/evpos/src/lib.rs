//! Spectral analysis of eventually positive matrix semigroups and powers.
//!
//! The crate computes, on dense complex matrices:
//!
//! * eigenstructure with clustered multiplicities and Jordan indices,
//!   matrix exponentials, resolvents and numerical rank ([`eig`], [`expm`],
//!   [`svd`], [`resolvent`]);
//! * positivity and eventual-positivity certificates for matrix powers and
//!   matrix semigroups ([`positivity`]);
//! * spectral bounds, peripheral spectra, pole orders and spectral
//!   projections by two independent methods ([`spectral`]);
//! * long-time behaviour: Cesàro means, mean ergodicity, strong/uniform
//!   convergence and exponential balancing ([`dynamics`]);
//! * executable hypothesis/conclusion checks for a family of convergence
//!   and peripheral-spectrum results about eventually positive semigroups,
//!   reported as machine-readable verdicts ([`checkers`]);
//! * seeded instance families with exact ground truth ([`generators`]).

// Guards written as `!(x > 0.0)` reject NaN as well; the flipped
// comparison would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checkers;
pub mod dynamics;
pub mod eig;
pub mod error;
pub mod expm;
pub mod generators;
pub mod matrix;
pub mod positivity;
pub mod report;
pub mod resolvent;
pub mod schur;
pub mod solve;
pub mod spectral;
pub mod svd;

pub use eig::{
    default_tol_cluster, eig as eigendecomposition, matrix_index, EigenCluster, EigenData,
    DEFAULT_TOL_RANK,
};
pub use error::{Error, Result};
pub use expm::{expm, expm_with_integral};
pub use matrix::ComplexMatrix;
pub use resolvent::resolvent;
pub use svd::{norm_two, rank};

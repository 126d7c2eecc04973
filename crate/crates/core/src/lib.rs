//! Numerical laboratory for nodal sets of flat Laplace eigenfunctions on the
//! torus `ℝ²/ℤ²` and of Gaussian random waves with a prescribed spectral
//! measure on the unit circle.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod eigen;
pub mod error;
pub mod field;
pub mod gaussian;
pub mod kac_rice;
pub mod lattice;
pub mod loglab;
pub mod measure;
pub mod nodal;
pub mod quadrature;
pub mod rng;

pub use error::{Error, Result};

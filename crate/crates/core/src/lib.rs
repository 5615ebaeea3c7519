//! Clark measures of bidegree (n,1) rational inner functions on the bidisk.
//!
//! Given a stable polynomial `p(z) = p1(z1) + z2 p2(z1)` the crate builds
//! `phi = p~/p`, locates its torus singularities, and describes every Clark
//! measure `sigma_alpha` in closed form: a curve part carried by the graph of
//! a finite Blaschke product with a rational weight, plus Lebesgue line
//! masses at the singular abscissae when `alpha` is exceptional.
//!
//! Everything is checked against independent quadrature: Poisson integrals,
//! Gram matrices of reproducing kernels, and sums-of-squares identities.

pub mod agler;
pub mod catalog;
pub mod clark;
pub mod error;
pub mod polycore;
pub mod quadrature;
pub mod rif;

pub use num_complex::Complex64;

pub use error::{Error, Result};

/// Default relative tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-8;

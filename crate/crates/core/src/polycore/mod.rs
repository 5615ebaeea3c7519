//! Complex univariate and trigonometric polynomials, root finding, spectral
//! factorization and finite Blaschke products.

mod blaschke;
mod fejer;
pub mod roots;
mod trig;
mod unipoly;

pub use blaschke::{
    blaschke_from_rational, blaschke_from_rational_with, cancel_unimodular, BlaschkeProduct,
    CancelledRational,
};
pub use fejer::{certificate as fejer_riesz_certificate, fejer_riesz, fejer_riesz_with};
pub use roots::{roots, roots_with, unimodular_common_roots, unimodular_common_roots_with, Root, RootOptions};
pub use trig::TrigPoly;
pub use unipoly::UniPoly;

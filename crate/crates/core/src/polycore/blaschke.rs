use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::roots::{backward_error, roots_with, simple_roots, RootOptions};
use super::UniPoly;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finite Blaschke product `constant * prod (z - a)/(1 - conj(a) z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    pub constant: Complex64,
    pub zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(constant: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if (constant.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::Domain(format!("Blaschke constant {constant} is not unimodular")));
        }
        if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(Error::Domain(format!("Blaschke zero {a} is not inside the disk")));
        }
        Ok(BlaschkeProduct { constant: constant / constant.norm(), zeros })
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.constant, |acc, a| acc * (z - a) / (ONE - a.conj() * z))
    }

    /// `constant * prod (z - a)`.
    pub fn numerator(&self) -> UniPoly {
        UniPoly::from_roots(&self.zeros).scale(self.constant)
    }

    /// `prod (1 - conj(a) z)`.
    pub fn denominator(&self) -> UniPoly {
        self.zeros.iter().fold(UniPoly::one(), |acc, a| {
            acc * UniPoly::new(vec![ONE, -a.conj()])
        })
    }
}

/// A rational function with its common unimodular roots divided out.
#[derive(Clone, Debug, PartialEq)]
pub struct CancelledRational {
    pub num: UniPoly,
    pub den: UniPoly,
    pub cancelled: Vec<Complex64>,
}

/// Divide out common unimodular roots of `num` and `den`.
pub fn cancel_unimodular(num: &UniPoly, den: &UniPoly, opts: &RootOptions) -> Result<CancelledRational> {
    let common = super::roots::unimodular_common_roots_with(num, den, opts)?;
    let (mut n, mut d) = (num.clone(), den.clone());
    for &g in &common {
        n = n.deflate(g).0;
        d = d.deflate(g).0;
    }
    Ok(CancelledRational { num: n, den: d, cancelled: common })
}

/// Factor an inner rational function `num/den` into a Blaschke product.
pub fn blaschke_from_rational(num: &UniPoly, den: &UniPoly, tol: f64) -> Result<BlaschkeProduct> {
    blaschke_from_rational_with(num, den, &RootOptions::with_tol(tol.min(1e-10)), tol).map(|(b, _)| b)
}

/// As [`blaschke_from_rational`], also returning the cancelled unimodular roots.
pub fn blaschke_from_rational_with(
    num: &UniPoly,
    den: &UniPoly,
    opts: &RootOptions,
    tol: f64,
) -> Result<(BlaschkeProduct, Vec<Complex64>)> {
    if den.is_zero() {
        return Err(Error::Domain("zero denominator".into()));
    }
    if num.is_zero() {
        return Err(Error::Domain("zero numerator is not inner".into()));
    }
    let mut c = cancel_unimodular(num, den, opts)?;
    // common factors off the circle are harmless but must go before factoring
    if c.num.degree().unwrap_or(0) > 0 && c.den.degree().unwrap_or(0) > 0 {
        for a in simple_roots(&c.num, opts)? {
            if c.den.degree().unwrap_or(0) > 0 && backward_error(&c.den, a) <= opts.tol {
                c.num = c.num.deflate(a).0;
                c.den = c.den.deflate(a).0;
            }
        }
    }
    // unimodular common roots are gone, so any pole left may sit arbitrarily close to T
    if let Some(r) = roots_with(&c.den, opts)?.iter().find(|r| r.value.norm() <= 1.0) {
        return Err(Error::Domain(format!(
            "denominator vanishes at {} in the closed disk",
            r.value
        )));
    }
    let zeros = if c.num.degree() == Some(0) {
        Vec::new()
    } else {
        simple_roots(&c.num, opts)?
    };
    if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
        return Err(Error::Domain(format!("numerator zero {a} is not inside the disk")));
    }
    let unit = BlaschkeProduct { constant: ONE, zeros };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut worst = 0.0f64;
    for j in 0..8 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as f64 + 0.3) / 8.0);
        let v = c.num.eval(z) / c.den.eval(z);
        worst = worst.max((v.norm() - 1.0).abs());
        acc += v / unit.eval(z);
    }
    if worst > tol.max(1e-9) {
        return Err(Error::Domain(format!("|num/den| deviates from 1 on the circle by {worst:e}")));
    }
    let constant = acc / acc.norm();
    Ok((BlaschkeProduct { constant, ..unit }, c.cancelled))
}

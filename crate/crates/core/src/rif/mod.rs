//! Bidegree (n,1) polynomials, their reflections, and validated rational
//! inner functions `phi = p~/p`.

mod validate;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::UniPoly;

pub use validate::{validate, validate_with, validation_report, ValidateOptions, ValidationReport};

/// `p(z) = p1(z1) + z2 p2(z1)` with declared z1-degree `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiPolyN1 {
    pub n: usize,
    pub p1: UniPoly,
    pub p2: UniPoly,
}

impl BiPolyN1 {
    pub fn new(n: usize, p1: UniPoly, p2: UniPoly) -> Result<Self> {
        let b = BiPolyN1 { n, p1, p2 };
        b.check_degree()?;
        Ok(b)
    }

    /// Convenience constructor from real coefficient lists.
    pub fn from_real(n: usize, p1: &[f64], p2: &[f64]) -> Result<Self> {
        Self::new(n, UniPoly::from_real(p1), UniPoly::from_real(p2))
    }

    pub(crate) fn check_degree(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::DegenerateDegree("declared z1-degree must be at least 1".into()));
        }
        if self.p1.is_zero() && self.p2.is_zero() {
            return Err(Error::DegenerateDegree("zero polynomial".into()));
        }
        for (name, q) in [("p1", &self.p1), ("p2", &self.p2)] {
            if q.degree().is_some_and(|d| d > self.n) {
                return Err(Error::DegenerateDegree(format!(
                    "deg {name} = {} exceeds declared n = {}",
                    q.degree().unwrap_or(0),
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.p1.eval(z1) + z2 * self.p2.eval(z1)
    }

    /// Partial derivative in `z1`.
    pub fn d1(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.p1.eval_with_derivative(z1).1 + z2 * self.p2.eval_with_derivative(z1).1
    }

    /// The (n,1) reflection `z1^n z2 conj(p(1/conj z1, 1/conj z2))`, stored in
    /// the same convention: constant part `p2~`, z2-coefficient `p1~`.
    pub fn reflect(&self) -> BiPolyN1 {
        BiPolyN1 {
            n: self.n,
            p1: self.p2.reflect(self.n),
            p2: self.p1.reflect(self.n),
        }
    }

    /// Actual bidegree `(deg_z1, deg_z2)`.
    pub fn bidegree(&self) -> (usize, usize) {
        let d1 = self.p1.degree().unwrap_or(0).max(self.p2.degree().unwrap_or(0));
        (d1, usize::from(!self.p2.is_zero()))
    }

    /// Sum of absolute coefficient sizes at `(|z1|, |z2|)`, the rounding scale of `eval`.
    pub fn abs_scale(&self, z1: Complex64, z2: Complex64) -> f64 {
        self.p1.abs_scale(z1) + z2.norm() * self.p2.abs_scale(z1)
    }
}

/// A torus zero `(tau, lambda)` of `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub tau: Complex64,
    pub lambda: Complex64,
    /// The nontangential value of `phi` at `(tau, lambda)`.
    #[serde(rename = "alpha")]
    pub exceptional_alpha: Complex64,
    /// `d phi / d z1` along the line `{tau} x T`, where it is constant.
    #[serde(rename = "deriv")]
    pub deriv_constant: Complex64,
    /// Multiplicity of `tau` as a root of `|p1|^2 - |p2|^2`.
    #[serde(rename = "mult")]
    pub torus_multiplicity: usize,
}

/// A validated rational inner function `phi = p~ / p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rif {
    pub p: BiPolyN1,
    pub ptilde: BiPolyN1,
    pub n: usize,
    pub singularities: Vec<Singularity>,
    pub phi_at_origin: Complex64,
}

impl Rif {
    /// `p1~ = z^n conj(p1(1/conj z))`, the z2-coefficient of `p~`.
    pub fn pt1(&self) -> &UniPoly {
        &self.ptilde.p2
    }

    /// `p2~ = z^n conj(p2(1/conj z))`, the constant part of `p~`.
    pub fn pt2(&self) -> &UniPoly {
        &self.ptilde.p1
    }

    /// `phi(z)` without a guard against the denominator vanishing.
    pub fn phi(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.ptilde.eval(z1, z2) / self.p.eval(z1, z2)
    }

    /// `phi(z)`, refusing points where `|p(z)|` is below `tol` times its rounding scale.
    pub fn phi_eval(&self, z1: Complex64, z2: Complex64, tol: f64) -> Result<Complex64> {
        let den = self.p.eval(z1, z2);
        if den.norm() <= tol * self.p.abs_scale(z1, z2) {
            return Err(Error::Domain(format!("evaluation at singularity ({z1}, {z2})")));
        }
        Ok(self.ptilde.eval(z1, z2) / den)
    }

    /// `|p1|^2 - |p2|^2` on the circle.
    pub fn torus_trig(&self) -> crate::polycore::TrigPoly {
        use crate::polycore::TrigPoly;
        TrigPoly::abs_sq(&self.p.p1).sub(&TrigPoly::abs_sq(&self.p.p2))
    }

    /// `Res_{z2}(p, p~)` as a polynomial in `z1`.
    ///
    /// Both are linear in `z2`, so the Sylvester matrix is 2x2:
    /// `det [[p1, p2], [p2~, p1~]] = p1 p1~ - p2 p2~`.
    pub fn resultant(&self) -> UniPoly {
        &self.p.p1 * self.pt1() - &self.p.p2 * self.pt2()
    }

    /// Constant value of `d phi / d z1` on the line through the k-th singularity.
    pub fn phi_line_derivative(&self, k: usize, tol: f64) -> Result<Complex64> {
        let s = self
            .singularities
            .get(k)
            .ok_or_else(|| Error::Precondition(format!("no singularity with index {k}")))?;
        line_derivative(&self.p, &self.ptilde, s.tau, s.lambda, s.exceptional_alpha, tol)
    }

    /// True when every common zero of `p` and `p~` lies on the torus.
    pub fn is_saturated(&self, tol: f64) -> Result<bool> {
        let (dp, dpt) = (self.p.bidegree(), self.ptilde.bidegree());
        if dp != dpt {
            return Err(Error::Precondition(format!(
                "deg p = {dp:?} differs from deg p~ = {dpt:?}"
            )));
        }
        let res = self.resultant().trimmed(1e-13);
        if res.degree() != Some(2 * self.n) {
            return Ok(false);
        }
        let rs = crate::polycore::roots(&res, 1e-10)?;
        let band = tol.max(1e-6);
        Ok(rs.iter().all(|r| (r.value.norm() - 1.0).abs() < band))
    }
}

pub(crate) fn line_derivative(
    p: &BiPolyN1,
    pt: &BiPolyN1,
    tau: Complex64,
    lambda: Complex64,
    alpha: Complex64,
    tol: f64,
) -> Result<Complex64> {
    let mut vals = Vec::with_capacity(2);
    for w in [0.0, 0.5] {
        let mut z2 = Complex64::new(w, 0.0);
        if (z2 - lambda).norm() < 1e-3 {
            z2 += Complex64::new(0.0, 0.25);
        }
        let den = p.eval(tau, z2);
        if den.norm() <= 1e-13 * p.abs_scale(tau, z2) {
            continue;
        }
        vals.push((pt.d1(tau, z2) - alpha * p.d1(tau, z2)) / den);
    }
    match vals.as_slice() {
        [a, b] => {
            if (a - b).norm() > tol.max(1e-9) * a.norm().max(1.0) {
                return Err(Error::numeric(
                    format!("line derivative not constant at tau = {tau}: {a} vs {b}"),
                    (a - b).norm(),
                ));
            }
            Ok((a + b) * 0.5)
        }
        _ => Err(Error::Precondition(format!("p vanishes at both test points on the line tau = {tau}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reflect_two_minus_z1_minus_z2() {
        let p = BiPolyN1::from_real(1, &[2.0, -1.0], &[-1.0]).unwrap();
        let pt = p.reflect();
        assert_eq!(pt.p1, UniPoly::from_real(&[0.0, -1.0]));
        assert_eq!(pt.p2, UniPoly::from_real(&[-1.0, 2.0]));
        assert_eq!(pt.reflect(), p);
    }

    #[test]
    fn reflect_constant_is_monomial() {
        let p = BiPolyN1::from_real(1, &[1.0], &[]).unwrap();
        let pt = p.reflect();
        assert!(pt.p1.is_zero());
        assert_eq!(pt.p2, UniPoly::from_real(&[0.0, 1.0]));
    }

    #[test]
    fn reflect_degree_two_example() {
        // 4 - z2 - 3 z1 - z1 z2 + z1^2
        let p = BiPolyN1::from_real(2, &[4.0, -3.0, 1.0], &[-1.0, -1.0]).unwrap();
        let pt = p.reflect();
        // 4 z1^2 z2 - z1^2 - 3 z1 z2 - z1 + z2
        assert_eq!(pt.p1, UniPoly::from_real(&[0.0, -1.0, -1.0]));
        assert_eq!(pt.p2, UniPoly::from_real(&[1.0, -3.0, 4.0]));
    }

    #[test]
    fn degree_checks() {
        assert!(matches!(BiPolyN1::from_real(1, &[1.0, 0.0, 1.0], &[]), Err(Error::DegenerateDegree(_))));
        assert!(matches!(BiPolyN1::from_real(0, &[1.0], &[]), Err(Error::DegenerateDegree(_))));
        assert!(matches!(BiPolyN1::from_real(1, &[], &[]), Err(Error::DegenerateDegree(_))));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let p = BiPolyN1::new(2, UniPoly::new(vec![c(1.0, 1.0), c(0.5, 0.0), c(0.0, -2.0)]), UniPoly::from_real(&[0.3, -1.0])).unwrap();
        let (z1, z2) = (c(0.2, 0.1), c(-0.4, 0.3));
        let h = 1e-6;
        let fd = (p.eval(z1 + h, z2) - p.eval(z1 - h, z2)) / (2.0 * h);
        assert!((fd - p.d1(z1, z2)).norm() < 1e-8);
    }

    #[test]
    fn json_shape() {
        let p = BiPolyN1::from_real(1, &[2.0, -1.0], &[-1.0]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["p1"]["coeffs"][1][0], -1.0);
        let back: BiPolyN1 = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}

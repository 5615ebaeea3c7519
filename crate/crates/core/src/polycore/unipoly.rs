use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense univariate polynomial with complex coefficients, ascending degree.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient list and `degree() == None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawPoly")]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawPoly {
    coeffs: Vec<Complex64>,
}

impl From<RawPoly> for UniPoly {
    fn from(raw: RawPoly) -> Self {
        UniPoly::new(raw.coeffs)
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots (repeated entries for multiplicity).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| {
            acc.mul_linear(r)
        })
    }

    /// Multiply by `(z - r)`.
    pub fn mul_linear(&self, r: Complex64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * r;
        }
        Self::new(out)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |c_k| |z|^k`, the natural scale for the rounding error of `eval(z)`.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// k-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.derivative())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// The degree-`n` reflection `z^n conj(p(1/conj z))`.
    ///
    /// Panics if `deg p > n`.
    pub fn reflect(&self, n: usize) -> Self {
        assert!(
            self.degree().is_none_or(|d| d <= n),
            "reflection degree {n} below polynomial degree {:?}",
            self.degree()
        );
        let mut out = vec![ZERO; n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[n - k] = c.conj();
        }
        Self::new(out)
    }

    /// Synthetic division by `(z - r)`; returns the quotient and the remainder `p(r)`.
    pub fn deflate(&self, r: Complex64) -> (Self, Complex64) {
        let Some(d) = self.degree() else {
            return (Self::zero(), ZERO);
        };
        if d == 0 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut q = vec![ZERO; d];
        let mut acc = self.coeffs[d];
        for k in (0..d).rev() {
            q[k] = acc;
            acc = acc * r + self.coeffs[k];
        }
        (Self::new(q), acc)
    }

    /// Drop leading coefficients below `rel * max|c|`.
    pub fn trimmed(&self, rel: f64) -> Self {
        let cutoff = rel * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Substitute `z -> c z`.
    pub fn dilate(&self, c: Complex64) -> Self {
        let mut pow = ONE;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            out.push(a * pow);
            pow *= c;
        }
        Self::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;

    fn neg(self) -> UniPoly {
        self.scale(-ONE)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = UniPoly::new(vec![c(1.0, 0.0), ZERO, ZERO]);
        assert_eq!(p.degree(), Some(0));
        assert!(UniPoly::new(vec![ZERO, ZERO]).is_zero());
        assert_eq!(UniPoly::zero().degree(), None);
    }

    #[test]
    fn horner_matches_power_sum() {
        let p = UniPoly::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(2.0, 0.0)]);
        let z = c(0.3, -0.7);
        let direct: Complex64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a * z.powu(k as u32))
            .sum();
        assert!((p.eval(z) - direct).norm() < 1e-14);
        let (v, dv) = p.eval_with_derivative(z);
        assert!((v - direct).norm() < 1e-14);
        assert!((dv - p.derivative().eval(z)).norm() < 1e-14);
    }

    #[test]
    fn reflection_of_two_minus_z() {
        // 2 - z at degree 1 reflects to 2z - 1
        let p = UniPoly::from_real(&[2.0, -1.0]);
        assert_eq!(p.reflect(1), UniPoly::from_real(&[-1.0, 2.0]));
        // padding: degree-2 reflection of a constant is a monomial
        assert_eq!(UniPoly::one().reflect(2), UniPoly::monomial(ONE, 2));
    }

    #[test]
    fn deflation_recovers_factor() {
        let p = UniPoly::from_roots(&[c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.1)]);
        let (q, rem) = p.deflate(c(0.0, 2.0));
        assert!(rem.norm() < 1e-14);
        let back = q.mul_linear(c(0.0, 2.0));
        for k in 0..4 {
            assert!((back.coeff(k) - p.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn json_shape() {
        let p = UniPoly::from_real(&[2.0, -1.0]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coeffs":[[2.0,0.0],[-1.0,0.0]]}"#);
        let back: UniPoly = serde_json::from_str(r#"{"coeffs":[[2,0],[-1,0],[0,0]]}"#).unwrap();
        assert_eq!(back, p);
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::UniPoly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Trigonometric (Laurent) polynomial `sum_{k=-d}^{d} c_k zeta^k`.
///
/// Coefficients are stored from index `-d` up to `d`. When `real` is set the
/// coefficients are kept Hermitian, `c_{-k} = conj(c_k)`, and evaluation on
/// the circle returns a real number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    degree: usize,
    coeffs: Vec<Complex64>,
    #[serde(default)]
    real: bool,
}

impl TrigPoly {
    /// Build from coefficients for indices `-d..=d` (length must be odd).
    pub fn new(coeffs: Vec<Complex64>, real: bool) -> Self {
        assert!(coeffs.len() % 2 == 1, "trig poly needs an odd coefficient count");
        let degree = coeffs.len() / 2;
        let mut t = TrigPoly { degree, coeffs, real };
        if real {
            t.symmetrize();
        }
        t.trim(0.0);
        t
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![Complex64::new(c, 0.0)], true)
    }

    /// `|p(zeta)|^2` on the circle.
    pub fn abs_sq(p: &UniPoly) -> Self {
        let Some(d) = p.degree() else {
            return Self::constant(0.0);
        };
        let mut coeffs = vec![ZERO; 2 * d + 1];
        for (j, a) in p.coeffs().iter().enumerate() {
            for (k, b) in p.coeffs().iter().enumerate() {
                coeffs[j + d - k] += a * b.conj();
            }
        }
        Self::new(coeffs, true)
    }

    /// The trig poly whose values are `P(z) z^{-shift}` on the circle.
    pub fn from_laurent(p: &UniPoly, shift: usize, real: bool) -> Self {
        let top = p.degree().unwrap_or(0).max(2 * shift);
        let d = shift.max(top - shift);
        let coeffs = (0..=2 * d)
            .map(|i| {
                let k = i as isize - d as isize + shift as isize;
                if k < 0 {
                    ZERO
                } else {
                    p.coeff(k as usize)
                }
            })
            .collect();
        Self::new(coeffs, real)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Coefficient of `zeta^k`.
    pub fn coeff(&self, k: isize) -> Complex64 {
        let i = k + self.degree as isize;
        if i < 0 || i as usize >= self.coeffs.len() {
            ZERO
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// `z^d t(z)`, an ordinary polynomial of degree at most `2d`.
    pub fn to_laurent_poly(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// Value at `z`; for a unimodular argument this is the value on the circle.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let p = self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c);
        let v = p * z.powi(-(self.degree as i32));
        if self.real && (z.norm() - 1.0).abs() < 1e-12 {
            Complex64::new(v.re, 0.0)
        } else {
            v
        }
    }

    /// Real value at `zeta` on the circle (the real part of `eval`).
    pub fn eval_real(&self, zeta: Complex64) -> f64 {
        self.eval(zeta).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect(), self.real)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let d = self.degree.max(other.degree) as isize;
        let coeffs = (-d..=d).map(|k| self.coeff(k) + other.coeff(k) * sign).collect();
        Self::new(coeffs, self.real && other.real)
    }

    /// Drop outer coefficient pairs whose size is at most `rel` times the largest.
    pub fn trimmed(&self, rel: f64) -> Self {
        let mut t = self.clone();
        t.trim(rel);
        t
    }

    fn trim(&mut self, rel: f64) {
        let cutoff = rel * self.max_abs_coeff();
        while self.degree > 0
            && self.coeffs[0].norm() <= cutoff
            && self.coeffs[self.coeffs.len() - 1].norm() <= cutoff
        {
            self.coeffs.remove(0);
            self.coeffs.pop();
            self.degree -= 1;
        }
    }

    fn symmetrize(&mut self) {
        let d = self.degree;
        for k in 0..=d {
            let a = self.coeffs[d + k];
            let b = self.coeffs[d - k].conj();
            let m = (a + b) * 0.5;
            self.coeffs[d + k] = m;
            self.coeffs[d - k] = m.conj();
        }
        self.coeffs[d].im = 0.0;
        for c in &mut self.coeffs {
            *c = Complex64::new(c.re + 0.0, c.im + 0.0);
        }
    }

    /// Exact division by `|zeta - tau|^2` for unimodular `tau`.
    ///
    /// Uses `|zeta - tau|^2 = -conj(tau) zeta^{-1} (zeta - tau)^2` on the
    /// circle, so the quotient is `-tau z P(z) / (z - tau)^2` with
    /// `P = z^d t`. Returns the quotient and the size of the discarded
    /// remainder relative to the coefficient scale.
    pub fn deflate_unimodular(&self, tau: Complex64) -> (Self, f64) {
        if self.degree == 0 {
            return (self.clone(), self.coeff(0).norm() / self.max_abs_coeff().max(f64::MIN_POSITIVE));
        }
        let p = self.to_laurent_poly();
        let scale = p.max_abs_coeff().max(f64::MIN_POSITIVE);
        let (q1, r1) = p.deflate(tau);
        let (q2, r2) = q1.deflate(tau);
        let residual = (r1.norm() + r2.norm()) / scale;
        let q = q2.scale(-tau);
        // q has degree 2d-2 and represents z^{d-1} times the quotient
        let d = self.degree - 1;
        let coeffs = (0..=2 * d).map(|i| q.coeff(i)).collect();
        (Self::new(coeffs, self.real), residual)
    }

    /// Minimum and maximum of the real part over `n` equispaced unimodular points.
    pub fn sample_range(&self, n: usize) -> (f64, f64) {
        (0..n)
            .map(|j| {
                let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                self.eval_real(z)
            })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, t)
    }

    #[test]
    fn abs_sq_matches_pointwise() {
        let p = UniPoly::new(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3), Complex64::new(0.0, 1.0)]);
        let t = TrigPoly::abs_sq(&p);
        assert_eq!(t.degree(), 2);
        for j in 0..17 {
            let z = unit(0.37 * j as f64);
            assert!((t.eval_real(z) - p.eval(z).norm_sqr()).abs() < 1e-13);
        }
    }

    #[test]
    fn hermitian_coefficients() {
        let t = TrigPoly::abs_sq(&UniPoly::from_real(&[2.0, -1.0, 0.5]));
        for k in 0..=2 {
            assert_eq!(t.coeff(-k), t.coeff(k).conj());
        }
    }

    #[test]
    fn deflation_removes_unimodular_factor() {
        // 2|1 - zeta|^2 / |zeta - 1|^2 = 2
        let t = TrigPoly::abs_sq(&UniPoly::from_real(&[1.0, -1.0])).scale(2.0);
        let (q, res) = t.deflate_unimodular(Complex64::new(1.0, 0.0));
        assert!(res < 1e-15);
        assert_eq!(q.degree(), 0);
        assert!((q.coeff(0) - 2.0).norm() < 1e-15);

        let tau = unit(1.1);
        let g = UniPoly::from_real(&[3.0, 0.0, 1.0]);
        let f = UniPoly::from_roots(&[tau]) * g.clone();
        let (q, res) = TrigPoly::abs_sq(&f).deflate_unimodular(tau);
        assert!(res < 1e-14);
        for j in 0..11 {
            let z = unit(0.61 * j as f64);
            assert!((q.eval_real(z) - g.eval(z).norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn difference_cancels_top_degree() {
        let a = TrigPoly::abs_sq(&UniPoly::from_real(&[2.0, -1.0]));
        let b = TrigPoly::abs_sq(&UniPoly::from_real(&[1.0, 1.0]));
        let d = a.sub(&b);
        assert!((d.eval_real(unit(0.0)) - (1.0 - 4.0)).abs() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let t = TrigPoly::constant(1.0);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"degree":0,"coeffs":[[1.0,0.0]],"real":true}"#);
    }
}

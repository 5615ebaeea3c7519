use num_complex::Complex64;

use super::roots::{roots_with, RootOptions};
use super::{TrigPoly, UniPoly};
use crate::error::{Error, Result};

/// Spectral factor `Q` with `|Q(zeta)|^2 = t(zeta)` on the circle.
///
/// Roots of `z^d t(z)` come in pairs `r, 1/conj(r)`; `Q` takes the member of
/// each pair inside the disk and half of every unimodular root. `Q` is
/// normalized so its leading coefficient is positive real.
pub fn fejer_riesz(t: &TrigPoly, tol: f64) -> Result<UniPoly> {
    fejer_riesz_with(t, &RootOptions::with_tol(tol.min(1e-10)), tol)
}

pub fn fejer_riesz_with(t: &TrigPoly, opts: &RootOptions, tol: f64) -> Result<UniPoly> {
    if t.is_zero() {
        return Err(Error::Domain("trigonometric polynomial is identically zero".into()));
    }
    let scale = t.max_abs_coeff();
    let t = t.trimmed(1e-14);
    if t.coeffs().iter().zip(t.coeffs().iter().rev()).any(|(a, b)| (a - b.conj()).norm() > 1e-12 * scale) {
        return Err(Error::Domain("trigonometric polynomial is not real on the circle".into()));
    }
    let (lo, _) = t.sample_range(1024);
    if lo < -tol * scale.max(1.0) {
        return Err(Error::Domain(format!("trigonometric polynomial is negative on the circle (min {lo:e})")));
    }
    let d = t.degree();
    let c0 = t.coeff(0).re;
    if d == 0 {
        return Ok(UniPoly::constant(Complex64::new(c0.sqrt(), 0.0)));
    }
    let p = t.to_laurent_poly();
    let mut chosen = Vec::with_capacity(d);
    for r in roots_with(&p, opts)? {
        let m = r.value.norm();
        if (m - 1.0).abs() < opts.unimodular_band.max(1e3 * opts.cluster_radius) {
            if r.multiplicity % 2 != 0 {
                return Err(Error::numeric(
                    format!("unimodular root {} has odd multiplicity {}", r.value, r.multiplicity),
                    (m - 1.0).abs(),
                ));
            }
            let v = r.value / m;
            chosen.extend(std::iter::repeat_n(v, r.multiplicity / 2));
        } else if m < 1.0 {
            chosen.extend(std::iter::repeat_n(r.value, r.multiplicity));
        }
    }
    if chosen.len() != d {
        return Err(Error::numeric(
            format!("root pairing selected {} roots, expected {d}", chosen.len()),
            f64::NAN,
        ));
    }
    let monic = UniPoly::from_roots(&chosen);
    let norm_sq: f64 = monic.coeffs().iter().map(|c| c.norm_sqr()).sum();
    let q = monic.scale(Complex64::new((c0 / norm_sq).sqrt(), 0.0));
    let worst = certificate(&q, &t, 512);
    if worst > tol.max(1e-9) * scale {
        return Err(Error::numeric("spectral factor certificate failed", worst / scale));
    }
    Ok(q)
}

/// Largest `||Q|^2 - t|` over `n` equispaced unimodular points.
pub fn certificate(q: &UniPoly, t: &TrigPoly, n: usize) -> f64 {
    (0..n)
        .map(|j| {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            (q.eval(z).norm_sqr() - t.eval_real(z)).abs()
        })
        .fold(0.0, f64::max)
}

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{line_derivative, BiPolyN1, Rif, Singularity};
use crate::error::{Error, Result};
use crate::polycore::{roots_with, unimodular_common_roots_with, RootOptions, TrigPoly};

/// Settings for [`validate_with`].
#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub tol: f64,
    /// Radial and angular resolution of the interior mesh (plus the origin).
    pub mesh_radial: usize,
    pub mesh_angular: usize,
    pub boundary_samples: usize,
    /// Roots of `|p1|^2 - |p2|^2` closer than this to the circle are taken as
    /// torus singularities.
    pub singular_band: f64,
    pub roots: RootOptions,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            tol: crate::DEFAULT_TOL,
            mesh_radial: 16,
            mesh_angular: 16,
            boundary_samples: 512,
            singular_band: 1e-5,
            roots: RootOptions::default(),
        }
    }
}

impl ValidateOptions {
    pub fn with_tol(tol: f64) -> Self {
        ValidateOptions { tol, ..Self::default() }
    }
}

/// Validate `p` as the denominator of a rational inner function.
pub fn validate(p: &BiPolyN1, tol: f64) -> Result<Rif> {
    validate_with(p, &ValidateOptions::with_tol(tol))
}

pub fn validate_with(p: &BiPolyN1, opts: &ValidateOptions) -> Result<Rif> {
    p.check_degree()?;
    let ptilde = p.reflect();
    check_coprime(p, &ptilde, opts)?;
    check_stable(p, opts)?;
    let singularities = find_singularities(p, &ptilde, opts)?;
    let phi_at_origin = ptilde.p1.coeff(0) / p.p1.coeff(0);
    Ok(Rif { p: p.clone(), ptilde, n: p.n, singularities, phi_at_origin })
}

fn torus_trig(p: &BiPolyN1) -> TrigPoly {
    TrigPoly::abs_sq(&p.p1).sub(&TrigPoly::abs_sq(&p.p2))
}

fn check_coprime(p: &BiPolyN1, pt: &BiPolyN1, opts: &ValidateOptions) -> Result<()> {
    let size: f64 = p.p1.coeffs().iter().chain(p.p2.coeffs()).map(|c| c.norm_sqr()).sum();
    // a common factor of positive z2-degree makes Res_{z2}(p, p~) vanish identically
    if torus_trig(p).max_abs_coeff() <= 1e-12 * size {
        return Err(Error::NotCoprime("|p1|^2 - |p2|^2 vanishes identically, so p~ is a multiple of p".into()));
    }
    // a common factor in z1 alone is a shared unimodular root of p1, p2, p1~, p2~
    if !p.p1.is_zero() && !p.p2.is_zero() {
        let shared = unimodular_common_roots_with(&p.p1, &p.p2, &opts.roots)?;
        for g in shared {
            let vals = [pt.p1.eval(g), pt.p2.eval(g)];
            if vals.iter().all(|v| v.norm() <= 1e-8 * size.sqrt()) {
                return Err(Error::NotCoprime(format!("common factor (z1 - {g})")));
            }
        }
    }
    Ok(())
}

fn check_stable(p: &BiPolyN1, opts: &ValidateOptions) -> Result<()> {
    if p.p1.is_zero() || p.p1.coeff(0).norm() == 0.0 {
        return Err(Error::NotStable("p vanishes at the origin".into()));
    }
    // p(z1, 0) = p1(z1) must not vanish on the closed disk
    if p.p1.degree().unwrap_or(0) > 0 {
        for r in roots_with(&p.p1, &opts.roots)? {
            if r.value.norm() <= 1.0 + opts.roots.unimodular_band {
                return Err(Error::NotStable(format!("p(z1, 0) vanishes at z1 = {}", r.value)));
            }
        }
    }
    // the z2-slice is Moebius: its unique zero -p1/p2 must leave the disk
    let mut mesh = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=opts.mesh_radial {
        let r = i as f64 / opts.mesh_radial as f64;
        for j in 0..opts.mesh_angular {
            mesh.push(Complex64::from_polar(r, TAU * j as f64 / opts.mesh_angular as f64));
        }
    }
    for z in mesh {
        let (a, b) = (p.p1.eval(z).norm(), p.p2.eval(z).norm());
        let interior = z.norm() < 1.0 - 1e-12;
        if (interior && b >= a) || (!interior && b > a * (1.0 + opts.tol)) {
            return Err(Error::NotStable(format!("p has a zero with z1 = {z} and |z2| <= 1")));
        }
    }
    for j in 0..opts.boundary_samples {
        let z = Complex64::from_polar(1.0, TAU * (j as f64 + 0.5) / opts.boundary_samples as f64);
        let (a, b) = (p.p1.eval(z).norm(), p.p2.eval(z).norm());
        if b > a * (1.0 + opts.tol) {
            return Err(Error::NotStable(format!("p has a zero with z1 = {z} and |z2| < 1")));
        }
    }
    Ok(())
}

fn find_singularities(p: &BiPolyN1, pt: &BiPolyN1, opts: &ValidateOptions) -> Result<Vec<Singularity>> {
    let t = torus_trig(p).trimmed(1e-14);
    if t.degree() == 0 {
        return Ok(Vec::new());
    }
    let laurent = t.to_laurent_poly();
    // group near-circle roots; a k-fold torus root may come back split
    let mut groups: Vec<(Vec<Complex64>, usize)> = Vec::new();
    for r in roots_with(&laurent, &opts.roots)? {
        if (r.value.norm() - 1.0).abs() >= opts.singular_band {
            continue;
        }
        match groups.iter_mut().find(|(g, _)| (g[0] - r.value).norm() < 1e-3) {
            Some((g, m)) => {
                g.push(r.value);
                *m += r.multiplicity;
            }
            None => groups.push((vec![r.value], r.multiplicity)),
        }
    }
    let mut out = Vec::new();
    for (g, mult) in groups {
        let mean: Complex64 = g.iter().sum::<Complex64>() / g.len() as f64;
        let tau = mean / mean.norm();
        if mult % 2 != 0 {
            return Err(Error::numeric(
                format!("torus root {tau} has odd multiplicity {mult}"),
                (mean.norm() - 1.0).abs(),
            ));
        }
        let (a, b) = (p.p1.eval(tau), p.p2.eval(tau));
        if b.norm() <= 1e-12 * p.p2.abs_scale(tau).max(1e-300) {
            return Err(Error::Precondition(format!("p1 and p2 both vanish at {tau}")));
        }
        let lambda = -a / b;
        let alpha = pt.p2.eval(tau) / b;
        for (name, v) in [("lambda", lambda), ("alpha", alpha)] {
            if (v.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::numeric(format!("{name} = {v} at tau = {tau} is not unimodular"), (v.norm() - 1.0).abs()));
            }
        }
        let lambda = lambda / lambda.norm();
        let alpha = alpha / alpha.norm();
        let deriv = line_derivative(p, pt, tau, lambda, alpha, opts.tol.max(1e-7))?;
        out.push(Singularity {
            tau,
            lambda,
            exceptional_alpha: alpha,
            deriv_constant: deriv,
            torus_multiplicity: mult,
        });
    }
    out.sort_by(|x, y| x.tau.arg().rem_euclid(TAU).total_cmp(&y.tau.arg().rem_euclid(TAU)));
    Ok(out)
}

/// Outcome of validation in report form (never an error).
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub stable: bool,
    pub coprime: bool,
    pub singularities: Vec<Singularity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn validation_report(p: &BiPolyN1, tol: f64) -> ValidationReport {
    match validate(p, tol) {
        Ok(rif) => ValidationReport { stable: true, coprime: true, singularities: rif.singularities, error: None },
        Err(e) => ValidationReport {
            stable: !matches!(e, Error::NotStable(_)),
            coprime: !matches!(e, Error::NotCoprime(_)),
            singularities: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

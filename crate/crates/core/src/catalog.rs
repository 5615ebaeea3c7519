//! Built-in example RIFs with facts that can be checked by the library.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::agler::{compute_q, AglerPieces, AglerPoly, Provenance};
use crate::clark::clark_measure;
use crate::error::{Error, Result};
use crate::polycore::UniPoly;
use crate::rif::{validate, BiPolyN1, Rif};

/// A checkable statement about a catalog RIF. `alpha` fields select the Clark measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "quantity", rename_all = "snake_case")]
pub enum Fact {
    SingularityCount { value: usize },
    Singularity { index: usize, tau: Complex64, lambda: Complex64, alpha: Complex64, mult: usize },
    DerivConstant { index: usize, value: Complex64 },
    PhiAtOrigin { value: Complex64 },
    LineMass { alpha: Complex64, tau: Complex64, mass: f64 },
    BlaschkeDegree { alpha: Complex64, value: usize },
    BlaschkeValue { alpha: Complex64, z: Complex64, value: Complex64 },
    WeightAt { alpha: Complex64, zeta: Complex64, value: f64 },
    TotalMass { alpha: Complex64, value: f64 },
    /// `Q` after normalization to a positive leading coefficient.
    SpectralFactor { coeffs: Vec<Complex64> },
}

/// A fact with a short human-readable gloss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentedFact {
    #[serde(flatten)]
    pub fact: Fact,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub rif: BiPolyN1,
    pub documented_facts: Vec<DocumentedFact>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(x: f64) -> Complex64 {
    c(x, 0.0)
}

fn fact(fact: Fact, note: &str) -> DocumentedFact {
    DocumentedFact { fact, note: note.into() }
}

fn entry(name: &str, description: &str, n: usize, p1: &[f64], p2: &[f64], facts: Vec<DocumentedFact>) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        description: description.into(),
        rif: BiPolyN1 { n, p1: UniPoly::from_real(p1), p2: UniPoly::from_real(p2) },
        documented_facts: facts,
    }
}

/// All catalog entries, in a fixed order.
pub fn entries() -> Vec<CatalogEntry> {
    use Fact::*;
    let s2 = 2f64.sqrt();
    vec![
        entry(
            "fave",
            "p = 2 - z1 - z2, phi = (2 z1 z2 - z1 - z2)/(2 - z1 - z2); one singularity at (1,1)",
            1,
            &[2.0, -1.0],
            &[-1.0],
            vec![
                fact(SingularityCount { value: 1 }, "only torus zero of p is (1,1)"),
                fact(Singularity { index: 0, tau: r(1.0), lambda: r(1.0), alpha: r(-1.0), mult: 2 }, "exceptional value -1"),
                fact(DerivConstant { index: 0, value: r(-2.0) }, "d phi/d z1 = -2 on {1} x T"),
                fact(PhiAtOrigin { value: r(0.0) }, "p~ has no constant term"),
                fact(BlaschkeDegree { alpha: r(-1.0), value: 0 }, "B_{-1} is the constant 1"),
                fact(WeightAt { alpha: r(-1.0), zeta: c(0.0, 1.0), value: 0.5 }, "W_{-1} is constant 1/2"),
                fact(LineMass { alpha: r(-1.0), tau: r(1.0), mass: 0.5 }, "sigma_{-1} = (delta_1 x m + m x delta_1)/2"),
                fact(TotalMass { alpha: c(0.0, 1.0), value: 1.0 }, "probability measure since phi(0) = 0"),
                fact(SpectralFactor { coeffs: vec![r(-s2), r(s2)] }, "|Q|^2 = 2|1 - zeta|^2"),
            ],
        ),
        entry(
            "amy",
            "p = 4 - z2 - 3 z1 - z1 z2 + z1^2; one singularity at (1,1) where W_{-1} vanishes",
            2,
            &[4.0, -3.0, 1.0],
            &[-1.0, -1.0],
            vec![
                fact(SingularityCount { value: 1 }, "only torus zero of p is (1,1)"),
                fact(Singularity { index: 0, tau: r(1.0), lambda: r(1.0), alpha: r(-1.0), mult: 4 }, "exceptional value -1, multiplicity 4"),
                fact(DerivConstant { index: 0, value: r(-2.0) }, "d phi/d z1 = -2 on {1} x T"),
                fact(PhiAtOrigin { value: r(0.0) }, "p~ has no constant term"),
                fact(BlaschkeDegree { alpha: r(-1.0), value: 1 }, "B_{-1}(z) = z"),
                fact(BlaschkeValue { alpha: r(-1.0), z: c(0.3, -0.2), value: c(0.3, -0.2) }, "B_{-1}(z) = z"),
                fact(WeightAt { alpha: r(-1.0), zeta: r(-1.0), value: 1.0 }, "W_{-1} = |zeta - 1|^2 / 4"),
                fact(WeightAt { alpha: r(-1.0), zeta: r(1.0), value: 0.0 }, "W_{-1} vanishes at the singular abscissa"),
                fact(LineMass { alpha: r(-1.0), tau: r(1.0), mass: 0.5 }, "line mass 1/|d phi/d z1| = 1/2"),
                fact(SpectralFactor { coeffs: vec![r(2.0), r(-4.0), r(2.0)] }, "|Q|^2 = 4|1 - zeta|^4"),
            ],
        ),
        entry(
            "amy-variant",
            "p = 2 - z1 z2 - z1^2 z2; sigma_{-1} has the same support as for amy but a different weight",
            2,
            &[2.0],
            &[0.0, -1.0, -1.0],
            vec![
                fact(SingularityCount { value: 1 }, "only torus zero of p is (1,1)"),
                fact(Singularity { index: 0, tau: r(1.0), lambda: r(1.0), alpha: r(-1.0), mult: 2 }, "exceptional value -1"),
                fact(DerivConstant { index: 0, value: r(-0.5) }, "d phi/d z1 = -1/2 on {1} x T"),
                fact(PhiAtOrigin { value: r(-0.5) }, "phi(0,0) = -1/2"),
                fact(BlaschkeValue { alpha: r(-1.0), z: c(0.3, -0.2), value: c(0.3, -0.2) }, "B_{-1}(z) = z as for amy"),
                fact(WeightAt { alpha: r(-1.0), zeta: r(1.0), value: 1.0 }, "weights differ: W_{-1} is identically 1"),
                fact(WeightAt { alpha: r(-1.0), zeta: r(-1.0), value: 1.0 }, "weights differ: W_{-1} is identically 1"),
                fact(LineMass { alpha: r(-1.0), tau: r(1.0), mass: 2.0 }, "line mass 1/|d phi/d z1| = 2"),
                fact(TotalMass { alpha: r(-1.0), value: 3.0 }, "(1 - 1/4)/|-1 + 1/2|^2"),
            ],
        ),
        entry(
            "deg31",
            "p = 4 - z2 + z1 z2 - 3 z1^2 z2 - z1^3 z2; singularities at (1,1) and (-1,1) of different contact order",
            3,
            &[4.0],
            &[-1.0, 1.0, -3.0, -1.0],
            vec![
                fact(SingularityCount { value: 2 }, "torus zeros (1,1) and (-1,1)"),
                fact(Singularity { index: 0, tau: r(1.0), lambda: r(1.0), alpha: r(-1.0), mult: 2 }, "exceptional value -1 at (1,1)"),
                fact(Singularity { index: 1, tau: r(-1.0), lambda: r(1.0), alpha: r(1.0), mult: 4 }, "exceptional value 1 at (-1,1)"),
                fact(DerivConstant { index: 0, value: r(-1.0) }, "d phi/d z1 = -1 on {1} x T"),
                fact(DerivConstant { index: 1, value: r(-2.0) }, "d phi/d z1 = -2 on {-1} x T"),
                fact(PhiAtOrigin { value: r(-0.25) }, "phi(0,0) = -1/4"),
                fact(BlaschkeDegree { alpha: r(-1.0), value: 2 }, "B_{-1} = (3z^2 + 1)/(3 + z^2)"),
                fact(BlaschkeValue { alpha: r(-1.0), z: r(0.5), value: r(1.75 / 3.25) }, "B_{-1} = (3z^2 + 1)/(3 + z^2)"),
                fact(BlaschkeValue { alpha: r(1.0), z: r(0.5), value: r(1.25 / 4.25) }, "B_1 = (5z^2 - 2z + 1)/(z^2 - 2z + 5)"),
                fact(LineMass { alpha: r(-1.0), tau: r(1.0), mass: 1.0 }, "c_1 at alpha = -1"),
                fact(LineMass { alpha: r(1.0), tau: r(-1.0), mass: 0.5 }, "c_1 at alpha = 1"),
                fact(WeightAt { alpha: r(-1.0), zeta: r(1.0), value: 1.0 }, "W_{-1} does not vanish at tau = 1"),
                fact(WeightAt { alpha: r(1.0), zeta: r(-1.0), value: 0.0 }, "W_1 vanishes at tau = -1"),
                fact(TotalMass { alpha: r(-1.0), value: 5.0 / 3.0 }, "(1 - 1/16)/|-1 + 1/4|^2"),
                fact(TotalMass { alpha: r(1.0), value: 3.0 / 5.0 }, "(1 - 1/16)/|1 + 1/4|^2"),
            ],
        ),
    ]
}

pub fn names() -> Vec<String> {
    entries().into_iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name == name)
}

/// Hand-written decomposition `|p|^2 - |p~|^2 = (1-|z2|^2)|Q|^2 + (1-|z1|^2) sum |R_j|^2`
/// for the entries where one is known in closed form.
pub fn agler_fixture(name: &str) -> Option<AglerPieces> {
    let s2 = 2f64.sqrt();
    let poly = UniPoly::from_real;
    match name {
        "fave" => Some(AglerPieces {
            q: poly(&[s2, -s2]),
            r_list: vec![AglerPoly::new(poly(&[s2]), poly(&[-s2]))],
            provenance: Provenance::Fixture,
        }),
        "amy" => Some(AglerPieces {
            q: poly(&[2.0, -4.0, 2.0]),
            r_list: vec![
                AglerPoly::new(poly(&[2.0, -2.0]), poly(&[-2.0, 2.0])),
                AglerPoly::new(poly(&[2.0 * s2]), poly(&[0.0, -2.0 * s2])),
            ],
            provenance: Provenance::Fixture,
        }),
        _ => None,
    }
}

/// Validate a catalog entry by name.
pub fn load(name: &str, tol: f64) -> Result<Rif> {
    let e = get(name).ok_or_else(|| Error::Domain(format!("unknown catalog entry {name:?}")))?;
    validate(&e.rif, tol)
}

impl Fact {
    /// Absolute deviation between the library's value and the documented one.
    pub fn deviation(&self, rif: &Rif, nodes: usize, tol: f64) -> Result<f64> {
        let sing = |i: usize| {
            rif.singularities
                .get(i)
                .ok_or_else(|| Error::numeric(format!("singularity {i} missing"), f64::INFINITY))
        };
        Ok(match self {
            Fact::SingularityCount { value } => (rif.singularities.len() as f64 - *value as f64).abs(),
            Fact::Singularity { index, tau, lambda, alpha, mult } => {
                let s = sing(*index)?;
                let m = if s.torus_multiplicity == *mult { 0.0 } else { f64::INFINITY };
                [(s.tau - tau).norm(), (s.lambda - lambda).norm(), (s.exceptional_alpha - alpha).norm(), m]
                    .into_iter()
                    .fold(0.0, f64::max)
            }
            Fact::DerivConstant { index, value } => (sing(*index)?.deriv_constant - value).norm(),
            Fact::PhiAtOrigin { value } => (rif.phi_at_origin - value).norm(),
            Fact::LineMass { alpha, tau, mass } => {
                let cm = clark_measure(rif, *alpha, tol)?;
                match cm.lines.iter().find(|l| (l.tau - tau).norm() < 1e-6) {
                    Some(l) => (l.mass - mass).abs(),
                    None => f64::INFINITY,
                }
            }
            Fact::BlaschkeDegree { alpha, value } => {
                let cm = clark_measure(rif, *alpha, tol)?;
                (cm.balpha.degree() as f64 - *value as f64).abs()
            }
            Fact::BlaschkeValue { alpha, z, value } => (clark_measure(rif, *alpha, tol)?.balpha.eval(*z) - value).norm(),
            Fact::WeightAt { alpha, zeta, value } => (clark_measure(rif, *alpha, tol)?.weight(*zeta) - value).abs(),
            Fact::TotalMass { alpha, value } => {
                let cm = clark_measure(rif, *alpha, tol)?;
                (cm.integrate(|_| Complex64::new(1.0, 0.0), nodes).re - value).abs()
            }
            Fact::SpectralFactor { coeffs } => {
                let q = compute_q(rif, tol)?;
                let n = q.coeffs().len().max(coeffs.len());
                (0..n)
                    .map(|k| (q.coeff(k) - coeffs.get(k).copied().unwrap_or_default()).norm())
                    .fold(0.0, f64::max)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_documented_fact_holds() {
        for e in entries() {
            let rif = validate(&e.rif, 1e-8).unwrap();
            for f in &e.documented_facts {
                let d = f.fact.deviation(&rif, 4096, 1e-8).unwrap();
                assert!(d < 1e-8, "{}: {:?} off by {d:e}", e.name, f.fact);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for e in entries() {
            let s = serde_json::to_string(&e).unwrap();
            let back: CatalogEntry = serde_json::from_str(&s).unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(names(), vec!["fave", "amy", "amy-variant", "deg31"]);
        assert!(get("nope").is_none());
        assert!(load("deg31", 1e-8).is_ok());
    }

    #[test]
    fn agler_fixtures_are_exact() {
        for name in ["fave", "amy"] {
            let rif = load(name, 1e-8).unwrap();
            let a = agler_fixture(name).unwrap();
            assert!(crate::agler::sos_residual(&rif, &a.q, &a.r_list, 200, 3) < 1e-13, "{name}");
        }
        assert!(agler_fixture("deg31").is_none());
    }
}

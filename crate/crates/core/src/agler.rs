//! Agler decompositions `|p|^2 - |p~|^2 = (1-|z2|^2)|Q|^2 + (1-|z1|^2) sum |R_j|^2`
//! and checks of the Clark embedding through reproducing kernels.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clark::{clark_measure, AlphaKind, TorusPoint};
use crate::error::{Error, Result};
use crate::polycore::{fejer_riesz, UniPoly};
use crate::quadrature::{cauchy2, h2_boundary_norm};
use crate::rif::Rif;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `R(z) = r(z1) + z2 q(z1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AglerPoly {
    pub r: UniPoly,
    pub q: UniPoly,
}

impl AglerPoly {
    pub fn new(r: UniPoly, q: UniPoly) -> Self {
        AglerPoly { r, q }
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.r.eval(z1) + z2 * self.q.eval(z1)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AglerPoly { r: self.r.scale(c), q: self.q.scale(c) }
    }

    fn mul_z1(&self, f: &UniPoly) -> Self {
        AglerPoly { r: &self.r * f, q: &self.q * f }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Supplied by hand for a catalog example.
    Fixture,
    /// Built by [`exceptional_r`].
    ExceptionalConstruction,
}

/// The polynomial `Q` and a list of `R_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AglerPieces {
    #[serde(rename = "Q")]
    pub q: UniPoly,
    #[serde(rename = "R")]
    pub r_list: Vec<AglerPoly>,
    pub provenance: Provenance,
}

/// Spectral factor of `|p1|^2 - |p2|^2`.
pub fn compute_q(rif: &Rif, tol: f64) -> Result<UniPoly> {
    fejer_riesz(&rif.torus_trig(), tol)
}

/// `R(tau, .) / p(tau, .)` for two linear functions of `z2` sharing a root, as
/// the constant left after cancelling it. Returns zero when `R(tau, .)` vanishes
/// identically.
fn cancel_linear(r0: Complex64, r1: Complex64, p0: Complex64, p1: Complex64) -> Result<Complex64> {
    let scale = (r0.norm() + r1.norm()).max(f64::MIN_POSITIVE);
    let pscale = p0.norm() + p1.norm();
    if scale <= 1e-13 * pscale {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cross = r0 * p1 - r1 * p0;
    if cross.norm() > 1e-8 * scale * pscale {
        return Err(Error::numeric("line trace of R/p has an uncancelled pole", cross.norm() / (scale * pscale)));
    }
    Ok(if p1.norm() >= p0.norm() { r1 / p1 } else { r0 / p0 })
}

/// The `l` polynomials attached to an exceptional `alpha`, normalized so that
/// `c_j ||R_j / p(tau_j, .)||^2 = 1` with positive scale factors.
pub fn exceptional_r(rif: &Rif, alpha: Complex64, tol: f64) -> Result<Vec<AglerPoly>> {
    let cm = clark_measure(rif, alpha, tol)?;
    if cm.alpha_class.kind != AlphaKind::Exceptional {
        return Err(Error::Precondition(format!("alpha = {alpha} is generic")));
    }
    let b1 = cm.balpha.numerator();
    let b2 = cm.balpha.denominator();
    let base = AglerPoly::new(b2, -&b1);
    let taus: Vec<Complex64> = cm.lines.iter().map(|l| l.tau).collect();
    let mut out = Vec::with_capacity(taus.len());
    for (j, line) in cm.lines.iter().enumerate() {
        let others: Vec<Complex64> = taus.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &t)| t).collect();
        let raw = base.mul_z1(&UniPoly::from_roots(&others));
        let tau = line.tau;
        let g = cancel_linear(raw.r.eval(tau), raw.q.eval(tau), rif.p.p1.eval(tau), rif.p.p2.eval(tau))?;
        let norm = h2_boundary_norm(|_| g, 64)?;
        if norm == 0.0 {
            return Err(Error::numeric(format!("R_{} vanishes on its own line", j + 1), 0.0));
        }
        let d = 1.0 / (line.mass.sqrt() * norm);
        let r = raw.scale(Complex64::new(d, 0.0));
        // vanishing on the curve part and on the other lines
        let worst_curve = (0..512)
            .map(|i| {
                let z = Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / 512.0);
                let w = cm.balpha.eval(z).conj();
                r.eval(z, w).norm() / (r.r.abs_scale(z) + r.q.abs_scale(z))
            })
            .fold(0.0, f64::max);
        let worst_lines = others
            .iter()
            .flat_map(|&t| (0..16).map(move |i| (t, Complex64::from_polar(1.0, 0.4 * i as f64))))
            .map(|(t, w)| r.eval(t, w).norm() / (r.r.abs_scale(t) + r.q.abs_scale(t)))
            .fold(0.0, f64::max);
        let worst = worst_curve.max(worst_lines);
        if worst > 1e-8 {
            return Err(Error::numeric(format!("R_{} does not vanish on the level set", j + 1), worst));
        }
        out.push(r);
    }
    Ok(out)
}

/// Largest defect of the polarized identity
/// `p(z) conj p(w) - p~(z) conj p~(w) = (1 - z1 conj w1) sum R_j(z) conj R_j(w) + (1 - z2 conj w2) Q(z1) conj Q(w1)`
/// over `count` random pairs in the closed bidisk, divided by the largest `|p(z) p(w)|`.
pub fn sos_residual(rif: &Rif, q: &UniPoly, r_list: &[AglerPoly], count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = || {
        let r: f64 = rng.gen::<f64>().sqrt();
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, t)
    };
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for _ in 0..count.max(1) {
        let (z1, z2, w1, w2) = (point(), point(), point(), point());
        let lhs = rif.p.eval(z1, z2) * rif.p.eval(w1, w2).conj()
            - rif.ptilde.eval(z1, z2) * rif.ptilde.eval(w1, w2).conj();
        let rs: Complex64 = r_list.iter().map(|r| r.eval(z1, z2) * r.eval(w1, w2).conj()).sum();
        let rhs = (ONE - z1 * w1.conj()) * rs + (ONE - z2 * w2.conj()) * q.eval(z1) * q.eval(w1).conj();
        worst = worst.max((lhs - rhs).norm());
        scale = scale.max((rif.p.eval(z1, z2) * rif.p.eval(w1, w2)).norm());
    }
    worst / scale.max(f64::MIN_POSITIVE)
}

/// Target and measured Gram matrices of `J_alpha k_w` over a point set.
#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub points: Vec<TorusPoint>,
    /// `k(w_i, w_j)`, row-major.
    pub target: Vec<Vec<Complex64>>,
    /// `<J k_{w_i}, J k_{w_j}>` in `L^2(sigma_alpha)`, row-major.
    pub measured: Vec<Vec<Complex64>>,
    pub max_abs_deviation: f64,
}

/// `k(w_i, w_j) = (1 - conj(phi(w_i)) phi(w_j)) / ((1 - conj(w_i1) w_j1)(1 - conj(w_i2) w_j2))`.
pub fn kernel_gram(rif: &Rif, points: &[TorusPoint]) -> Vec<Vec<Complex64>> {
    let phis: Vec<Complex64> = points.iter().map(|&(a, b)| rif.phi(a, b)).collect();
    points
        .iter()
        .zip(&phis)
        .map(|(wi, fi)| {
            points
                .iter()
                .zip(&phis)
                .map(|(wj, fj)| {
                    (ONE - fi.conj() * fj) / ((ONE - wi.0.conj() * wj.0) * (ONE - wi.1.conj() * wj.1))
                })
                .collect()
        })
        .collect()
}

pub fn gram_isometry_check(rif: &Rif, alpha: Complex64, points: &[TorusPoint], n: usize, tol: f64) -> Result<GramReport> {
    for (i, w) in points.iter().enumerate() {
        if w.0.norm() >= 1.0 || w.1.norm() >= 1.0 {
            return Err(Error::Domain(format!("point {i} is not in the open bidisk")));
        }
        if points[..i].contains(w) {
            return Err(Error::Domain(format!("point {i} repeats an earlier point")));
        }
    }
    let cm = clark_measure(rif, alpha, tol)?;
    let alpha = cm.alpha();
    let coef: Vec<Complex64> = points.iter().map(|&(a, b)| ONE - alpha * rif.phi(a, b).conj()).collect();
    let atoms = cm.discretize(n).atoms();
    let m = points.len();
    let mut measured = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (zeta, w) in &atoms {
        for (k, (wk, ck)) in points.iter().zip(&coef).enumerate() {
            buf[k] = ck * cauchy2(*wk, *zeta);
        }
        for i in 0..m {
            for j in 0..m {
                measured[i][j] += buf[i] * buf[j].conj() * *w;
            }
        }
    }
    let target = kernel_gram(rif, points);
    let max_abs_deviation = target
        .iter()
        .flatten()
        .zip(measured.iter().flatten())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(GramReport { points: points.to_vec(), target, measured, max_abs_deviation })
}

/// `<R_i/p, R_j/p>` in `L^2(sigma_alpha)`; the identity for the output of [`exceptional_r`].
pub fn orthonormality_check(rif: &Rif, alpha: Complex64, r_list: &[AglerPoly], n: usize, tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let cm = clark_measure(rif, alpha, tol)?;
    if cm.alpha_class.kind != AlphaKind::Exceptional {
        return Err(Error::Precondition(format!("alpha = {alpha} is generic")));
    }
    let m = r_list.len();
    let disc = cm.discretize(n);
    let mut g = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    // curve part: the traces vanish there; nodes that land on a singular point are skipped
    for &((z, w), wt) in &disc.curve {
        let den = rif.p.eval(z, w);
        if den.norm() <= 1e-12 * rif.p.abs_scale(z, w) {
            continue;
        }
        let vals: Vec<Complex64> = r_list.iter().map(|r| r.eval(z, w) / den).collect();
        for i in 0..m {
            for j in 0..m {
                g[i][j] += vals[i] * vals[j].conj() * wt;
            }
        }
    }
    // line parts after cancelling the common zero at lambda_k
    for line in &cm.lines {
        let tau = line.tau;
        let consts = r_list
            .iter()
            .map(|r| cancel_linear(r.r.eval(tau), r.q.eval(tau), rif.p.p1.eval(tau), rif.p.p2.eval(tau)))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..m {
            for j in 0..m {
                let (ci, cj) = (consts[i], consts[j]);
                let v = crate::quadrature::circle_integral(|_| ci * cj.conj(), disc.line_nodes.len());
                g[i][j] += v * line.mass;
            }
        }
    }
    Ok(g)
}

//! Clark measures `sigma_alpha` of a validated RIF in closed form.
//!
//! For unimodular `alpha` the measure is the push-forward of `W_alpha dm` to
//! the graph `{(zeta, conj B_alpha(zeta))}` plus Lebesgue measure of mass
//! `c_k = 1/|C_k|` on every vertical line `{tau_k} x T` whose exceptional
//! value equals `alpha`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{blaschke_from_rational_with, BlaschkeProduct, RootOptions, TrigPoly, UniPoly};
use crate::quadrature::{pairwise_sum, CircleRule, GradedRule};
use crate::rif::Rif;

/// Point of the torus as `(zeta1, zeta2)`.
pub type TorusPoint = (Complex64, Complex64);

/// Default node count for curve and line quadrature.
pub const DEFAULT_NODES: usize = 4096;
/// Cap for [`ClarkMeasure::integrate_adaptive`].
pub const MAX_NODES: usize = 1 << 20;
/// Blaschke zeros closer than this to the circle switch the curve rule to a graded one.
pub const GRADE_GAP: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaKind {
    Generic,
    Exceptional,
}

/// Whether `alpha` is the value of `phi` at some torus singularity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaClass {
    pub alpha: Complex64,
    pub kind: AlphaKind,
    /// Indices into `rif.singularities` whose exceptional value equals `alpha`.
    pub matched_singularities: Vec<usize>,
}

impl AlphaClass {
    pub fn is_exceptional(&self) -> bool {
        self.kind == AlphaKind::Exceptional
    }
}

fn unimodular_alpha(alpha: Complex64, tol: f64) -> Result<Complex64> {
    if !alpha.is_finite() || (alpha.norm() - 1.0).abs() > tol.max(1e-12) {
        return Err(Error::Domain(format!("alpha = {alpha} is not on the unit circle")));
    }
    Ok(alpha / alpha.norm())
}

/// Match `alpha` against every singularity's exceptional value.
pub fn classify_alpha(rif: &Rif, alpha: Complex64, tol: f64) -> Result<AlphaClass> {
    let alpha = unimodular_alpha(alpha, tol)?;
    let matched: Vec<usize> = rif
        .singularities
        .iter()
        .enumerate()
        .filter(|(_, s)| (s.exceptional_alpha - alpha).norm() < tol)
        .map(|(k, _)| k)
        .collect();
    let kind = if matched.is_empty() { AlphaKind::Generic } else { AlphaKind::Exceptional };
    Ok(AlphaClass { alpha, kind, matched_singularities: matched })
}

/// Distance from `alpha` to the closest exceptional value, if there is one.
pub fn nearest_exceptional_distance(rif: &Rif, alpha: Complex64) -> Option<f64> {
    rif.singularities
        .iter()
        .map(|s| (s.exceptional_alpha - alpha).norm())
        .min_by(f64::total_cmp)
}

/// Vertical line component `{tau} x T` with mass `mass`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClarkLine {
    pub tau: Complex64,
    pub mass: f64,
    /// Index into `rif.singularities`.
    pub singularity: usize,
}

/// Closed-form description of `sigma_alpha`.
#[derive(Clone, Debug)]
pub struct ClarkMeasure {
    pub alpha_class: AlphaClass,
    pub balpha: BlaschkeProduct,
    /// `|p1|^2 - |p2|^2` with the cancelled `|zeta - tau_k|^2` factors removed.
    pub weight_num: TrigPoly,
    /// `|p1~ - alpha p2|^2` with the same factors removed.
    pub weight_den: TrigPoly,
    /// Points where the uncancelled weight quotient is `0/0`.
    pub removable_points: Vec<Complex64>,
    pub lines: Vec<ClarkLine>,
    /// `p1~ - alpha p2` after cancellation; `weight_den = |num|^2`.
    num: UniPoly,
    phi_at_origin: Complex64,
    tau_all: Vec<Complex64>,
}

impl ClarkMeasure {
    pub fn alpha(&self) -> Complex64 {
        self.alpha_class.alpha
    }

    /// `W_alpha(zeta)` for unimodular `zeta`.
    pub fn weight(&self, zeta: Complex64) -> f64 {
        self.weight_num.eval_real(zeta) / self.num.eval(zeta).norm_sqr()
    }

    /// `(1 - |phi(0)|^2) / |alpha - phi(0)|^2`.
    pub fn total_mass_closed_form(&self) -> f64 {
        let a = self.phi_at_origin;
        (1.0 - a.norm_sqr()) / (self.alpha() - a).norm_sqr()
    }

    pub fn line_mass(&self) -> f64 {
        self.lines.iter().map(|l| l.mass).sum()
    }

    /// Blaschke zeros close enough to the circle to need the graded rule.
    fn near_circle_zeros(&self) -> Vec<Complex64> {
        self.balpha.zeros.iter().copied().filter(|a| 1.0 - a.norm() < GRADE_GAP).collect()
    }

    /// Atoms `(point, weight)` of an `n`-node discretization of the measure.
    pub fn discretize(&self, n: usize) -> Discretization {
        let near = self.near_circle_zeros();
        let (nodes, rule_w): (Vec<Complex64>, Vec<f64>) = if near.is_empty() {
            let rule = CircleRule { n: n.max(1) };
            (rule.nodes().collect(), vec![rule.weight(); rule.n])
        } else {
            let g = GradedRule::new(&near, n.max(1));
            (g.nodes, g.weights)
        };
        let curve: Vec<(TorusPoint, f64)> = nodes
            .iter()
            .zip(&rule_w)
            .map(|(&z, &w)| ((z, self.balpha.eval(z).conj()), w * self.weight(z)))
            .collect();
        let rule = CircleRule { n: n.max(1) };
        let line_nodes: Vec<Complex64> = rule.nodes().collect();
        let lines = self
            .lines
            .iter()
            .map(|l| (l.tau, l.mass * rule.weight()))
            .collect();
        Discretization { curve, lines, line_nodes }
    }

    /// `int f dsigma_alpha` with `n` nodes on the curve and on each line.
    pub fn integrate<F>(&self, f: F, n: usize) -> Complex64
    where
        F: Fn(TorusPoint) -> Complex64 + Sync,
    {
        self.discretize(n).integrate(f)
    }

    /// Curve part only.
    pub fn integrate_curve<F>(&self, f: F, n: usize) -> Complex64
    where
        F: Fn(TorusPoint) -> Complex64 + Sync,
    {
        self.discretize(n).integrate_curve(f)
    }

    /// Double the node count from `n0` until successive values agree to `tol`
    /// (relative to `max(1, |value|)`) or [`MAX_NODES`] is reached.
    pub fn integrate_adaptive<F>(&self, f: F, n0: usize, tol: f64) -> (Complex64, usize)
    where
        F: Fn(TorusPoint) -> Complex64 + Sync,
    {
        let mut n = n0.max(2);
        let mut prev = self.integrate(&f, n);
        while n < MAX_NODES {
            n *= 2;
            let next = self.integrate(&f, n);
            if (next - prev).norm() <= tol * next.norm().max(1.0) {
                return (next, n);
            }
            prev = next;
        }
        (prev, n)
    }

    /// Order of vanishing of `W_alpha` at each singular abscissa, in powers of `|zeta - tau|`.
    pub fn vanishing_orders(&self) -> Vec<(Complex64, usize)> {
        self.tau_all
            .iter()
            .map(|&tau| {
                let mut t = self.weight_num.clone();
                let mut order = 0;
                while t.degree() > 0 && t.eval_real(tau).abs() <= 1e-9 * t.max_abs_coeff() {
                    let (q, _) = t.deflate_unimodular(tau);
                    t = q;
                    order += 2;
                }
                (tau, order)
            })
            .collect()
    }

    /// Largest `|p~ - alpha p|` over `n` curve samples, relative to the coefficient scale.
    pub fn support_residual(&self, rif: &Rif, n: usize) -> f64 {
        let alpha = self.alpha();
        CircleRule { n: n.max(1) }
            .nodes()
            .map(|z| {
                let w = self.balpha.eval(z).conj();
                let v = rif.ptilde.eval(z, w) - alpha * rif.p.eval(z, w);
                v.norm() / (rif.ptilde.abs_scale(z, w) + rif.p.abs_scale(z, w))
            })
            .fold(0.0, f64::max)
    }

    pub fn report(&self, n: usize) -> ClarkReport {
        let total = self.integrate(|_| Complex64::new(1.0, 0.0), n).re;
        ClarkReport {
            alpha: self.alpha(),
            kind: self.alpha_class.kind,
            blaschke: self.balpha.clone(),
            weight: WeightReport { num: self.weight_num.clone(), den: self.weight_den.clone() },
            lines: self.lines.iter().map(|l| LineReport { tau: l.tau, mass: l.mass }).collect(),
            total_mass: total,
            total_mass_closed_form: self.total_mass_closed_form(),
            removable_points: self.removable_points.clone(),
            vanishing_orders: self
                .vanishing_orders()
                .into_iter()
                .map(|(tau, order)| VanishingReport { tau, order })
                .collect(),
        }
    }
}

/// Quadrature atoms for a Clark measure.
#[derive(Clone, Debug)]
pub struct Discretization {
    /// `((zeta, conj B(zeta)), rule weight * W(zeta))`.
    pub curve: Vec<(TorusPoint, f64)>,
    /// `(tau, mass / n)` per line; every line uses `line_nodes` in the second slot.
    pub lines: Vec<(Complex64, f64)>,
    pub line_nodes: Vec<Complex64>,
}

impl Discretization {
    pub fn integrate_curve<F>(&self, f: F) -> Complex64
    where
        F: Fn(TorusPoint) -> Complex64 + Sync,
    {
        let term = |&(pt, w): &(TorusPoint, f64)| f(pt) * w;
        let vals: Vec<Complex64> = if self.curve.len() >= 8192 {
            self.curve.par_iter().map(term).collect()
        } else {
            self.curve.iter().map(term).collect()
        };
        pairwise_sum(&vals)
    }

    pub fn integrate_lines<F>(&self, f: F) -> Complex64
    where
        F: Fn(TorusPoint) -> Complex64 + Sync,
    {
        self.lines
            .iter()
            .map(|&(tau, w)| {
                let vals: Vec<Complex64> = self.line_nodes.iter().map(|&z| f((tau, z))).collect();
                pairwise_sum(&vals) * w
            })
            .sum()
    }

    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(TorusPoint) -> Complex64 + Sync,
    {
        self.integrate_curve(&f) + self.integrate_lines(&f)
    }

    /// Every atom as `(point, weight)`, curve first, then lines in order.
    pub fn atoms(&self) -> Vec<(TorusPoint, f64)> {
        let mut out = self.curve.clone();
        for &(tau, w) in &self.lines {
            out.extend(self.line_nodes.iter().map(|&z| ((tau, z), w)));
        }
        out
    }
}

/// Build `sigma_alpha`.
pub fn clark_measure(rif: &Rif, alpha: Complex64, tol: f64) -> Result<ClarkMeasure> {
    let class = classify_alpha(rif, alpha, tol)?;
    let alpha = class.alpha;
    let mut num = rif.pt1() - &rif.p.p2.scale(alpha);
    let mut den = &rif.p.p1.scale(alpha) - rif.pt2();
    let mut weight_num = rif.torus_trig();
    let mut removable = Vec::new();
    let mut lines = Vec::new();
    for &k in &class.matched_singularities {
        let s = &rif.singularities[k];
        let scale = num.max_abs_coeff() + den.max_abs_coeff();
        let (qn, rn) = num.deflate(s.tau);
        let (qd, rd) = den.deflate(s.tau);
        if (rn.norm() + rd.norm()) > 1e-6 * scale {
            return Err(Error::numeric(
                format!("B_alpha numerator and denominator do not both vanish at tau = {}", s.tau),
                (rn.norm() + rd.norm()) / scale,
            ));
        }
        let (qt, rt) = weight_num.deflate_unimodular(s.tau);
        if rt > 1e-6 {
            return Err(Error::numeric(format!("weight numerator does not vanish at tau = {}", s.tau), rt));
        }
        num = qn;
        den = qd;
        weight_num = qt;
        removable.push(s.tau);
        lines.push(ClarkLine { tau: s.tau, mass: 1.0 / s.deriv_constant.norm(), singularity: k });
    }
    let opts = RootOptions { tol: 1e-13, ..RootOptions::default() };
    let (balpha, extra) = blaschke_from_rational_with(&num, &den, &opts, tol.max(1e-9))?;
    if !extra.is_empty() {
        // B_alpha has a zero closer to the circle than double precision resolves
        let dist = nearest_exceptional_distance(rif, alpha).unwrap_or(f64::INFINITY);
        let at: Vec<String> = extra.iter().map(|z| z.to_string()).collect();
        return Err(Error::numeric(
            format!(
                "alpha = {alpha} is numerically exceptional: B_alpha has a zero/pole pair on the circle at {} \
                 (distance to the nearest exceptional value {dist:e})",
                at.join(", ")
            ),
            dist,
        ));
    }
    let ell = class.matched_singularities.len();
    if balpha.degree() + ell != rif.n {
        return Err(Error::numeric(
            format!("deg B_alpha = {} but n - l = {}", balpha.degree(), rif.n as isize - ell as isize),
            f64::NAN,
        ));
    }
    let weight_den = TrigPoly::abs_sq(&num);
    Ok(ClarkMeasure {
        alpha_class: class,
        balpha,
        weight_num,
        weight_den,
        removable_points: removable,
        lines,
        num,
        phi_at_origin: rif.phi_at_origin,
        tau_all: rif.singularities.iter().map(|s| s.tau).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unitarity {
    Unitary,
    NotUnitary,
}

/// Caveat attached to every unitarity verdict.
pub const UNITARITY_SCOPE: &str =
    "generic <=> unitary is established for bidegree (n,1) only; higher z2-degree can be unitary at exceptional values";

/// `J_alpha` is unitary exactly when `alpha` is generic.
pub fn classify_unitary(rif: &Rif, alpha: Complex64, tol: f64) -> Result<Unitarity> {
    Ok(match classify_alpha(rif, alpha, tol)?.kind {
        AlphaKind::Generic => Unitarity::Unitary,
        AlphaKind::Exceptional => Unitarity::NotUnitary,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "reason")]
pub enum Extremality {
    Extreme,
    NotExtreme,
    Undetermined(String),
}

impl Extremality {
    pub fn label(&self) -> &'static str {
        match self {
            Extremality::Extreme => "extreme",
            Extremality::NotExtreme => "not_extreme",
            Extremality::Undetermined(_) => "undetermined",
        }
    }
}

/// Extreme-point status of `sigma_alpha` among probability measures with
/// pluriharmonic Poisson integral.
pub fn classify_extreme(rif: &Rif, alpha: Complex64, tol: f64) -> Result<Extremality> {
    let class = classify_alpha(rif, alpha, tol)?;
    let scale = rif.ptilde.p1.max_abs_coeff() + rif.ptilde.p2.max_abs_coeff();
    if rif.ptilde.eval(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).norm() > tol * scale {
        return Ok(Extremality::Undetermined("hypothesis phi(0)=0 fails".into()));
    }
    if class.is_exceptional() {
        return Ok(Extremality::NotExtreme);
    }
    if rif.p.bidegree() != rif.ptilde.bidegree() {
        return Ok(Extremality::Undetermined("deg p differs from deg p~".into()));
    }
    if rif.is_saturated(tol)? {
        Ok(Extremality::Extreme)
    } else {
        Ok(Extremality::Undetermined("p is not saturated".into()))
    }
}

/// Sampled unimodular level set `{p~ = alpha p}` in angle coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSetSample {
    /// `(theta1, theta2)` on the graph of `conj B_alpha`, angles in `[-pi, pi]`.
    pub curve_points: Vec<(f64, f64)>,
    /// `theta1` of every vertical line in the level set.
    pub line_abscissae: Vec<f64>,
    /// Index of the singularity behind each line.
    pub line_singularities: Vec<usize>,
}

fn wrap(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(TAU) - PI;
    if t == -PI { PI } else { t }
}

pub fn level_set_sample(rif: &Rif, alpha: Complex64, n: usize, tol: f64) -> Result<LevelSetSample> {
    let cm = clark_measure(rif, alpha, tol)?;
    let n = n.max(1);
    let curve_points = (0..n)
        .map(|j| {
            let theta = -PI + TAU * j as f64 / n as f64;
            let b = cm.balpha.eval(Complex64::from_polar(1.0, theta));
            (theta, wrap(-b.arg()))
        })
        .collect();
    Ok(LevelSetSample {
        curve_points,
        line_abscissae: cm.lines.iter().map(|l| l.tau.arg()).collect(),
        line_singularities: cm.lines.iter().map(|l| l.singularity).collect(),
    })
}

impl LevelSetSample {
    /// CSV with columns `theta1,theta2,branch`; each line gets `line_samples`
    /// rows labelled `line_k` with `k` the 1-based singularity index.
    pub fn to_csv(&self, line_samples: usize) -> String {
        let mut out = String::from("theta1,theta2,branch\n");
        for (a, b) in &self.curve_points {
            out.push_str(&format!("{a:.12},{b:.12},curve\n"));
        }
        let m = line_samples.max(1);
        for (x, k) in self.line_abscissae.iter().zip(&self.line_singularities) {
            for j in 0..m {
                let y = -PI + TAU * j as f64 / m as f64;
                out.push_str(&format!("{x:.12},{y:.12},line_{}\n", k + 1));
            }
        }
        out
    }

    /// Largest `|p~ - alpha p|` (relative to coefficient scale) over all emitted points.
    pub fn residual(&self, rif: &Rif, alpha: Complex64, line_samples: usize) -> f64 {
        let check = |t1: f64, t2: f64| {
            let (z, w) = (Complex64::from_polar(1.0, t1), Complex64::from_polar(1.0, t2));
            let v = rif.ptilde.eval(z, w) - alpha * rif.p.eval(z, w);
            v.norm() / (rif.ptilde.abs_scale(z, w) + rif.p.abs_scale(z, w))
        };
        let mut worst = self.curve_points.iter().map(|&(a, b)| check(a, b)).fold(0.0, f64::max);
        let m = line_samples.max(1);
        for &x in &self.line_abscissae {
            for j in 0..m {
                worst = worst.max(check(x, -PI + TAU * j as f64 / m as f64));
            }
        }
        worst
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightReport {
    pub num: TrigPoly,
    pub den: TrigPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineReport {
    pub tau: Complex64,
    pub mass: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub tau: Complex64,
    pub order: usize,
}

/// JSON shape of a Clark measure.
#[derive(Clone, Debug, Serialize)]
pub struct ClarkReport {
    pub alpha: Complex64,
    pub kind: AlphaKind,
    pub blaschke: BlaschkeProduct,
    pub weight: WeightReport,
    pub lines: Vec<LineReport>,
    pub total_mass: f64,
    pub total_mass_closed_form: f64,
    pub removable_points: Vec<Complex64>,
    pub vanishing_orders: Vec<VanishingReport>,
}

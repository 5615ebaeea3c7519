//! Integration on the circle and the probes built on it.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rif::Rif;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Node counts at or above this are evaluated in parallel.
const PAR_THRESHOLD: usize = 8192;

/// Values above this in `h2_boundary_norm` indicate an uncancelled pole.
pub const OVERFLOW_GUARD: f64 = 1e12;

/// Radii used by [`pointmass_probe`].
pub const PROBE_RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// Uniform rule on the circle: nodes `e^{2 pi i j / N}`, weights `1/N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleRule {
    pub n: usize,
}

impl CircleRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("circle rule needs at least one node".into()));
        }
        Ok(CircleRule { n })
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn node(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * j as f64 / self.n as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n).map(|j| self.node(j))
    }

    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let vals: Vec<Complex64> = if self.n >= PAR_THRESHOLD {
            (0..self.n).into_par_iter().map(|j| f(self.node(j))).collect()
        } else {
            (0..self.n).map(|j| f(self.node(j))).collect()
        };
        pairwise_sum(&vals) * self.weight()
    }
}

/// Sum with a fixed binary tree, independent of thread scheduling.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => ZERO,
        1..=16 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `(1/N) sum f(node)` over the uniform N-node rule.
pub fn circle_integral<F>(f: F, n: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    CircleRule { n: n.max(1) }.integrate(f)
}

/// Double `n` from `n0` until two successive values agree to `tol` or `cap` is reached.
/// Returns the last value and the node count that produced it.
pub fn circle_integral_doubling<F>(f: F, n0: usize, tol: f64, cap: usize) -> (Complex64, usize)
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let mut n = n0.max(1);
    let mut prev = circle_integral(&f, n);
    while n < cap {
        n *= 2;
        let next = circle_integral(&f, n);
        if (next - prev).norm() <= tol * next.norm().max(1.0) {
            return (next, n);
        }
        prev = next;
    }
    (prev, n)
}

/// Poisson kernel of the disk, `(1 - |z|^2) / |zeta - z|^2`.
pub fn poisson1(z: Complex64, zeta: Complex64) -> f64 {
    (1.0 - z.norm_sqr()) / (zeta - z).norm_sqr()
}

/// Poisson kernel of the bidisk at `z`, evaluated at the torus point `zeta`.
pub fn poisson2(z: (Complex64, Complex64), zeta: (Complex64, Complex64)) -> Result<f64> {
    if z.0.norm() >= 1.0 || z.1.norm() >= 1.0 {
        return Err(Error::Domain(format!("({}, {}) is not in the open bidisk", z.0, z.1)));
    }
    Ok(poisson1(z.0, zeta.0) * poisson1(z.1, zeta.1))
}

/// Cauchy kernel `1 / ((1 - zeta1 conj w1)(1 - zeta2 conj w2))`.
pub fn cauchy2(w: (Complex64, Complex64), zeta: (Complex64, Complex64)) -> Complex64 {
    ONE / ((ONE - zeta.0 * w.0.conj()) * (ONE - zeta.1 * w.1.conj()))
}

/// `sqrt` of the circle average of `|g|^2`, the H^2 norm of a disk-algebra `g`.
pub fn h2_boundary_norm<G>(g: G, n: usize) -> Result<f64>
where
    G: Fn(Complex64) -> Complex64 + Sync,
{
    let rule = CircleRule::new(n)?;
    let mut worst = 0.0f64;
    let mut vals = Vec::with_capacity(n);
    for z in rule.nodes() {
        let v = g(z);
        let m = v.norm();
        if !m.is_finite() || m > OVERFLOW_GUARD {
            worst = if m.is_finite() { worst.max(m) } else { f64::INFINITY };
        }
        vals.push(Complex64::new(v.norm_sqr(), 0.0));
    }
    if worst > 0.0 {
        return Err(Error::numeric("uncancelled pole on the circle", worst));
    }
    Ok((pairwise_sum(&vals).re * rule.weight()).sqrt())
}

/// `(1-r)^2 |int C_z dsigma_alpha|` along `z = (r tau1, r tau2)` for the radii in [`PROBE_RADII`].
///
/// Uses the closed form
/// `(1 - phi(z) conj phi(0)) / ((1 - conj(alpha) phi(z)) (1 - alpha conj phi(0)))`
/// of the Cauchy integral of the Clark measure. A point mass at `(tau1, tau2)`
/// would keep the sequence bounded away from zero.
pub fn pointmass_probe(rif: &Rif, alpha: Complex64, point: (Complex64, Complex64)) -> Vec<f64> {
    let phi0 = rif.phi_at_origin;
    PROBE_RADII
        .iter()
        .map(|&r| {
            let phi = rif.phi(point.0 * r, point.1 * r);
            let v = (ONE - phi * phi0.conj()) / ((ONE - alpha.conj() * phi) * (ONE - alpha * phi0.conj()));
            (1.0 - r).powi(2) * v.norm()
        })
        .collect()
}

/// Node/weight rule on the circle concentrated near a few points inside the disk.
///
/// The node density is a mixture of the uniform density and Poisson kernels
/// `P_rho(theta - theta_c)` for each center `c` and a geometric ladder of radii
/// `rho` running from 0.9 up to `|c|`. Nodes are images of a uniform grid under
/// the inverse of the mixture's distribution function, so an integrand with
/// near-poles at the centers becomes smooth in the grid variable.
#[derive(Clone, Debug)]
pub struct GradedRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl GradedRule {
    pub fn new(centers: &[Complex64], n: usize) -> Self {
        let mut comps: Vec<(f64, f64)> = Vec::new(); // (angle, 1 - rho)
        for c in centers {
            let gap = (1.0 - c.norm()).clamp(1e-15, 0.1);
            let mut g = 0.1f64;
            loop {
                comps.push((c.arg(), g));
                if g <= gap {
                    break;
                }
                g = (g * 0.1).max(gap);
            }
        }
        let base = 0.25;
        let share = if comps.is_empty() { 0.0 } else { (1.0 - base) / comps.len() as f64 };
        let mix = Mixture { base, share, comps, origin: centers.first().map_or(0.0, |c| c.arg()) };
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let s = (j as f64 + 0.5) / n as f64;
            let x = mix.invert(s);
            nodes.push(Complex64::from_polar(1.0, x));
            weights.push(1.0 / (n as f64 * mix.density(x)));
        }
        GradedRule { nodes, weights }
    }

    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let n = self.nodes.len();
        let term = |j: usize| f(self.nodes[j]) * self.weights[j];
        let vals: Vec<Complex64> = if n >= PAR_THRESHOLD {
            (0..n).into_par_iter().map(term).collect()
        } else {
            (0..n).map(term).collect()
        };
        pairwise_sum(&vals)
    }
}

struct Mixture {
    base: f64,
    share: f64,
    comps: Vec<(f64, f64)>,
    origin: f64,
}

/// `int_0^x P_r(s) ds` for `r = 1 - g`, continuous and increasing on the whole line.
fn poisson_cdf(g: f64, x: f64) -> f64 {
    let r = 1.0 - g;
    let h = (0.5 * x).sin();
    x + 2.0 * (r * x.sin()).atan2(g + 2.0 * r * h * h)
}

/// `P_r(x)` for `r = 1 - g`, written to stay accurate when `g` is tiny.
fn poisson_density(g: f64, x: f64) -> f64 {
    let r = 1.0 - g;
    let h = (0.5 * x).sin();
    g * (2.0 - g) / (g * g + 4.0 * r * h * h)
}

impl Mixture {
    /// Density relative to `d theta / 2 pi`.
    fn density(&self, x: f64) -> f64 {
        self.base
            + self.share
                * self
                    .comps
                    .iter()
                    .map(|&(a, g)| poisson_density(g, x - a))
                    .sum::<f64>()
    }

    fn cdf_raw(&self, x: f64) -> f64 {
        (self.base * x + self.share * self.comps.iter().map(|&(a, g)| poisson_cdf(g, x - a)).sum::<f64>())
            / TAU
    }

    /// Angle `x` in `[origin - pi, origin + pi)` with normalized CDF `s`.
    fn invert(&self, s: f64) -> f64 {
        let lo0 = self.origin - PI;
        let f0 = self.cdf_raw(lo0);
        let (mut lo, mut hi) = (lo0, lo0 + TAU);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf_raw(mid) - f0 < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::UniPoly;
use crate::error::{Error, Result};

/// Tuning knobs for [`roots_with`] and [`unimodular_common_roots_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct RootOptions {
    /// Accepted backward error `|p(r)| / sum |c_k| |r|^k`.
    pub tol: f64,
    /// Base radius for merging a cluster into one multiple root. A group of
    /// `k` computed roots is merged when its diameter is below
    /// `cluster_radius^(2/k)` (scaled by `1 + |center|`), since a k-fold root
    /// splits at roughly `eps^(1/k)`.
    pub cluster_radius: f64,
    /// A root is unimodular when `||r| - 1| < unimodular_band`.
    pub unimodular_band: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-10,
            cluster_radius: 1e-6,
            unimodular_band: 1e-8,
            max_iter: 600,
        }
    }
}

impl RootOptions {
    pub fn with_tol(tol: f64) -> Self {
        RootOptions { tol, ..Self::default() }
    }

    fn merge_radius(&self, k: usize, center: Complex64) -> f64 {
        let base = if k <= 1 {
            0.0
        } else {
            self.cluster_radius.powf(2.0 / k as f64).min(1e-2)
        };
        base * (1.0 + center.norm())
    }
}

/// A root with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Roots of `p` with multiplicities summing to `deg p`.
pub fn roots(p: &UniPoly, tol: f64) -> Result<Vec<Root>> {
    roots_with(p, &RootOptions::with_tol(tol))
}

pub fn roots_with(p: &UniPoly, opts: &RootOptions) -> Result<Vec<Root>> {
    let raw = simple_roots(p, opts)?;
    Ok(cluster(p, raw, opts))
}

/// All roots of `p` listed individually (no clustering), Aberth iteration with
/// a companion-matrix fallback.
pub fn simple_roots(p: &UniPoly, opts: &RootOptions) -> Result<Vec<Complex64>> {
    let Some(deg) = p.degree() else {
        return Err(Error::Domain("roots of the zero polynomial".into()));
    };
    let zeros_at_origin = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let q = UniPoly::new(p.coeffs()[zeros_at_origin..].to_vec());
    let mut out = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let m = deg - zeros_at_origin;
    match m {
        0 => {}
        1 => out.push(-q.coeff(0) / q.coeff(1)),
        _ => {
            let found = match aberth(&q, opts) {
                Some(z) => z,
                None => {
                    let z = companion_roots(&q)?;
                    let z: Vec<_> = z.into_iter().map(|r| polish(&q, r)).collect();
                    let worst = z.iter().map(|&r| backward_error(&q, r)).fold(0.0, f64::max);
                    if worst > opts.tol.max(1e-9) {
                        return Err(Error::numeric("root iteration did not converge", worst));
                    }
                    z
                }
            };
            out.extend(found);
        }
    }
    Ok(out)
}

pub(crate) fn backward_error(p: &UniPoly, z: Complex64) -> f64 {
    let scale = p.abs_scale(z);
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(z).norm() / scale
}

fn aberth(p: &UniPoly, opts: &RootOptions) -> Option<Vec<Complex64>> {
    let n = p.degree()?;
    let lead = p.leading();
    let r0 = (p.coeff(0) / lead).norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r0, theta)
        })
        .collect();
    let stop = 4.0 * f64::EPSILON * (n as f64);
    let mut done = vec![false; n];
    for _ in 0..opts.max_iter {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[i]);
            let scale = p.abs_scale(z[i]);
            if v.norm() <= stop * scale {
                done[i] = true;
                continue;
            }
            all_done = false;
            let ratio = v / dv;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                if w.norm() <= f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
            } else {
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
            }
        }
        if all_done {
            break;
        }
    }
    // Roots of multiplicity k stop at a backward error that still leaves them
    // spread by about eps^(1/k); a few extra sweeps pull such clusters in.
    for _ in 0..12 {
        for i in 0..n {
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i && z[i] != z[j])
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() && backward_error(p, z[i] - w) <= 2.0 * stop.max(backward_error(p, z[i])) {
                z[i] -= w;
            }
        }
    }
    let worst = z.iter().map(|&r| backward_error(p, r)).fold(0.0, f64::max);
    (worst <= opts.tol.max(64.0 * f64::EPSILON)).then_some(z)
}

fn companion_roots(p: &UniPoly) -> Result<Vec<Complex64>> {
    let n = p.degree().unwrap_or(0);
    let lead = p.leading();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeff(i) / lead;
    }
    let schur = Schur::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::numeric("companion eigenvalue iteration did not converge", f64::NAN))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::numeric("companion eigenvalues unavailable", f64::NAN))?;
    Ok(ev.iter().copied().collect())
}

fn polish(p: &UniPoly, mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (v, dv) = p.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        if backward_error(p, next) < backward_error(p, z) {
            z = next;
        } else {
            break;
        }
    }
    z
}

/// Merge computed roots into multiple roots.
///
/// Repeatedly picks the largest group of mutually close roots (a seed plus
/// its nearest neighbours) whose diameter fits the multiplicity-dependent
/// merge radius.
fn cluster(p: &UniPoly, raw: Vec<Complex64>, opts: &RootOptions) -> Vec<Root> {
    let mut remaining = raw;
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(Vec<usize>, f64)> = None;
        for i in 0..remaining.len() {
            let mut order: Vec<usize> = (0..remaining.len()).collect();
            order.sort_by(|&a, &b| {
                (remaining[a] - remaining[i])
                    .norm()
                    .total_cmp(&(remaining[b] - remaining[i]).norm())
            });
            for k in (2..=remaining.len()).rev() {
                let members: Vec<Complex64> = order[..k].iter().map(|&j| remaining[j]).collect();
                let diam = diameter(&members);
                if diam <= opts.merge_radius(k, mean(&members)) {
                    let better = best.as_ref().is_none_or(|(idx, d)| {
                        k > idx.len() || (k == idx.len() && diam < *d)
                    });
                    if better {
                        best = Some((order[..k].to_vec(), diam));
                    }
                    break;
                }
            }
        }
        match best {
            Some((mut idx, _)) => {
                idx.sort_unstable_by(|a, b| b.cmp(a));
                groups.push(idx.into_iter().map(|j| remaining.remove(j)).collect());
            }
            None => {
                groups.extend(remaining.drain(..).map(|r| vec![r]));
            }
        }
    }
    let mut out: Vec<Root> = groups
        .into_iter()
        .map(|g| {
            let k = g.len();
            let center = mean(&g);
            let value = if k > 1 {
                refine_multiple(p, center, k, opts.merge_radius(k, center))
            } else {
                center
            };
            Root { value, multiplicity: k }
        })
        .collect();
    out.sort_by(|x, y| {
        x.value
            .arg()
            .total_cmp(&y.value.arg())
            .then(x.value.norm().total_cmp(&y.value.norm()))
    });
    out
}

fn mean(g: &[Complex64]) -> Complex64 {
    g.iter().sum::<Complex64>() / g.len() as f64
}

fn diameter(g: &[Complex64]) -> f64 {
    let mut d = 0.0f64;
    for (i, a) in g.iter().enumerate() {
        for b in &g[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Newton on the (k-1)-th derivative, where a k-fold root is simple.
fn refine_multiple(p: &UniPoly, center: Complex64, k: usize, radius: f64) -> Complex64 {
    let f = p.nth_derivative(k - 1);
    let mut z = center;
    let mut fz = f.eval(z).norm();
    for _ in 0..8 {
        let (v, dv) = f.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        let fnext = f.eval(next).norm();
        if fnext < fz && (next - center).norm() <= radius.max(1e-12) {
            z = next;
            fz = fnext;
        } else {
            break;
        }
    }
    z
}

/// Unimodular points that are (numerically) roots of both `a` and `b`.
pub fn unimodular_common_roots(a: &UniPoly, b: &UniPoly, tol: f64) -> Result<Vec<Complex64>> {
    unimodular_common_roots_with(a, b, &RootOptions::with_tol(tol))
}

pub fn unimodular_common_roots_with(
    a: &UniPoly,
    b: &UniPoly,
    opts: &RootOptions,
) -> Result<Vec<Complex64>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("common roots with the zero polynomial".into()));
    }
    let mut cands = Vec::new();
    for (x, y) in [(a, b), (b, a)] {
        for r in roots_with(x, opts)? {
            let v = r.value;
            if (v.norm() - 1.0).abs() < opts.unimodular_band.max(opts.tol)
                && backward_error(y, v) <= opts.tol
            {
                cands.push(v / v.norm());
            }
        }
    }
    cands.sort_by(|x, y| x.arg().total_cmp(&y.arg()));
    let mut merged: Vec<Vec<Complex64>> = Vec::new();
    for c in cands {
        match merged.iter_mut().find(|g| (mean(g) - c).norm() < opts.cluster_radius.sqrt()) {
            Some(g) => g.push(c),
            None => merged.push(vec![c]),
        }
    }
    Ok(merged
        .iter()
        .map(|g| {
            let m = mean(g);
            m / m.norm()
        })
        .collect())
}

/// True when `||z| - 1| < band`.
pub fn is_unimodular(z: Complex64, band: f64) -> bool {
    (z.norm() - 1.0).abs() < band
}

use std::f64::consts::TAU;

use clarkrif::agler::{
    compute_q, exceptional_r, gram_isometry_check, kernel_gram, orthonormality_check, sos_residual, AglerPieces,
    Provenance,
};
use clarkrif::catalog;
use clarkrif::clark::clark_measure;
use clarkrif::polycore::fejer_riesz_certificate;
use clarkrif::rif::{validate, BiPolyN1, Rif};
use clarkrif::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn all_catalog() -> Vec<(String, Rif)> {
    catalog::names().into_iter().map(|n| (n.clone(), catalog::load(&n, TOL).unwrap())).collect()
}

fn two_lines() -> Rif {
    validate(&BiPolyN1::from_real(2, &[2.0, 0.0, -1.0], &[-1.0]).unwrap(), TOL).unwrap()
}

#[test]
fn q_certificate_and_vanishing() {
    for (name, rif) in all_catalog() {
        let q = compute_q(&rif, TOL).unwrap();
        let t = rif.torus_trig();
        let cert = fejer_riesz_certificate(&q, &t, 4096);
        assert!(cert < 1e-8 * t.max_abs_coeff(), "{name}: {cert:e}");
        assert!(q.degree().unwrap() <= rif.n);
        for s in &rif.singularities {
            assert!(q.eval(s.tau).norm() < 1e-6, "{name}: Q({}) = {}", s.tau, q.eval(s.tau));
        }
    }
}

#[test]
fn exceptional_r_vanishes_on_the_curve_part() {
    let mut cases = all_catalog();
    cases.push(("two-lines".into(), two_lines()));
    for (name, rif) in cases {
        let mut alphas: Vec<Complex64> = rif.singularities.iter().map(|s| s.exceptional_alpha).collect();
        alphas.dedup_by(|a, b| (*a - *b).norm() < 1e-6);
        for alpha in alphas {
            let cm = clark_measure(&rif, alpha, TOL).unwrap();
            let rs = exceptional_r(&rif, alpha, TOL).unwrap();
            assert_eq!(rs.len(), cm.lines.len());
            for r in &rs {
                assert!(r.r.degree().unwrap_or(0) < rif.n.max(1) && r.q.degree().unwrap_or(0) < rif.n.max(1));
                for j in 0..512 {
                    let z = Complex64::from_polar(1.0, TAU * j as f64 / 512.0);
                    let w = cm.balpha.eval(z).conj();
                    let scale = r.r.abs_scale(z) + r.q.abs_scale(z);
                    assert!(r.eval(z, w).norm() < 1e-8 * scale, "{name} {alpha}");
                }
                // every R_j vanishes at every singular point
                for s in &rif.singularities {
                    assert!(r.eval(s.tau, s.lambda).norm() < 1e-8);
                }
            }
            let g = orthonormality_check(&rif, alpha, &rs, 2048, TOL).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v - want).norm() < 1e-7, "{name} {alpha} ({i},{j}) = {v}");
                }
            }
        }
    }
}

#[test]
fn full_decomposition_when_every_line_is_exceptional() {
    // with l = n the exceptional R_j together with Q give the whole decomposition
    for rif in [catalog::load("fave", TOL).unwrap(), two_lines()] {
        let q = compute_q(&rif, TOL).unwrap();
        let rs = exceptional_r(&rif, c(-1.0, 0.0), TOL).unwrap();
        assert_eq!(rs.len(), rif.n);
        assert!(sos_residual(&rif, &q, &rs, 400, 21) < 1e-10);
    }
    // for amy only one of the two R_j is exceptional, so the identity must fail
    let amy = catalog::load("amy", TOL).unwrap();
    let rs = exceptional_r(&amy, c(-1.0, 0.0), TOL).unwrap();
    assert!(sos_residual(&amy, &compute_q(&amy, TOL).unwrap(), &rs, 400, 21) > 1e-3);
}

#[test]
fn fixtures_satisfy_the_identity() {
    for name in ["fave", "amy"] {
        let rif = catalog::load(name, TOL).unwrap();
        let a = catalog::agler_fixture(name).unwrap();
        assert_eq!(a.provenance, Provenance::Fixture);
        assert!(sos_residual(&rif, &a.q, &a.r_list, 1000, 4) < 1e-10);
        // the fixture Q agrees with the spectral factor up to a unimodular constant
        let q = compute_q(&rif, TOL).unwrap();
        for j in 0..64 {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / 64.0);
            assert!((q.eval(z).norm() - a.q.eval(z).norm()).abs() < 1e-10);
        }
    }
}

#[test]
fn pieces_json_uses_short_keys() {
    let a = catalog::agler_fixture("amy").unwrap();
    let v = serde_json::to_value(&a).unwrap();
    assert!(v.get("Q").is_some() && v["R"].as_array().unwrap().len() == 2);
    assert_eq!(v["provenance"], "fixture");
    let back: AglerPieces = serde_json::from_value(v).unwrap();
    assert_eq!(back, a);
}

#[test]
fn gram_matrices_for_random_points_and_alpha() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for (name, rif) in all_catalog() {
        for _ in 0..4 {
            let alpha = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let pts: Vec<(Complex64, Complex64)> = (0..3)
                .map(|_| {
                    let mut p = || Complex64::from_polar(0.8 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU));
                    (p(), p())
                })
                .collect();
            let rep = gram_isometry_check(&rif, alpha, &pts, 4096, TOL).unwrap();
            assert!(rep.max_abs_deviation < 1e-7, "{name} {alpha}: {:e}", rep.max_abs_deviation);
            // the target is Hermitian positive on the diagonal
            let k = kernel_gram(&rif, &pts);
            for (i, row) in k.iter().enumerate() {
                assert!(row[i].re > 0.0 && row[i].im.abs() < 1e-14);
                for (j, v) in row.iter().enumerate() {
                    assert!((v - k[j][i].conj()).norm() < 1e-14);
                }
            }
        }
    }
}

use std::f64::consts::TAU;

use clarkrif::catalog;
use clarkrif::clark::clark_measure;
use clarkrif::polycore::UniPoly;
use clarkrif::rif::{validate, BiPolyN1, Rif};
use clarkrif::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn all_catalog() -> Vec<Rif> {
    catalog::names().iter().map(|n| catalog::load(n, 1e-8).unwrap()).collect()
}

#[test]
fn resultant_matches_elimination_oracle() {
    // at a common zero z2 = -p1/p2 of p, p~ must vanish exactly when Res(z1) does:
    // Res = -p2(z1) p~(z1, -p1(z1)/p2(z1))
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for rif in all_catalog() {
        let res = rif.resultant();
        for _ in 0..20 {
            let z1 = Complex64::from_polar(rng.gen_range(0.2..1.5), rng.gen_range(0.0..TAU));
            let (a, b) = (rif.p.p1.eval(z1), rif.p.p2.eval(z1));
            if b.norm() < 1e-6 {
                continue;
            }
            let oracle = -b * rif.ptilde.eval(z1, -a / b);
            let got = res.eval(z1);
            assert!((got - oracle).norm() < 1e-10 * oracle.norm().max(1.0), "{got} vs {oracle}");
        }
    }
}

#[test]
fn resultant_is_shifted_torus_polynomial() {
    // on the circle, z^-n Res(z) = |p1|^2 - |p2|^2
    for rif in all_catalog() {
        let (res, t) = (rif.resultant(), rif.torus_trig());
        for j in 0..64 {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / 64.0);
            let lhs = res.eval(z) / z.powu(rif.n as u32);
            assert!((lhs - t.eval(z)).norm() < 1e-12 * t.max_abs_coeff().max(1.0));
        }
    }
}

#[test]
fn saturation() {
    for name in ["fave", "amy", "deg31"] {
        assert!(catalog::load(name, 1e-8).unwrap().is_saturated(1e-8).unwrap(), "{name}");
    }
    assert!(!catalog::load("amy-variant", 1e-8).unwrap().is_saturated(1e-8).unwrap());
    // 3 - z1 - z2 has no torus zeros, so its common zeros with p~ sit off the torus
    let p = BiPolyN1::from_real(1, &[3.0, -1.0], &[-1.0]).unwrap();
    assert!(!validate(&p, 1e-8).unwrap().is_saturated(1e-8).unwrap());
}

#[test]
fn phi_is_constant_on_singular_lines() {
    for rif in all_catalog() {
        for s in &rif.singularities {
            for z2 in [c(0.0, 0.0), c(0.3, 0.0), c(0.0, -0.5)] {
                let v = rif.phi(s.tau, z2);
                assert!((v - s.exceptional_alpha).norm() < 1e-10, "{v} vs {}", s.exceptional_alpha);
            }
        }
    }
}

#[test]
fn singularity_counts() {
    for rif in all_catalog() {
        assert!(rif.singularities.len() <= rif.n);
        let total: usize = rif.singularities.iter().map(|s| s.torus_multiplicity).sum();
        assert!(total <= 2 * rif.n);
        assert!(rif.singularities.iter().all(|s| s.torus_multiplicity % 2 == 0));
        for (k, s) in rif.singularities.iter().enumerate() {
            assert!((s.tau.norm() - 1.0).abs() < 1e-9 && (s.lambda.norm() - 1.0).abs() < 1e-9);
            assert!(rif.p.eval(s.tau, s.lambda).norm() < 1e-8);
            let d = rif.phi_line_derivative(k, 1e-8).unwrap();
            assert!((d - s.deriv_constant).norm() < 1e-10);
        }
    }
}

#[test]
fn blaschke_passes_through_singularities_for_random_alpha() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for rif in all_catalog() {
        for _ in 0..16 {
            let alpha = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let cm = clark_measure(&rif, alpha, 1e-8).unwrap();
            for s in &rif.singularities {
                assert!((cm.balpha.eval(s.tau).conj() - s.lambda).norm() < 1e-8);
            }
        }
    }
}

#[test]
fn inner_on_the_torus_and_contractive_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for rif in all_catalog() {
        for _ in 0..512 {
            let (z1, z2) = (
                Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)),
                Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)),
            );
            let (a, b) = (rif.p.eval(z1, z2).norm(), rif.ptilde.eval(z1, z2).norm());
            assert!((a - b).abs() <= 1e-10 * rif.p.abs_scale(z1, z2));
            let (w1, w2) = (z1 * rng.gen_range(0.0..0.999), z2 * rng.gen_range(0.0..0.999));
            assert!(rif.phi(w1, w2).norm() < 1.0);
        }
    }
}

#[test]
fn invalid_inputs() {
    // interior zero at z1 = 1/2
    let p = BiPolyN1::from_real(1, &[1.0, -2.0], &[0.1]).unwrap();
    assert!(matches!(validate(&p, 1e-8), Err(Error::NotStable(_))));
    // |p1| = |p2| on the circle: p~ is a multiple of p
    let p = BiPolyN1::from_real(1, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
    assert!(matches!(validate(&p, 1e-8), Err(Error::NotCoprime(_)) | Err(Error::NotStable(_))));
    // declared degree too small
    assert!(BiPolyN1::from_real(1, &[1.0, 0.0, 1.0], &[0.0]).is_err());
}

fn stable_strategy() -> impl Strategy<Value = BiPolyN1> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let coef = (-1.0f64..1.0, -1.0f64..1.0);
            (Just(n), prop::collection::vec(coef.clone(), n + 1), prop::collection::vec(coef, n + 1), 0.05f64..1.0)
        })
        .prop_map(|(n, a, b, margin)| {
            let mut p1: Vec<Complex64> = a.into_iter().map(|(x, y)| c(x, y)).collect();
            let p2: Vec<Complex64> = b.into_iter().map(|(x, y)| c(x, y)).collect();
            let rest: f64 = p1[1..].iter().chain(&p2).map(|z| z.norm()).sum();
            p1[0] = c(rest + margin, 0.0);
            BiPolyN1::new(n, UniPoly::new(p1), UniPoly::new(p2)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strictly_stable_polynomials_validate(p in stable_strategy()) {
        let rif = validate(&p, 1e-8).unwrap();
        prop_assert!(rif.singularities.is_empty());
        prop_assert_eq!(rif.p.reflect().reflect(), rif.p.clone());
        let t = rif.torus_trig();
        for j in 0..32 {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / 32.0);
            prop_assert!(t.eval_real(z) > 0.0);
        }
        prop_assert!(rif.phi_at_origin.norm() < 1.0);
    }
}

use std::f64::consts::TAU;

use clarkrif::polycore::{
    blaschke_from_rational, fejer_riesz, fejer_riesz_certificate, roots, unimodular_common_roots, BlaschkeProduct,
    TrigPoly, UniPoly,
};
use clarkrif::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
}

fn in_disk() -> impl Strategy<Value = Complex64> {
    (0.0f64..0.95, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn expand(rs: &[clarkrif::polycore::Root], lead: Complex64) -> UniPoly {
    let mut q = UniPoly::constant(lead);
    for r in rs {
        for _ in 0..r.multiplicity {
            q = q.mul_linear(r.value);
        }
    }
    q
}

#[test]
fn textbook_roots() {
    let rs = roots(&UniPoly::from_real(&[-1.0, 0.0, 1.0]), 1e-12).unwrap();
    let mut v: Vec<f64> = rs.iter().map(|r| r.value.re).collect();
    v.sort_by(f64::total_cmp);
    assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    // triple root at 0.5 and a simple root at -2
    let p = UniPoly::from_roots(&[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-2.0, 0.0)]);
    let rs = roots(&p, 1e-12).unwrap();
    assert_eq!(rs.len(), 2);
    let triple = rs.iter().find(|r| r.multiplicity == 3).unwrap();
    assert!((triple.value - 0.5).norm() < 1e-10);
}

#[test]
fn common_unimodular_roots_of_textbook_pairs() {
    let a = UniPoly::from_roots(&[c(1.0, 0.0), c(0.0, 1.0), c(0.3, 0.0)]);
    let b = UniPoly::from_roots(&[c(0.0, 1.0), c(-1.0, 0.0)]);
    let g = unimodular_common_roots(&a, &b, 1e-10).unwrap();
    assert_eq!(g.len(), 1);
    assert!((g[0] - c(0.0, 1.0)).norm() < 1e-12);
    assert!(unimodular_common_roots(&UniPoly::from_real(&[0.5, 1.0]), &UniPoly::from_real(&[0.5, 1.0]), 1e-10)
        .unwrap()
        .is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_expand_back(coeffs in prop::collection::vec(cplx(), 2..10)) {
        let p = UniPoly::new(coeffs);
        prop_assume!(p.degree().unwrap_or(0) >= 1 && p.leading().norm() > 0.05);
        let rs = roots(&p, 1e-12).unwrap();
        let q = expand(&rs, p.leading());
        let scale = p.max_abs_coeff();
        for k in 0..=p.degree().unwrap() {
            prop_assert!((q.coeff(k) - p.coeff(k)).norm() < 1e-8 * scale);
        }
    }

    #[test]
    fn spectral_factor_certificate(coeffs in prop::collection::vec(cplx(), 1..7), on_circle in 0.0f64..TAU) {
        // include a unimodular root to exercise the even-multiplicity pairing
        let q0 = UniPoly::new(coeffs).mul_linear(Complex64::from_polar(1.0, on_circle));
        let t = TrigPoly::abs_sq(&q0);
        let q = fejer_riesz(&t, 1e-8).unwrap();
        let scale = (0..512)
            .map(|j| t.eval_real(Complex64::from_polar(1.0, TAU * j as f64 / 512.0)).abs())
            .fold(0.0, f64::max);
        prop_assert!(fejer_riesz_certificate(&q, &t, 512) < 1e-8 * scale);
    }

    #[test]
    fn blaschke_modulus(zeros in prop::collection::vec(in_disk(), 0..6), phase in 0.0f64..TAU) {
        let b = BlaschkeProduct::new(Complex64::from_polar(1.0, phase), zeros).unwrap();
        for j in 0..512 {
            let m = b.eval(Complex64::from_polar(1.0, TAU * j as f64 / 512.0)).norm();
            prop_assert!((m - 1.0).abs() < 1e-10);
        }
        // rebuilding from numerator/denominator recovers the same function
        let back = blaschke_from_rational(&b.numerator(), &b.denominator(), 1e-8).unwrap();
        let z = c(0.2, -0.1);
        prop_assert!((back.eval(z) - b.eval(z)).norm() < 1e-8);
    }

    #[test]
    fn common_roots_symmetric(
        shared in prop::collection::vec(0.0f64..TAU, 0..3),
        ra in prop::collection::vec(in_disk(), 0..3),
        rb in prop::collection::vec(in_disk(), 0..3),
    ) {
        let s: Vec<Complex64> = shared.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let a = UniPoly::from_roots(&[s.clone(), ra].concat());
        let b = UniPoly::from_roots(&[s.clone(), rb].concat());
        let mut ab = unimodular_common_roots(&a, &b, 1e-9).unwrap();
        let mut ba = unimodular_common_roots(&b, &a, 1e-9).unwrap();
        ab.sort_by(|x, y| x.arg().total_cmp(&y.arg()));
        ba.sort_by(|x, y| x.arg().total_cmp(&y.arg()));
        prop_assert_eq!(ab.len(), ba.len());
        for (x, y) in ab.iter().zip(&ba) {
            prop_assert!((x - y).norm() < 1e-6);
        }
    }
}

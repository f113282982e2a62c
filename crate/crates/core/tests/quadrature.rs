use std::f64::consts::PI;

use lorentz_current::quadrature::accel::wynn_epsilon;
use lorentz_current::quadrature::fourier::*;
use lorentz_current::quadrature::levy::{levy_khinchin_kappa_analytic, LEVY_GRID};
use lorentz_current::quadrature::*;
use lorentz_current::specfun::{Dimensions, FourierConstant};
use proptest::prelude::*;

fn dims(n: usize) -> Dimensions {
    Dimensions::new(n).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn basic_rules() {
    let (x, w) = gauss_legendre(10);
    let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
    assert!(rel(s, 2.0 / 19.0) < 1e-13);
    let tol = Tolerance::default();
    let q = tanh_sinh(&|x: f64| x.powf(-0.5), 0.0, 1.0, tol).unwrap();
    assert!(rel(q.value, 2.0) < 1e-11);
    let q = adaptive(&|x: f64| x.sin(), 0.0, PI, tol).unwrap();
    assert!(rel(q.value, 2.0) < 1e-12);
    let q = semi_infinite(&|x: f64| (-x).exp(), 0.0, tol).unwrap();
    assert!(rel(q.value, 1.0) < 1e-11);
    let (v, _) = gk15(&|x: f64| x * x, 0.0, 3.0);
    assert!(rel(v, 9.0) < 1e-14);
}

#[test]
fn wynn_sums_alternating_series() {
    let mut partial = Vec::new();
    let mut s = 0.0;
    for k in 1..=12 {
        s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        partial.push(s);
    }
    let (v, _) = wynn_epsilon(&partial);
    assert!((v - 2f64.ln()).abs() < 2e-9);
}

#[test]
fn radial_transform_of_a_gaussian() {
    for n in [2usize, 3, 4] {
        let d = dims(n);
        let p = RadialProfile::gaussian_poly(1.0, vec![1.0]);
        for r in [0.0f64, 0.4, 1.3, 3.0] {
            let want = (2.0 * PI).powf(d.df() / 2.0) * (-0.5 * r * r).exp();
            let got = radial_fourier(d, &p, r).unwrap().value;
            assert!((got - want).abs() < 1e-10 * want.max(1e-3), "n={n} r={r}: {got} {want}");
        }
    }
}

#[test]
fn calibrated_constant_is_flat_and_matches_four_pi_power() {
    for n in [2usize, 3] {
        let d = dims(n);
        let fc = calibrate_cn(d).unwrap();
        assert!(fc.spread <= 1e-6, "n={n} spread {}", fc.spread);
        assert!(rel(fc.c_n, FourierConstant::analytic(d)) <= 1e-6);
    }
    assert!(calibrate_cn_on(dims(2), &[0.5], &[0.25, 1.0], 0.0).is_err());
}

#[test]
fn pairing_form_uses_the_same_constant() {
    for n in [2usize, 3] {
        let d = dims(n);
        let cn = calibrate_cn(d).unwrap().c_n;
        for lambda in [0.3, 0.5 * d.df(), 0.9 * d.df()] {
            for coeffs in [vec![1.0], vec![1.0, 0.5], vec![0.2, -0.3, 0.1]] {
                let p = RadialProfile::gaussian_poly(0.8, coeffs);
                let c = pairing_check(d, cn, lambda, &p, 8.0, 12.0).unwrap();
                assert!(c.residual <= 1e-5, "n={n} lambda={lambda}: {c:?}");
            }
        }
    }
}

#[test]
fn levy_khinchin_single_constant() {
    for n in [2usize, 3] {
        let d = dims(n);
        let fit = levy_khinchin_fit(d, &LEVY_GRID).unwrap();
        assert!(fit.max_residual() <= 1e-4, "{fit:?}");
        assert!(rel(fit.kappa, levy_khinchin_kappa_analytic(d)) <= 1e-6);
        assert!(levy_khinchin_residual(d, &[0.6, 0.8]).unwrap() <= 1e-4);
    }
    assert!(levy_khinchin_fit(dims(2), &[0.0, 1.0]).is_err());
}

#[test]
fn inverse_v_transform_closed_form() {
    let d = dims(3);
    let cn = calibrate_cn(d).unwrap().c_n;
    for rho in [0.6, 1.5] {
        for x in [0.5, 2.0] {
            let q = inverse_v_transform(d, rho, x).unwrap().value;
            assert!(rel(q, inverse_v_closed_form(d, cn, rho, x)) < 1e-6, "rho={rho} x={x}");
        }
    }
}

#[test]
fn kernel_reference_values() {
    // oscillatory quadrature of the defining integral in mpmath
    let cases = [(0.5, 0.3, -2.34827405233838), (0.5, -0.3, 1.81987281266797), (2.0, 0.1, -6.15021352580305)];
    for (x, y, want) in cases {
        let q = kernel_a(dims(2), 0.5, &[x], &[y]).unwrap().value;
        let c = kernel_a_closed_n2(0.5, x, y).unwrap();
        assert!(rel(q, want) < 1e-8, "quadrature {x} {y}: {q}");
        assert!(rel(c, want) < 1e-12, "closed form {x} {y}: {c}");
    }
    assert!(kernel_a(dims(2), 0.5, &[0.0], &[1.0]).is_err());
    assert!(kernel_a(dims(2), 1.0, &[1.0], &[1.0]).is_err());
}

#[test]
fn kernel_in_three_dimensions_is_even() {
    let d = dims(3);
    let a = kernel_a(d, 0.5, &[0.5, 0.2], &[-0.3, 0.4]).unwrap().value;
    let b = kernel_a(d, 0.5, &[-0.5, -0.2], &[0.3, -0.4]).unwrap().value;
    assert!(a.is_finite());
    assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closed_form_kernel_matches_quadrature(lambda in 0.1f64..0.9, x in 0.1f64..3.0, y in -3.0f64..3.0) {
        prop_assume!(y.abs() > 0.1);
        let q = kernel_a(dims(2), lambda, &[x], &[y]).unwrap().value;
        let c = kernel_a_closed_n2(lambda, x, y).unwrap();
        prop_assert!((q - c).abs() <= 1e-7 * c.abs().max(1.0));
    }

    #[test]
    fn kernel_is_even_under_joint_negation(lambda in 0.1f64..0.9, x in 0.1f64..3.0, y in -3.0f64..3.0) {
        prop_assume!(y.abs() > 0.1);
        let a = kernel_a_closed_n2(lambda, x, y).unwrap();
        let b = kernel_a_closed_n2(lambda, -x, -y).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
    }
}

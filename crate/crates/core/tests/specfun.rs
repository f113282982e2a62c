use std::f64::consts::PI;

use lorentz_current::quadrature::{radial_integral, RadialProfile};
use lorentz_current::specfun::bessel::{i_series, j_nu, k_half_integer, k_integer_series, k_nu, k_reflection, ln_k_nu};
use lorentz_current::specfun::*;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn dims(n: usize) -> Dimensions {
    Dimensions::new(n).unwrap()
}

// Reference values below were computed with mpmath at 30 digits.

#[test]
fn k_matches_reference_values() {
    let cases = [
        (0.0, 1.0, 0.42102443824070833),
        (0.5, 2.0, 0.11993777196806145),
        (1.5, 2.0, 0.17990665795209217),
        (0.3, 0.01, 6.8901026382927695),
        (2.7, 5.0, 0.0071262487556333316),
        (7.3, 0.001, 7.9575474222073732e26),
        (0.25, 30.0, 2.1346641833090355e-14),
        (1.0, 1.0, 0.60190723019723457),
        (3.0, 0.5, 62.057909529930256),
        (2.0, 80.0, 2.5886411706935011e-36),
    ];
    for (nu, x, want) in cases {
        assert!(rel(k_nu(nu, x), want) < 1e-12, "K_{nu}({x}) = {} vs {want}", k_nu(nu, x));
    }
    assert!((ln_k_nu(1.5, 500.0) + 502.8795146939037).abs() < 1e-11);
    assert!((ln_k_nu(7.3, 0.001) - 61.941333257436964).abs() < 1e-11);
}

#[test]
fn bessel_k_doubles_its_argument() {
    let k = bessel_k(0.5, 1.0).unwrap();
    assert!(rel(k, (PI / 4.0).sqrt() * (-2.0f64).exp()) < 1e-14);
    assert!(rel(bessel_k(1.5, 1.0).unwrap(), 0.17990665795209217) < 1e-13);
    assert_eq!(bessel_k(0.5, 1.5).unwrap(), bessel_k(-0.5, 1.5).unwrap());
    assert!(bessel_k(1.0, 0.0).is_err());
}

#[test]
fn i_matches_reference_values() {
    let cases = [
        (0.5, 2.0, 2.046236863089055),
        (0.0, 0.5, 1.0634833707413235),
        (2.3, 40.0, 13930145501066977.0),
        (1.0, 100.0, 1.0683693903381625e42),
        (0.7, 3.0, 4.3871176577071135),
    ];
    for (nu, x, want) in cases {
        assert!(rel(i_series(nu, x).unwrap(), want) < 1e-12, "I_{nu}({x})");
    }
    assert!(rel(bessel_i(0.5, 1.0).unwrap(), 2.046236863089055) < 1e-13);
    assert!((bessel_i(0.0, 1e-12).unwrap() - 1.0).abs() < 1e-15);
    assert!(bessel_i(1.0, 1e-12).unwrap() < 1e-11);
    assert!(bessel_i(0.5, 0.0).is_err());
    assert!(bessel_i(0.5, 60.0).is_err());
}

#[test]
fn j_matches_reference_values() {
    let cases = [
        (0.0, 1.0, 0.76519768655796655),
        (0.0, 30.0, -0.086367983581040211),
        (0.5, 3.0, 0.065008182877375778),
        (1.3, 10.0, 0.14499395777531306),
        (2.5, 1.5, 0.1244463597983876),
        (0.0, 100.0, 0.019985850304223122),
    ];
    for (nu, x, want) in cases {
        assert!((j_nu(nu, x) - want).abs() < 1e-13, "J_{nu}({x}) = {}", j_nu(nu, x));
    }
    assert!(rel(spherical_kernel(2, 3.0), -1.6339546221431566) < 1e-12);
}

#[test]
fn gamma_family() {
    assert!(rel(gamma(0.3), 2.9915689876875907) < 1e-13);
    assert!(rel(gamma(4.5), 11.631728396567449) < 1e-13);
    assert!(rel(digamma(0.3), -3.5025242222001331) < 1e-12);
    assert!(rel(digamma(7.0), 1.8727843350984671) < 1e-12);
    assert_eq!(rgamma(-2.0), 0.0);
    assert!(rel(ln_gamma(20.5), gamma(20.5).ln()) < 1e-13);
}

#[test]
fn half_integer_orders_in_closed_form() {
    for k in 0..3 {
        let nu = k as f64 + 0.5;
        for x in [0.2, 1.0, 3.0, 12.0] {
            assert!(rel(k_nu(nu, x), k_half_integer(k, x)) < 1e-10);
        }
    }
    assert!(rel(k_half_integer(1, 2.0), (PI / 4.0).sqrt() * (-2.0f64).exp() * 1.5) < 1e-14);
}

#[test]
fn integer_order_series_agrees() {
    for n in 0..4 {
        for x in [0.1, 0.7, 2.0, 3.0] {
            assert!(rel(k_integer_series(n, x).unwrap(), k_nu(n as f64, x)) < 1e-10, "K_{n}({x})");
        }
    }
}

#[test]
fn v_rho_reference_values() {
    let cases = [
        (0.3, 0.01, 1.1002583766067638),
        (0.75, 0.01, 1.0035577221003671),
        (1.0, 0.5, 1.6613855920493218),
        (1.5, 3.0, 57.632684784676446),
        (2.5, 0.2, 1.0264848836981218),
        (2.0, 1e-3, 1.0000009999939194),
        (1.0, 1e-3, 1.0000136612734365),
        (0.5, 1e-3, 1.0020020013340003),
    ];
    for (rho, x, want) in cases {
        assert!(rel(v_rho(rho, x).unwrap(), want) < 1e-12, "V_{rho}({x})");
    }
    assert!(rel(v_rho(0.5, 1.0).unwrap(), 2f64.exp()) < 1e-14);
    assert_eq!(v_rho(2.0, 0.0).unwrap(), 1.0);
    let approx = 1.0 + 0.01f64.powf(1.5) * gamma(0.25) / gamma(1.75);
    assert!((v_rho(0.75, 0.01).unwrap() - approx).abs() < 5e-4);
    // with the next term −x²/(1−ρ) the gap closes
    assert!((v_rho(0.75, 0.01).unwrap() - (approx - 1e-4 / 0.25)).abs() < 2e-5);
    assert!(v_rho(0.0, 1.0).is_err());
    assert!(v_rho(1.0, -1.0).is_err());
}

#[test]
fn v_half_is_exponential() {
    for k in 0..=50 {
        let x = 0.1 * k as f64;
        assert!(rel(v_rho(0.5, x).unwrap(), (2.0 * x).exp()) < 1e-12);
    }
}

#[test]
fn asymptotic_branches() {
    assert_eq!(v_rho_asymptotic(1.7, 0.0), 1.0);
    assert!(rel(v_rho_asymptotic(1.0, 0.01), 1.0 - 2.0 * 1e-4 * 0.01f64.ln()) < 1e-15);
    assert!(rel(v_rho_asymptotic_as_printed(3.0, 0.01), 1.0001) < 1e-15);
    assert!(rel(v_rho_asymptotic(3.0, 0.01), 1.00005) < 1e-15);
    // the coefficient 1/(ρ−1) is the one that matches V itself
    let ratio = |f: fn(f64, f64) -> f64, rho: f64, x: f64| {
        let v = v_rho(rho, x).unwrap();
        ((v - f(rho, x)) / (v - 1.0)).abs()
    };
    assert!(ratio(v_rho_asymptotic, 3.0, 1e-3) < 1e-2);
    assert!(ratio(v_rho_asymptotic_as_printed, 3.0, 1e-3) > 0.9);
}

#[test]
fn asymptotic_relative_error_at_small_x() {
    let err = |rho: f64, x: f64| {
        let v = v_rho(rho, x).unwrap();
        ((v - v_rho_asymptotic(rho, x)) / (v - 1.0)).abs()
    };
    assert!(err(0.5, 1e-3) <= 1e-2);
    assert!(err(2.0, 1e-3) <= 1e-2);
    // for ρ = 1 the next term is O(1/ln x), so 1e-3 is not yet small enough
    let e1 = err(1.0, 1e-3);
    assert!(e1 > 1e-2 && e1 < 1.2e-2, "{e1}");
    assert!(err(1.0, 1e-6) < 1e-2);
    assert!(err(1.0, 1e-6) < e1);
}

#[test]
fn levy_and_marginal_examples() {
    assert!(rel(levy_density(dims(2), &[0.5]).unwrap(), 0.65204933217329218) < 1e-13);
    assert!(rel(levy_density(dims(3), &[0.72, -0.96]).unwrap(), 0.069770698962360162) < 1e-13);
    assert!(levy_density(dims(2), &[2.0]).unwrap() < levy_density(dims(2), &[0.1]).unwrap());
    assert!(levy_density(dims(2), &[0.0]).is_err());
    assert!(rel(marginal_radial_density(dims(2), 1.0, &[0.5]).unwrap(), 0.47507520494890654) < 1e-13);
    assert!(marginal_radial_density(dims(2), 1.0, &[0.0]).is_err());
    assert!(marginal_radial_density(dims(3), 0.0, &[1.0, 0.0]).is_err());
    assert!(marginal_radial_density(dims(3), 2.5, &[1.0, 0.0]).unwrap() > 0.0);
}

#[test]
fn marginal_density_mass() {
    for (n, lambda) in [(3usize, 0.7), (2, 0.4), (3, 1.6)] {
        let d = dims(n);
        let p = RadialProfile::new(lambda - d.df(), move |r| marginal_radial_density(d, lambda, &std::iter::once(&r).chain(std::iter::repeat(&0.0)).take(d.d()).cloned().collect::<Vec<_>>()).unwrap());
        let m = radial_integral(d, &p).unwrap().value;
        assert!(rel(m, PI.powf(d.df() / 2.0)) < 1e-8, "n={n} lambda={lambda}: {m}");
    }
}

#[test]
fn spherical_kernel_small_argument() {
    for d in 1..=4 {
        assert!(rel(spherical_kernel(d, 0.0), sphere_area(d)) < 1e-14);
        let t = 1e-3;
        let direct = spherical_kernel(d, 0.6) - sphere_area(d);
        assert!(rel(spherical_kernel_minus_area(d, 0.6), direct) < 1e-12);
        assert!(spherical_kernel_minus_area(d, t) < 0.0);
    }
}

#[test]
fn dimensions_validation() {
    assert!(Dimensions::new(1).is_err());
    let d = dims(4);
    assert_eq!((d.n(), d.d(), d.df()), (4, 3, 3.0));
    let s = serde_json::to_string(&d).unwrap();
    assert_eq!(s, "4");
    assert!(serde_json::from_str::<Dimensions>("1").is_err());
    assert!(rel(FourierConstant::analytic(dims(3)), 4.0 * PI) < 1e-15);
}

proptest! {
    #[test]
    fn k_is_symmetric_in_order(rho in 0.1f64..3.0, x in 0.1f64..10.0) {
        prop_assume!((rho - rho.round()).abs() > 1e-3);
        let a = bessel_k(rho, x).unwrap();
        let b = bessel_k(-rho, x).unwrap();
        prop_assert!(rel(a, b) <= 1e-10);
    }

    #[test]
    fn k_agrees_with_reflection_formula(nu in 0.05f64..3.0, x in 0.05f64..4.0) {
        prop_assert!(rel(k_reflection(nu, x).unwrap(), k_nu(nu, x)) <= 1e-9);
    }

    #[test]
    fn v_times_k_profile_is_one(rho in 0.05f64..4.0, x in 0.001f64..20.0) {
        let v = v_rho(rho, x).unwrap();
        let prod = v * (2.0 / gamma(rho)) * x.powf(rho) * k_nu(rho, 2.0 * x);
        prop_assert!((prod - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn k_continuous_across_integers(m in 1usize..3, x in 0.1f64..10.0) {
        let mf = m as f64;
        let lo = k_nu(mf - 1e-9, x);
        let hi = k_nu(mf + 1e-9, x);
        let at = k_nu(mf, x);
        prop_assert!(rel(lo, at) <= 1e-8 && rel(hi, at) <= 1e-8);
    }

    #[test]
    fn v_reflection_form_agrees(rho in 0.05f64..2.9, x in 0.01f64..3.0) {
        prop_assume!((rho - rho.round()).abs() > 1e-2);
        prop_assert!(rel(v_rho_reflection(rho, x).unwrap(), v_rho(rho, x).unwrap()) <= 1e-8);
    }
}

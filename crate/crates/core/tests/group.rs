use lorentz_current::group::*;
use lorentz_current::specfun::Dimensions;
use lorentz_current::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dims(n: usize) -> Dimensions {
    Dimensions::new(n).unwrap()
}

fn max_diff(a: &GroupElement, b: &GroupElement) -> f64 {
    (a.matrix() - b.matrix()).abs().max()
}

fn rel_diff(a: &GroupElement, b: &GroupElement) -> f64 {
    max_diff(a, b) / a.matrix().abs().max().max(1.0)
}

#[test]
fn z_block_formula_n2() {
    let z = GroupElement::z(&[2.0]);
    let want = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, -2.0, 1.0, 0.0, -2.0, 2.0, 1.0]);
    assert_eq!(z.matrix(), &want);
    assert!(z.membership_residual() < 1e-15);
    assert_eq!(GroupElement::z(&[0.0]), GroupElement::identity(dims(2)));
}

#[test]
fn z_is_additive() {
    let a = GroupElement::z(&[0.3, -1.2]);
    let b = GroupElement::z(&[2.0, 0.5]);
    assert!(max_diff(&a.mul(&b), &GroupElement::z(&[2.3, -0.7])) < 1e-14);
}

#[test]
fn d_block_formula() {
    let d = GroupElement::d(2.0, &DMatrix::identity(1, 1)).unwrap();
    assert_eq!(d.matrix(), &DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 1.0, 2.0])));
    assert!(d.membership_residual() <= 1e-12);
    let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
    assert!(matches!(GroupElement::d(1.0, &bad), Err(Error::Domain(_))));
    assert!(GroupElement::d(0.0, &DMatrix::identity(1, 1)).is_err());
}

#[test]
fn s_squares_to_identity_exactly() {
    for n in 2..6 {
        let s = GroupElement::s(dims(n));
        assert_eq!(s.mul(&s), GroupElement::identity(dims(n)));
    }
}

#[test]
fn action_examples() {
    assert_eq!(act(&[1.0, 2.0], &GroupElement::z(&[0.5, -1.0])).unwrap(), vec![1.5, 1.0]);
    let u = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let d = GroupElement::d(2.0, &u).unwrap();
    // ε⁻¹ γ u with γ = (1, 3): (1,3)·u = (−3, 1)
    let got = act(&[1.0, 3.0], &d).unwrap();
    assert!((got[0] + 1.5).abs() < 1e-15 && (got[1] - 0.5).abs() < 1e-15);
    assert_eq!(act(&[1.0, 0.0], &GroupElement::s(dims(3))).unwrap(), vec![-2.0, 0.0]);
    assert!(matches!(act(&[0.0, 0.0], &GroupElement::s(dims(3))), Err(Error::PointAtInfinity(_))));
}

#[test]
fn beta_examples() {
    assert_eq!(cocycle_beta(&[1.0, -4.0], &GroupElement::z(&[3.0, 2.0])).unwrap(), 1.0);
    let d = GroupElement::d(-0.25, &DMatrix::identity(2, 2)).unwrap();
    assert_eq!(cocycle_beta(&[1.0, 2.0], &d).unwrap(), 0.25);
    assert_eq!(cocycle_beta(&[2.0, 0.0], &GroupElement::s(dims(3))).unwrap(), 2.0);
    assert!(cocycle_beta(&[0.0], &GroupElement::s(dims(2))).is_err());
}

#[test]
fn d_of_gamma_examples() {
    let d = GroupElement::d_of_gamma(&[1.0, 0.0]).unwrap();
    let m = d.matrix();
    assert_eq!((m[(1, 1)], m[(2, 2)], m[(1, 2)]), (-1.0, 1.0, 0.0));
    let d = GroupElement::d_of_gamma(&[1.0, 1.0]).unwrap();
    let m = d.matrix();
    assert!((m[(0, 0)] + 1.0).abs() < 1e-15 && (m[(3, 3)] + 1.0).abs() < 1e-15);
    assert!(GroupElement::d_of_gamma(&[0.0, 0.0]).is_err());
}

#[test]
fn z_s_relation_holds_as_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..5 {
        for _ in 0..50 {
            let g: Vec<f64> = (0..n - 1).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)).collect();
            let s = GroupElement::s(dims(n));
            let lhs = GroupElement::z(&g).mul(&s);
            let neg: Vec<f64> = g.iter().map(|x| -x).collect();
            let rhs = GroupElement::d_of_gamma(&g)
                .unwrap()
                .mul(&s)
                .mul(&GroupElement::z(&neg))
                .mul(&s)
                .mul(&GroupElement::z(&inversion(&g).unwrap()));
            assert!(rel_diff(&lhs, &rhs) < 1e-10, "{}", rel_diff(&lhs, &rhs));
        }
    }
}

#[test]
fn factor_word_special_cases() {
    let s = GroupElement::s(dims(3));
    let w = factor_word(&s).unwrap();
    assert_eq!(w.letters, vec![Letter::S]);
    let b = GroupElement::z(&[1.0, 2.0]).mul(&GroupElement::d(3.0, &DMatrix::identity(2, 2)).unwrap());
    assert_eq!(factor_word(&b).unwrap().len(), 1);
    let upper = s.mul(&b).mul(&s);
    let w = factor_word(&upper).unwrap();
    assert_eq!(w.shape(), "S B S");
    assert!(rel_diff(&w.evaluate(), &upper) < 1e-12);
    let junk = GroupElement::from_matrix_unchecked(DMatrix::identity(3, 3) * 2.0).unwrap();
    assert!(matches!(factor_word(&junk), Err(Error::NonMember(_))));
}

#[test]
fn triangular_decomposition_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random_orthogonal(3, &mut rng);
    let t = TriangularElement::new(-1.7, u, vec![0.2, -0.4, 1.1]).unwrap();
    let back = TriangularElement::from_element(&t.to_element()).unwrap();
    assert!((back.epsilon - t.epsilon).abs() < 1e-14);
    assert!(back.gamma.iter().zip(&t.gamma).all(|(a, b)| (a - b).abs() < 1e-14));
    assert!(TriangularElement::from_element(&GroupElement::s(dims(4))).is_none());
}

#[test]
fn serde_row_major() {
    let g = GroupElement::z(&[2.0]);
    let js = serde_json::to_string(&g).unwrap();
    assert_eq!(js, "[[1.0,0.0,0.0],[-2.0,1.0,0.0],[-2.0,2.0,1.0]]");
    let back: GroupElement = serde_json::from_str(&js).unwrap();
    assert_eq!(back, g);
    assert!(serde_json::from_str::<GroupElement>("[[1.0,0.0,0.0],[0.0,2.0,0.0],[0.0,0.0,1.0]]").is_err());
}

#[test]
fn measure_relations_for_letters() {
    let z = GroupElement::z(&[0.4, -0.3]);
    let (r1, r2) = measure_relation_check(&z, &[0.1, 0.2], &[1.0, -1.0]).unwrap();
    assert!(r1 < 1e-9 && r2 < 1e-12);
    let d = GroupElement::d(1.5, &DMatrix::identity(2, 2)).unwrap();
    let (r1, r2) = measure_relation_check(&d, &[0.1, 0.2], &[1.0, -1.0]).unwrap();
    assert!(r1 < 1e-9 && r2 < 1e-12);
}

#[test]
fn middle_column_beta_breaks_the_cocycle_law() {
    // the variant read from the g₁₂, g₂₂, g₃₂ column is not multiplicative
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = dims(3);
    let mut worst = 0.0f64;
    let mut worst_primary = 0.0f64;
    for _ in 0..100 {
        let g1 = random_element(d, &mut rng);
        let g2 = random_element(d, &mut rng);
        let x = [0.37, -0.81];
        let Ok(y) = act(&x, &g1) else { continue };
        let f = |v| -> Option<f64> {
            let a = cocycle_beta_variant(&x, &g1.mul(&g2), v).ok()?;
            let b = cocycle_beta_variant(&x, &g1, v).ok()? * cocycle_beta_variant(&y, &g2, v).ok()?;
            Some((a - b).abs() / a.abs().max(b.abs()))
        };
        if let (Some(p), Some(m)) = (f(BetaVariant::Denominator), f(BetaVariant::MiddleColumn)) {
            worst_primary = worst_primary.max(p);
            worst = worst.max(m);
        }
    }
    assert!(worst_primary < 1e-9, "{worst_primary}");
    assert!(worst > 1e-2, "{worst}");
}

fn arb_element() -> impl Strategy<Value = GroupElement> {
    (2usize..5, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_element(dims(n), &mut rng)
    })
}

fn arb_pair() -> impl Strategy<Value = (GroupElement, GroupElement, Vec<f64>)> {
    (2usize..5, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1 = random_element(dims(n), &mut rng);
        let g2 = random_element(dims(n), &mut rng);
        let x = (0..n - 1).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)).collect();
        (g1, g2, x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn members_satisfy_block_relations(g in arb_element()) {
        prop_assert!(g.membership_residual() < 1e-10);
        for r in g.block_relation_residuals() {
            prop_assert!(r < 1e-10);
        }
    }

    #[test]
    fn closure_under_products_and_inverses(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut acc = GroupElement::identity(dims(n));
        for _ in 0..20 {
            let g = random_element(dims(n), &mut rng);
            acc = acc.mul(&g.inverse());
            acc = acc.mul(&random_element(dims(n), &mut rng));
        }
        prop_assert!(acc.membership_residual() < 1e-9);
        let id = acc.mul(&acc.inverse());
        prop_assert!(rel_diff(&id, &GroupElement::identity(dims(n))) < 1e-8 * acc.matrix().abs().max().powi(2).max(1.0));
    }

    #[test]
    fn cocycle_law((g1, g2, x) in arb_pair()) {
        if let (Ok(y), Ok(b12)) = (act(&x, &g1), cocycle_beta(&x, &g1.mul(&g2))) {
            if let (Ok(b1), Ok(b2)) = (cocycle_beta(&x, &g1), cocycle_beta(&y, &g2)) {
                prop_assert!((b12 - b1 * b2).abs() <= 1e-9 * b12.max(b1 * b2));
            }
        }
    }

    #[test]
    fn right_action_law((g1, g2, x) in arb_pair()) {
        if let (Ok(y), Ok(w)) = (act(&x, &g1), act(&x, &g1.mul(&g2))) {
            if let Ok(v) = act(&y, &g2) {
                let scale = w.iter().map(|a| a.abs()).fold(1.0, f64::max);
                for (a, b) in v.iter().zip(&w) {
                    prop_assert!((a - b).abs() <= 1e-8 * scale);
                }
            }
        }
    }

    #[test]
    fn triangular_composition_matches_matrices(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mk = |rng: &mut ChaCha8Rng| {
            let u = random_orthogonal(n - 1, rng);
            let g = (0..n - 1).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng)).collect();
            TriangularElement::new(rand::Rng::random_range(rng, 0.3..3.0), u, g).unwrap()
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let lhs = a.compose(&b).to_element();
        let rhs = a.to_element().mul(&b.to_element());
        prop_assert!(rel_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn factor_word_round_trip(g in arb_element()) {
        let w = factor_word(&g).unwrap();
        prop_assert!(w.len() <= 5);
        prop_assert!(rel_diff(&w.evaluate(), &g) < 1e-8);
    }

    #[test]
    fn jacobian_and_distance_relations((g, _g2, x) in arb_pair(), shift in prop::collection::vec(-2.0f64..2.0, 3)) {
        let y: Vec<f64> = x.iter().zip(&shift).map(|(a, b)| a + b).collect();
        if let Ok((r1, r2)) = measure_relation_check(&g, &x, &y) {
            prop_assert!(r1 < 1e-6, "jacobian {}", r1);
            prop_assert!(r2 < 1e-6, "distance {}", r2);
        }
    }
}

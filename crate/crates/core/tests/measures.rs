use lorentz_current::measures::*;
use lorentz_current::process::{Atom, PointConfiguration, SeededStream};
use lorentz_current::quadrature::{radial_integral, RadialProfile};
use lorentz_current::specfun::Dimensions;
use proptest::prelude::*;
use rand::Rng;

fn dims(n: usize) -> Dimensions {
    Dimensions::new(n).unwrap()
}

fn part(m: &[f64]) -> Partition {
    Partition::new(m.to_vec()).unwrap()
}

#[test]
fn char_l_and_big_psi_examples() {
    assert_eq!(char_l(&[0.0, 0.0]), 1.0);
    assert!((char_l(&[2.0]) - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((char_l(&[1.2, 1.6]) - char_l(&[2.0, 0.0])).abs() < 1e-15);
    let p = part(&[1.0]);
    assert_eq!(big_psi(&p, &CellVector(vec![vec![0.0]])), 1.0);
    assert!((big_psi(&p, &CellVector(vec![vec![2.0]])) - 0.5f64.sqrt()).abs() < 1e-15);
    let r = Refinement::split(&part(&[0.4, 0.6]), &[1.0, 2.0, 1.0]).unwrap();
    let g = CellVector(vec![vec![1.0, -2.0], vec![0.3, 0.1]]);
    assert!((big_psi(&r.parent, &g) - big_psi(&r.child, &r.lift(&g))).abs() < 1e-15);
}

#[test]
fn partition_validation_and_parsing() {
    assert!(Partition::new(vec![]).is_err());
    assert!(Partition::new(vec![0.5, 0.0]).is_err());
    let p: Partition = "0.5, 0.25,0.25".parse().unwrap();
    assert_eq!(p.masses(), &[0.5, 0.25, 0.25]);
    assert!("0.5,x".parse::<Partition>().is_err());
    assert_eq!(p.cell_of(0.1), 0);
    assert_eq!(p.cell_of(0.6), 1);
    assert_eq!(p.cell_of(1.0), 2);
    assert!(part(&[1.0]).check_nu(dims(2)).is_err());
    assert!(part(&[0.9]).check_nu(dims(2)).is_ok());
    assert!(Refinement::new(part(&[1.0]), part(&[0.5, 0.4]), vec![0, 0]).is_err());
}

#[test]
fn mu_density_example_and_factorization() {
    // 2/Γ(1/2)·K_0(1), reference value from mpmath
    let v = mu_alpha_density(dims(2), &part(&[1.0]), &MarginalVector(vec![vec![0.5]])).unwrap();
    assert!((v - 0.475075204948907).abs() < 1e-13);
    let a = mu_alpha_density(dims(3), &part(&[0.7]), &MarginalVector(vec![vec![0.3, 0.1]])).unwrap();
    let b = mu_alpha_density(dims(3), &part(&[1.4]), &MarginalVector(vec![vec![-1.0, 2.0]])).unwrap();
    let ab = mu_alpha_density(dims(3), &part(&[0.7, 1.4]), &MarginalVector(vec![vec![0.3, 0.1], vec![-1.0, 2.0]]))
        .unwrap();
    assert!((ab - a * b).abs() < 1e-14 * ab);
    assert!(mu_alpha_density(dims(2), &part(&[1.0]), &MarginalVector(vec![vec![0.0]])).is_err());
}

#[test]
fn probability_density_integrates_to_one() {
    for (n, lambda) in [(2, 0.5), (2, 1.5), (3, 0.7), (3, 2.5), (4, 1.0)] {
        let d = dims(n);
        let p = part(&[lambda]);
        let prof = RadialProfile::new(0.0, move |r| {
            let mut x = vec![0.0; n - 1];
            x[0] = r;
            mu_alpha_probability_density(d, &p, &MarginalVector(vec![x])).unwrap()
        });
        let total = radial_integral(d, &prof).unwrap().value;
        assert!((total - 1.0).abs() < 1e-8, "n={n} λ={lambda}: {total}");
    }
}

#[test]
fn nu_density_example() {
    let v = nu_alpha_density(dims(2), &part(&[0.5]), &MarginalVector(vec![vec![1.0]])).unwrap();
    assert!((v - 0.5f64.sqrt()).abs() < 1e-14);
    assert!(nu_alpha_density(dims(2), &part(&[1.0]), &MarginalVector(vec![vec![1.0]])).is_err());
}

#[test]
fn rn_derivative_is_density_ratio() {
    let mut rng = SeededStream::new(1, 0);
    for _ in 0..100 {
        let n = rng.random_range(2..5);
        let d = dims(n);
        let l = rng.random_range(1..3);
        let masses: Vec<f64> = (0..l).map(|_| rng.random_range(0.05..(n - 1) as f64 - 0.05)).collect();
        let p = part(&masses);
        let xi = MarginalVector(
            (0..l).map(|_| (0..n - 1).map(|_| rng.random_range(-4.0..4.0)).collect()).collect(),
        );
        let r = rn_derivative(d, &p, &xi).unwrap();
        let q = nu_alpha_density(d, &p, &xi).unwrap() / mu_alpha_density(d, &p, &xi).unwrap();
        assert!((r - q).abs() <= 1e-10 * q, "{r} {q}");
        let q2 = nu_alpha_normalized_density(d, &p, &xi).unwrap() / mu_alpha_probability_density(d, &p, &xi).unwrap();
        assert!((r - q2).abs() <= 1e-10 * q2);
    }
    let z = rn_derivative(dims(3), &part(&[0.5, 0.25]), &MarginalVector(vec![vec![0.0, 0.0], vec![0.0, 0.0]])).unwrap();
    assert!((z - 2f64.powf(-0.75)).abs() < 1e-15);
}

#[test]
fn density_v_examples() {
    let d = dims(2);
    assert!((density_v(d, &PointConfiguration::empty(), 1.5).unwrap() - 2f64.powf(-1.5)).abs() < 1e-15);
    let c = PointConfiguration::new(vec![Atom { x: 0.3, c: vec![1.0] }], 0.0).unwrap();
    let v = density_v(d, &c, 1.0).unwrap();
    assert!((v - 0.5 * 2f64.exp()).abs() < 1e-12 * v);
}

#[test]
fn refinement_limit_reaches_density_v() {
    for n in [2, 3] {
        let d = dims(n);
        let atoms = vec![
            Atom { x: 0.11, c: vec![0.8; n - 1] },
            Atom { x: 0.52, c: vec![-0.3; n - 1] },
            Atom { x: 0.93, c: vec![1.5; n - 1] },
        ];
        let c = PointConfiguration::new(atoms, 0.0).unwrap();
        let seq = refinement_sequence(d, &c, 1.0, &[8, 16, 32, 64]).unwrap();
        let target = ln_density_v(d, &c, 1.0).unwrap();
        let err: Vec<f64> = seq.iter().map(|s| ((s - target).exp() - 1.0).abs()).collect();
        assert!(err.windows(2).all(|w| w[1] < w[0]), "{err:?}");
        // the error is linear in the cell mass; extrapolation removes it
        let ex = extrapolate_halving(&seq);
        assert!(((ex - target).exp() - 1.0).abs() < 0.01, "{ex} {target}");
    }
}

#[test]
fn nu_char_examples_and_refinement() {
    let p = part(&[1.0]);
    assert!((nu_char(&p, &CellVector(vec![vec![2.0]])).unwrap() - 0.5).abs() < 1e-15);
    assert!(nu_char(&p, &CellVector(vec![vec![0.0]])).is_err());
    let r = Refinement::split(&part(&[0.3, 0.4]), &[1.0, 1.0, 3.0]).unwrap();
    let g = CellVector(vec![vec![0.5, 2.0], vec![-3.0, 1.0]]);
    let a = nu_char(&r.parent, &g).unwrap();
    let b = nu_char(&r.child, &r.lift(&g)).unwrap();
    assert!((a - b).abs() <= 1e-12 * a);
}

#[test]
fn coherence_trivial_split_and_chain() {
    let d = dims(2);
    let mut rng = SeededStream::new(2, 0);
    let p = part(&[1.0]);
    let g = CellVector(vec![vec![1.5]]);
    let id = check_coherence(d, &Refinement::identity(&p), &g, 1000, &mut rng).unwrap();
    assert_eq!((id.nu_residual, id.psi_residual), (0.0, 0.0));
    let split = Refinement::split(&p, &[1.0, 1.0]).unwrap();
    let rep = check_coherence(d, &split, &g, 100_000, &mut rng).unwrap();
    assert!(rep.nu_residual < 1e-12 && rep.psi_residual < 1e-12);
    assert!(rep.mu_z_score < 3.0, "{rep:?}");
    let chain = split.then(&Refinement::split(&split.child, &[1.0, 3.0]).unwrap()).unwrap();
    assert_eq!(chain.child.len(), 4);
    let rep = check_coherence(dims(3), &chain, &CellVector(vec![vec![0.7, -1.1]]), 50_000, &mut rng).unwrap();
    assert!(rep.nu_residual < 1e-12 && rep.mu_z_score < 3.0, "{rep:?}");
}

#[test]
fn char_l_is_positive_definite() {
    let mut rng = SeededStream::new(3, 0);
    for n in [2, 3, 4] {
        let pts: Vec<Vec<f64>> = (0..20).map(|_| (0..n - 1).map(|_| rng.random_range(-5.0..5.0)).collect()).collect();
        assert!(char_l_gram_min_eigenvalue(&pts) >= -1e-10);
    }
}

#[test]
fn v_partial_products_are_cauchy() {
    // planted geometric tail c_i = 0.9^i
    for n in [2, 3, 4] {
        let d = dims(n);
        let atoms: Vec<Atom> = (0..60)
            .map(|i| Atom { x: i as f64 / 60.0, c: { let mut v = vec![0.0; n - 1]; v[0] = 0.9f64.powi(i); v } })
            .collect();
        let c = PointConfiguration::new(atoms, 0.0).unwrap();
        assert!(c.total_variation() <= 10.0);
        let s = density_v_partial_logs(d, &c, 1.0).unwrap();
        let norms = c.norms();
        for k in 0..norms.len() {
            let tail: f64 = norms[k..].iter().sum();
            assert!((s[norms.len()] - s[k]).abs() <= 2.0 * tail + 1e-12, "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn densities_are_rotation_invariant(seed in any::<u64>(), x0 in -3.0f64..3.0, x1 in -3.0f64..3.0) {
        prop_assume!(x0.abs() + x1.abs() > 1e-3);
        let d = dims(3);
        let mut rng = SeededStream::new(seed, 0);
        let u = lorentz_current::group::random_orthogonal(2, &mut rng);
        let xu = vec![x0 * u[(0, 0)] + x1 * u[(1, 0)], x0 * u[(0, 1)] + x1 * u[(1, 1)]];
        let p = part(&[0.8]);
        let a = MarginalVector(vec![vec![x0, x1]]);
        let b = MarginalVector(vec![xu]);
        let (na, nb) = (ln_nu_alpha_density(d, &p, &a).unwrap(), ln_nu_alpha_density(d, &p, &b).unwrap());
        let (ma, mb) = (ln_mu_alpha_density(d, &p, &a).unwrap(), ln_mu_alpha_density(d, &p, &b).unwrap());
        prop_assert!((na - nb).abs() < 1e-12 && (ma - mb).abs() < 1e-12);
    }

    #[test]
    fn nu_density_scaling_identity(e0 in 0.1f64..5.0, e1 in -5.0f64..-0.1, l0 in 0.05f64..1.9, l1 in 0.05f64..1.9,
                                   x in prop::collection::vec(0.1f64..3.0, 4)) {
        let d = dims(3);
        let p = part(&[l0, l1]);
        let xi = MarginalVector(vec![vec![x[0], x[1]], vec![x[2], -x[3]]]);
        let sc = MarginalVector(vec![vec![e0 * x[0], e0 * x[1]], vec![e1 * x[2], -e1 * x[3]]]);
        // density(εξ)·|ε|^d per cell = |ε|^λ · density(ξ)
        let lhs = nu_alpha_density(d, &p, &sc).unwrap() * (e0 * e1).abs().powi(2);
        let rhs = e0.abs().powf(l0) * e1.abs().powf(l1) * nu_alpha_density(d, &p, &xi).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }
}

use lorentz_current::measures::{big_psi, CellVector, Partition};
use lorentz_current::process::*;
use lorentz_current::quadrature::rules::{adaptive, tanh_sinh, Tolerance};
use lorentz_current::specfun::{marginal_radial_density, Dimensions};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn dims(n: usize) -> Dimensions {
    Dimensions::new(n).unwrap()
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let p = Partition::new(vec![0.5, 0.5]).unwrap();
    let a: Vec<_> = {
        let mut s = SeededStream::new(42, 3);
        (0..5).map(|_| sample_marginal(dims(3), &p, &mut s).unwrap()).collect()
    };
    let b: Vec<_> = {
        let mut s = SeededStream::new(42, 3);
        (0..5).map(|_| sample_marginal(dims(3), &p, &mut s).unwrap()).collect()
    };
    assert_eq!(a, b);
    let mut s = SeededStream::new(42, 4);
    assert_ne!(a[0], sample_marginal(dims(3), &p, &mut s).unwrap());
    let cfg = ProcessConfig::new(dims(2), 1.0, 1e-3);
    let c1 = sample_process(dims(2), cfg, &mut SeededStream::new(9, 0)).unwrap();
    let c2 = sample_process(dims(2), cfg, &mut SeededStream::new(9, 0)).unwrap();
    assert_eq!(c1, c2);
}

#[test]
fn marginal_characteristic_function_n3() {
    let d = dims(3);
    let lambda = 0.7;
    let mut s = SeededStream::new(1, 0);
    let draws: Vec<Vec<f64>> = (0..100_000).map(|_| sample_cell(d, lambda, &mut s).unwrap()).collect();
    for g in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let gamma = [g * 0.6, g * 0.8];
        let phases: Vec<f64> = draws.iter().map(|x| x[0] * gamma[0] + x[1] * gamma[1]).collect();
        let ec = EmpiricalCharacteristic::from_phases(&phases);
        let want = (1.0 + 0.25 * g * g).powf(-0.5 * lambda);
        assert!(ec.z_score(want) < 3.0, "|γ|={g}: {ec:?} vs {want}");
    }
}

#[test]
fn marginal_matches_gamma_difference_oracle() {
    let d = dims(2);
    let mut s = SeededStream::new(2, 0);
    let a: Vec<f64> = (0..100_000).map(|_| sample_cell(d, 0.5, &mut s).unwrap()[0]).collect();
    let b: Vec<f64> = (0..100_000).map(|_| oracle_n2(0.5, &mut s).unwrap()).collect();
    assert!(ks_two_sample(&a, &b) <= 0.02);
}

#[test]
fn oracle_at_lambda_two_is_two_sided_exponential() {
    let mut s = SeededStream::new(3, 0);
    let v: Vec<f64> = (0..100_000).map(|_| oracle_n2(2.0, &mut s).unwrap()).collect();
    let cdf = |x: f64| if x < 0.0 { 0.5 * (2.0 * x).exp() } else { 1.0 - 0.5 * (-2.0 * x).exp() };
    assert!(ks_statistic(&v, cdf) < 0.01);
    let (m, se) = mean_and_se(&v);
    assert!(m.abs() < 3.0 * se);
}

#[test]
fn oracle_matches_quadrature_cdf_of_density() {
    // probability density is π^{−1/2} times the Bessel-K form for n = 2
    let lambda = 0.5;
    let pdf = |x: f64| marginal_radial_density(dims(2), lambda, &[x]).unwrap() / std::f64::consts::PI.sqrt();
    let mut s = SeededStream::new(4, 0);
    let mut v: Vec<f64> = (0..100_000).map(|_| oracle_n2(lambda, &mut s).unwrap().abs()).collect();
    v.sort_by(f64::total_cmp);
    // CDF of |ξ| is 2∫_0^x pdf, accumulated between checkpoints
    let tol = Tolerance::new(1e-14, 1e-10);
    let mut acc = 0.0;
    let mut prev = 0.0;
    let mut worst = 0.0f64;
    for k in (99..v.len()).step_by(100) {
        let x = v[k];
        acc += if prev == 0.0 { tanh_sinh(&pdf, 0.0, x, tol).unwrap().value } else { adaptive(&pdf, prev, x, tol).unwrap().value };
        prev = x;
        let f = 2.0 * acc;
        worst = worst.max((f - (k + 1) as f64 / v.len() as f64).abs());
    }
    assert!(worst <= 0.02, "{worst}");
}

#[test]
fn infinite_divisibility() {
    let d = dims(2);
    let mut s = SeededStream::new(5, 0);
    let whole: Vec<f64> = (0..100_000).map(|_| sample_cell(d, 1.2, &mut s).unwrap()[0]).collect();
    let halves: Vec<f64> =
        (0..100_000).map(|_| sample_cell(d, 0.6, &mut s).unwrap()[0] + sample_cell(d, 0.6, &mut s).unwrap()[0]).collect();
    assert!(ks_two_sample(&whole, &halves) <= 0.02);
}

#[test]
fn gaussian_mixture_structure() {
    let d = dims(3);
    let mut s = SeededStream::new(6, 0);
    let z: Vec<f64> = (0..100_000)
        .map(|_| {
            let (w, xi) = sample_cell_mixture(d, 0.8, &mut s).unwrap();
            xi[0] / (0.5 * w).sqrt()
        })
        .collect();
    let (m, _) = mean_and_se(&z);
    let m2 = z.iter().map(|x| x * x).sum::<f64>() / z.len() as f64;
    let m4 = z.iter().map(|x| x.powi(4)).sum::<f64>() / z.len() as f64;
    assert!(m.abs() < 0.02 && (m2 - 1.0).abs() < 0.02);
    // standard normal kurtosis 3, standard error about √(96/N)
    assert!((m4 / (m2 * m2) - 3.0).abs() < 0.1);
}

#[test]
fn process_reproduces_big_psi() {
    let d = dims(2);
    let cfg = ProcessConfig::new(d, 1.0, 1e-3);
    let table = JumpTable::new(d, cfg).unwrap();
    let mut s = SeededStream::new(7, 0);
    let paths: Vec<PointConfiguration> = (0..10_000).map(|_| table.sample(&mut s).unwrap()).collect();
    let p = Partition::new(vec![1.0]).unwrap();
    for g in [0.5, 1.0, 2.0, 4.0] {
        let phases: Vec<f64> = paths.iter().map(|c| c.pairing(|_| vec![g])).collect();
        let ec = EmpiricalCharacteristic::from_phases(&phases);
        let want = big_psi(&p, &CellVector(vec![vec![g]]));
        let bias = g * table.truncation_bound();
        assert!((ec.re - want).abs() <= 3.0 * ec.re_se + bias, "γ={g}: {ec:?} vs {want}");
        assert!(ec.im.abs() <= 3.0 * ec.im_se);
    }
}

#[test]
fn process_total_variation_mean() {
    // n = 2: the intensity is e^{−2|ξ|}/(2|ξ|), so E Σ|c| = m(X)/2
    let d = dims(2);
    let cfg = ProcessConfig::new(d, 2.0, 1e-4);
    let table = JumpTable::new(d, cfg).unwrap();
    let mut s = SeededStream::new(8, 0);
    let tv: Vec<f64> = (0..20_000).map(|_| table.sample(&mut s).unwrap().total_variation()).collect();
    let (m, se) = mean_and_se(&tv);
    assert!((m + table.truncation_bound() - 1.0).abs() < 3.0 * se, "{m} ± {se}");
    // truncation bound: 2·∫_0^ε e^{−2s} ds
    let exact = 2.0 * 0.5 * (1.0 - (-2.0f64 * 1e-4).exp());
    assert!((table.truncation_bound() - exact).abs() < 1e-10 * exact);
}

#[test]
fn atom_count_grows_logarithmically() {
    let d = dims(3);
    let r1 = JumpTable::new(d, ProcessConfig::new(d, 1.0, 1e-2)).unwrap().rate();
    let r2 = JumpTable::new(d, ProcessConfig::new(d, 1.0, 1e-4)).unwrap().rate();
    let r3 = JumpTable::new(d, ProcessConfig::new(d, 1.0, 1e-6)).unwrap().rate();
    // the radial intensity behaves like c/s near 0, so equal log steps add equal rates
    let (a, b) = (r2 - r1, r3 - r2);
    assert!((a - b).abs() < 1e-3 * b, "{a} {b}");
}

#[test]
fn projected_process_matches_marginal() {
    let d = dims(2);
    let p = Partition::new(vec![0.5, 0.5]).unwrap();
    let table = JumpTable::new(d, ProcessConfig::new(d, 1.0, 1e-4)).unwrap();
    let mut s = SeededStream::new(10, 0);
    let proj: Vec<_> = (0..10_000).map(|_| project_config(d, &table.sample(&mut s).unwrap(), &p)).collect();
    let marg: Vec<_> = (0..10_000).map(|_| sample_marginal(d, &p, &mut s).unwrap()).collect();
    for cell in 0..2 {
        let a: Vec<f64> = proj.iter().map(|m| m.0[cell][0]).collect();
        let b: Vec<f64> = marg.iter().map(|m| m.0[cell][0]).collect();
        assert!(ks_two_sample(&a, &b) <= 0.03);
    }
}

#[test]
fn halving_cutoff_moves_estimates_less_than_bound() {
    let d = dims(2);
    let g = 2.0;
    let est = |eps: f64, seed: u64| {
        let table = JumpTable::new(d, ProcessConfig::new(d, 1.0, eps)).unwrap();
        let mut s = SeededStream::new(seed, 0);
        let ph: Vec<f64> = (0..20_000).map(|_| table.sample(&mut s).unwrap().pairing(|_| vec![g])).collect();
        (EmpiricalCharacteristic::from_phases(&ph), table.truncation_bound())
    };
    let (a, ba) = est(2e-2, 11);
    let (b, _) = est(1e-2, 11);
    assert!((a.re - b.re).abs() <= g * ba + 3.0 * (a.re_se.powi(2) + b.re_se.powi(2)).sqrt());
}

#[test]
fn projection_edge_cases() {
    let d = dims(3);
    let p = Partition::new(vec![1.0]).unwrap();
    assert_eq!(project_config(d, &PointConfiguration::empty(), &p).0, vec![vec![0.0, 0.0]]);
    let c = PointConfiguration::new(
        vec![Atom { x: 0.2, c: vec![1.0, 2.0] }, Atom { x: 0.7, c: vec![-0.5, 0.5] }],
        0.0,
    )
    .unwrap();
    assert_eq!(project_config(d, &c, &p).0, vec![vec![0.5, 2.5]]);
    assert!(PointConfiguration::new(vec![Atom { x: 0.2, c: vec![1.0, 0.0] }, Atom { x: 0.2, c: vec![1.0, 0.0] }], 0.0).is_err());
    let json = serde_json::to_string(&c).unwrap();
    assert!(json.starts_with("{\"atoms\":[{\"x\":0.2,\"c\":[1.0,2.0]}"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rotation_keeps_norms_and_pairing(seed in any::<u64>(), g0 in -3.0f64..3.0, g1 in -3.0f64..3.0) {
        let d = dims(3);
        let mut s = SeededStream::new(seed, 0);
        let c = sample_process(d, ProcessConfig::new(d, 1.0, 1e-2), &mut s).unwrap();
        let u = lorentz_current::group::random_orthogonal(2, &mut s);
        let r = rotate_config(&c, |_| u.clone());
        for (a, b) in c.norms().iter().zip(r.norms()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
        // ⟨ξu, γ⟩ = ⟨ξ, γuᵀ⟩
        let gamma = [g0, g1];
        let gut: Vec<f64> = (0..2).map(|i| (0..2).map(|j| u[(i, j)] * gamma[j]).sum()).collect();
        let lhs = r.pairing(|_| gamma.to_vec());
        let rhs = c.pairing(|_| gut.clone());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + c.total_variation() * 5.0));
        let id = rotate_config(&c, |_| DMatrix::identity(2, 2));
        prop_assert_eq!(id, c);
    }

    #[test]
    fn scaling_moves_pairing(seed in any::<u64>(), eps in 0.2f64..3.0, g in -3.0f64..3.0) {
        let d = dims(2);
        let mut s = SeededStream::new(seed, 1);
        let c = sample_process(d, ProcessConfig::new(d, 1.0, 1e-2), &mut s).unwrap();
        let sc = scale_config(&c, |x| if x < 0.5 { eps } else { 1.0 / eps });
        let lhs = sc.pairing(|_| vec![g]);
        let rhs = c.pairing(|x| vec![if x < 0.5 { eps * g } else { g / eps }]);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + c.total_variation() * 10.0));
    }
}

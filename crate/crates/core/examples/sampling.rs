//! Exact marginals and the jump process, checked against Ψ.
//!
//!     cargo run --release --example sampling

use lorentz_current::measures::{big_psi, CellVector, Partition};
use lorentz_current::process::{
    project_config, sample_marginal, EmpiricalCharacteristic, JumpTable, ProcessConfig, SeededStream,
};
use lorentz_current::specfun::Dimensions;

fn main() -> lorentz_current::Result<()> {
    let d = Dimensions::new(2)?;
    let p = Partition::new(vec![0.5, 0.5])?;
    let g = CellVector(vec![vec![1.0], vec![2.0]]);
    let mut rng = SeededStream::new(42, 0);

    let phases: Vec<f64> = (0..50_000).map(|_| sample_marginal(d, &p, &mut rng).map(|xi| xi.pairing(&g))).collect::<Result<_, _>>()?;
    let ec = EmpiricalCharacteristic::from_phases(&phases);
    println!("marginals: E e^(i<xi,gamma>) = {:.4} ± {:.4}, Psi = {:.4}", ec.re, ec.re_se, big_psi(&p, &g));

    let table = JumpTable::new(d, ProcessConfig::new(d, 1.0, 1e-3))?;
    println!("jump rate {:.3}, truncation bound {:.2e}", table.rate(), table.truncation_bound());
    let mut rng = rng.fork(1);
    let path = table.sample(&mut rng)?;
    println!("one path: {} atoms, total variation {:.4}", path.len(), path.total_variation());
    let phases: Vec<f64> = (0..10_000)
        .map(|_| table.sample(&mut rng).map(|c| project_config(d, &c, &p).pairing(&g)))
        .collect::<Result<_, _>>()?;
    let ec = EmpiricalCharacteristic::from_phases(&phases);
    println!("projected paths: {:.4} ± {:.4}", ec.re, ec.re_se);
    Ok(())
}

//! Densities of μ_α and ν_α, their ratio, and the refinement limit toward v.
//!
//!     cargo run --example measure_densities

use lorentz_current::measures::{
    big_psi, density_v, extrapolate_halving, ln_density_v, mu_alpha_density, nu_alpha_density, nu_char,
    refinement_sequence, rn_derivative, CellVector, MarginalVector, Partition,
};
use lorentz_current::process::{Atom, PointConfiguration};
use lorentz_current::specfun::Dimensions;

fn main() -> lorentz_current::Result<()> {
    let d = Dimensions::new(3)?;
    let p: Partition = "0.5,0.8".parse()?;
    let xi = MarginalVector(vec![vec![0.4, -0.1], vec![1.2, 0.3]]);
    println!("mu density {:.12}", mu_alpha_density(d, &p, &xi)?);
    println!("nu density {:.12}", nu_alpha_density(d, &p, &xi)?);
    println!("d nu / d mu {:.12}", rn_derivative(d, &p, &xi)?);

    let g = CellVector(vec![vec![1.0, 0.0], vec![0.0, 2.0]]);
    println!("Psi(gamma) = {:.12}, nu transform = {:.12}", big_psi(&p, &g), nu_char(&p, &g)?);

    let atoms = vec![
        Atom { x: 0.11, c: vec![0.8, 0.8] },
        Atom { x: 0.52, c: vec![-0.3, -0.3] },
        Atom { x: 0.93, c: vec![1.5, 1.5] },
    ];
    let c = PointConfiguration::new(atoms, 0.0)?;
    let seq = refinement_sequence(d, &c, 1.0, &[8, 16, 32, 64])?;
    println!("log of d nu/d mu on 8, 16, 32, 64 cells: {seq:.6?}");
    println!("extrapolated {:.8}, log v {:.8}, v = {:.8}", extrapolate_halving(&seq), ln_density_v(d, &c, 1.0)?, density_v(d, &c, 1.0)?);
    Ok(())
}

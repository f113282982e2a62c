//! The vacuum vector, its matrix coefficients, and reproduction of Ψ by the
//! current-group vacuum.
//!
//!     cargo run --release --example vacuum_and_spherical

use lorentz_current::measures::{CellVector, Partition};
use lorentz_current::process::SeededStream;
use lorentz_current::quadrature::fourier::calibrate_cn;
use lorentz_current::reps::{spherical_reproduce, tau_isometry_check, vacuum_checks};
use lorentz_current::specfun::Dimensions;

fn main() -> lorentz_current::Result<()> {
    let d = Dimensions::new(3)?;
    let cn = calibrate_cn(d)?.c_n;
    let rep = vacuum_checks(d, 1.0, cn, &[0.0, 0.5, 1.0, 2.0])?;
    for (g, ratio, target) in &rep.ratios {
        println!("|gamma| = {g}: <T_z f, f>/<f, f> = {ratio:.12}, Psi = {target:.12}");
    }

    let mut rng = SeededStream::new(7, 0);
    let p = Partition::new(vec![0.5, 0.5])?;
    let g = CellVector(vec![vec![1.0, 0.0], vec![0.0, 2.0]]);
    let r = spherical_reproduce(d, &p, &g, 100_000, &mut rng)?;
    println!("vacuum coefficient {:.4} ± {:.4} vs Psi {:.4} (z = {:.2})", r.estimate.re, r.re_se, r.psi, r.z);
    if let Some(n2) = r.vacuum_norm2 {
        println!("vacuum norm^2 {n2:.10}");
    }

    let t = tau_isometry_check(d, &[0.5, 0.7], 100_000, &mut rng)?;
    println!("embedding: tensor norm {:.4}, standard norm {:.4}, exact {:.4}", t.tensor_norm.value, t.standard_norm.value, t.exact);
    Ok(())
}

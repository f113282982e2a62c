//! Bessel-K, the V_ρ profile and its small-x branch.
//!
//!     cargo run --example special_functions

use lorentz_current::specfun::{bessel_k, levy_density, marginal_radial_density, v_rho, v_rho_asymptotic, Dimensions};

fn main() -> lorentz_current::Result<()> {
    // bessel_k evaluates K_ρ(2z)
    for rho in [0.0, 0.5, 1.5, 2.7] {
        println!("K_{rho}(2) = {:.15}", bessel_k(rho, 1.0)?);
    }
    println!();
    println!("{:>8} {:>18} {:>18} {:>18}", "x", "V_0.5", "e^{2x}", "V_1.5");
    for x in [0.0, 0.1, 1.0, 3.0] {
        println!("{x:>8} {:>18.12} {:>18.12} {:>18.12}", v_rho(0.5, x)?, (2.0 * x).exp(), v_rho(1.5, x)?);
    }
    println!();
    for rho in [0.5, 1.0, 2.0] {
        let x = 1e-3;
        let v = v_rho(rho, x)?;
        let a = v_rho_asymptotic(rho, x);
        println!("rho = {rho}: V = {v:.12}, small-x branch {a:.12}, relative error {:.2e}", ((v - a) / (v - 1.0)).abs());
    }
    println!();
    let d2 = Dimensions::new(2)?;
    let d3 = Dimensions::new(3)?;
    println!("Levy density, n = 2, |xi| = 0.5: {:.12}", levy_density(d2, &[0.5])?);
    println!("Levy density, n = 3, |xi| = 1.2: {:.12}", levy_density(d3, &[0.72, -0.96])?);
    println!("cell density, n = 2, lambda = 1, |xi| = 0.5: {:.12}", marginal_radial_density(d2, 1.0, &[0.5])?);
    Ok(())
}

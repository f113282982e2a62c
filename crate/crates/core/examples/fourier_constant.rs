//! Calibrates the Fourier constant c_n and uses it in the pairing identity and
//! the Lévy–Khinchin fit.
//!
//!     cargo run --release --example fourier_constant

use lorentz_current::quadrature::fourier::{calibrate_cn, pairing_check};
use lorentz_current::quadrature::levy::LEVY_GRID;
use lorentz_current::quadrature::{levy_khinchin_fit, RadialProfile};
use lorentz_current::specfun::{Dimensions, FourierConstant};

fn main() -> lorentz_current::Result<()> {
    for n in [2, 3, 4] {
        let d = Dimensions::new(n)?;
        let fc = calibrate_cn(d)?;
        println!("n = {n}: c_n = {:.12} (analytic {:.12}), spread {:.1e}", fc.c_n, FourierConstant::analytic(d), fc.spread);
        let p = RadialProfile::gaussian_poly(0.8, vec![1.0, 0.5]);
        let lambda = 0.5 * d.df();
        let pc = pairing_check(d, fc.c_n, lambda, &p, 8.0, 12.0)?;
        println!("  pairing at lambda = {lambda}: lhs {:.10} rhs {:.10} residual {:.1e}", pc.lhs, pc.rhs, pc.residual);
        let fit = levy_khinchin_fit(d, &LEVY_GRID)?;
        println!("  Levy-Khinchin kappa = {:.12}, worst residual {:.1e}", fit.kappa, fit.max_residual());
    }
    Ok(())
}

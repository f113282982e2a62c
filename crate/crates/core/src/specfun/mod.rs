//! Bessel-family special functions and the radial profiles built from them.
//!
//! Two argument conventions live side by side. The functions in [`bessel`]
//! use the textbook argument (`k_nu(nu, x)` is K_ν(x)). The top-level
//! [`bessel_i`] and [`bessel_k`] take `z` and evaluate at `2z`, which is the
//! convention every density formula in this crate is written in.

pub mod bessel;
mod gamma;
mod radial;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub(crate) use radial::ln_marginal_radial;
pub use radial::{
    levy_density, ln_levy_density, ln_marginal_radial_density, ln_v_rho, marginal_radial_density,
    sphere_area, spherical_kernel, spherical_kernel_minus_area, v_rho, v_rho_asymptotic, v_rho_asymptotic_as_printed,
    v_rho_reflection,
};

/// Matrix-size parameter of O(n,1) and the ambient dimension d = n − 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dimensions {
    n: usize,
}

impl Dimensions {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return domain(format!("n must be at least 2, got {n}"));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient vector dimension n − 1.
    pub fn d(&self) -> usize {
        self.n - 1
    }

    /// n − 1 as a float, the upper end of the complementary series.
    pub fn df(&self) -> f64 {
        (self.n - 1) as f64
    }
}

impl TryFrom<usize> for Dimensions {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Dimensions> for usize {
    fn from(d: Dimensions) -> usize {
        d.n
    }
}

/// The dimension constant relating the Fourier transform of
/// (1+|γ|²/4)^{−λ/2} to the Bessel-K profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierConstant {
    pub n: usize,
    pub c_n: f64,
    /// Relative spread of the fitted ratio over the calibration grid.
    pub spread: f64,
}

impl FourierConstant {
    /// The analytic value (4π)^{d/2}, used as an oracle for calibration.
    pub fn analytic(dims: Dimensions) -> f64 {
        (4.0 * std::f64::consts::PI).powf(dims.df() / 2.0)
    }
}

/// I_ρ(2z) by the power series in z.
pub fn bessel_i(rho: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("bessel_i needs z > 0, got {z}"));
    }
    if rho < 0.0 {
        return domain(format!("bessel_i needs rho >= 0, got {rho}"));
    }
    if z > 50.0 {
        return domain(format!("bessel_i series is limited to z <= 50, got {z}"));
    }
    bessel::i_series(rho, 2.0 * z)
}

/// K_ρ(2z). Symmetric in ρ.
pub fn bessel_k(rho: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("bessel_k needs z > 0, got {z}"));
    }
    Ok(bessel::k_nu(rho.abs(), 2.0 * z))
}

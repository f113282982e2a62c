use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oscillatory::{oscillatory_sum, OscillatoryConfig};
use super::rules::{adaptive, semi_infinite, tanh_sinh, QuadratureReport, Tolerance};
use super::zeros::spherical_zeros;
use crate::error::{Error, Result};
use crate::specfun::{
    bessel::ln_k_nu, gamma, ln_gamma, sphere_area, spherical_kernel, Dimensions, FourierConstant,
};

/// A radial function f(r), r > 0, with its power-law exponent at the origin.
#[derive(Clone)]
pub struct RadialProfile {
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub singularity_exponent: f64,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("singularity_exponent", &self.singularity_exponent)
            .finish_non_exhaustive()
    }
}

impl RadialProfile {
    pub fn new(singularity_exponent: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { evaluator: Arc::new(f), singularity_exponent }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.evaluator)(r)
    }

    /// (1 + r²/4)^{−λ/2}.
    pub fn lorentzian(lambda: f64) -> Self {
        Self::new(0.0, move |r| (1.0 + 0.25 * r * r).powf(-0.5 * lambda))
    }

    /// e^{−r²/(2σ²)} times the polynomial Σ c_k r^{2k}.
    pub fn gaussian_poly(sigma: f64, coeffs: Vec<f64>) -> Self {
        Self::new(0.0, move |r| {
            let q = r * r;
            let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * q + c);
            p * (-0.5 * q / (sigma * sigma)).exp()
        })
    }
}

fn precise() -> OscillatoryConfig {
    OscillatoryConfig {
        piece_tol: Tolerance::new(1e-16, 1e-14),
        tol: Tolerance::new(1e-14, 1e-11),
        min_pieces: 8,
        max_pieces: 600,
    }
}

/// ∫_0^∞ f(r) r^{d−1} dr · |S^{d−1}|, the transform at the origin.
pub fn radial_integral(dims: Dimensions, profile: &RadialProfile) -> Result<QuadratureReport> {
    let d = dims.d() as i32;
    let tol = Tolerance::new(1e-15, 1e-13);
    let g = |r: f64| profile.eval(r) * r.powi(d - 1);
    let head = tanh_sinh(&g, 0.0, 1.0, tol)?;
    let tail = semi_infinite(&g, 1.0, tol)?;
    Ok((head + tail).scaled(sphere_area(dims.d())))
}

/// The d-dimensional Fourier transform of a radial profile at |ξ| = r_out:
/// ∫_0^∞ f(r) r^{d−1} Ŝ_d(r_out·r) dr, with Ŝ_d the spherical kernel.
pub fn radial_fourier(dims: Dimensions, profile: &RadialProfile, r_out: f64) -> Result<QuadratureReport> {
    radial_fourier_with(dims, profile, r_out, precise())
}

pub fn radial_fourier_with(
    dims: Dimensions,
    profile: &RadialProfile,
    r_out: f64,
    cfg: OscillatoryConfig,
) -> Result<QuadratureReport> {
    if r_out < 0.0 {
        return Err(Error::Domain("r_out must be non-negative".into()));
    }
    if r_out == 0.0 {
        return radial_integral(dims, profile);
    }
    let d = dims.d();
    let di = d as i32;
    let g = move |r: f64| profile.eval(r) * r.powi(di - 1) * spherical_kernel(d, r_out * r);
    let mut zeros = spherical_zeros(d).map(move |t| t / r_out);
    let first = zeros.next().expect("infinite zero sequence");
    let cut = first.min(1.0);
    let mut head = tanh_sinh(&g, 0.0, cut, cfg.piece_tol)?;
    if cut < first {
        head = head + adaptive(&g, cut, first, cfg.piece_tol)?;
    }
    let tail = oscillatory_sum(&g, std::iter::once(first).chain(zeros), cfg)?;
    Ok(head + tail)
}

/// Right-hand side (2/Γ(λ/2)) r^{(λ−d)/2} K_{(d−λ)/2}(2r), without c_n.
pub fn bessel_profile(dims: Dimensions, lambda: f64, r: f64) -> f64 {
    let rho = (dims.df() - lambda) / 2.0;
    (std::f64::consts::LN_2 - ln_gamma(lambda / 2.0) - rho * r.ln() + ln_k_nu(rho.abs(), 2.0 * r)).exp()
}

/// Quadrature transform of (1+|γ|²/4)^{−λ/2} divided by the Bessel profile.
pub fn lorentzian_ratio(dims: Dimensions, lambda: f64, xi: f64) -> Result<f64> {
    let q = radial_fourier(dims, &RadialProfile::lorentzian(lambda), xi)?;
    Ok(q.value / bessel_profile(dims, lambda, xi))
}

pub const CALIBRATION_LAMBDAS: [f64; 3] = [0.5, 1.0, 1.5];
pub const CALIBRATION_XIS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

/// Per-point ratios over a grid, evaluated in parallel but returned in grid
/// order.
pub fn calibration_ratios(dims: Dimensions, lambdas: &[f64], xis: &[f64]) -> Result<Vec<f64>> {
    let grid: Vec<(f64, f64)> =
        lambdas.iter().flat_map(|&l| xis.iter().map(move |&x| (l, x))).collect();
    grid.par_iter().map(|&(l, x)| lorentzian_ratio(dims, l, x)).collect()
}

/// Fits c_n on the default grid; the fit is rejected when the ratio is not
/// constant to 1e-6.
pub fn calibrate_cn(dims: Dimensions) -> Result<FourierConstant> {
    calibrate_cn_on(dims, &CALIBRATION_LAMBDAS, &CALIBRATION_XIS, 1e-6)
}

pub fn calibrate_cn_on(dims: Dimensions, lambdas: &[f64], xis: &[f64], max_spread: f64) -> Result<FourierConstant> {
    let ratios = calibration_ratios(dims, lambdas, xis)?;
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / mean.abs();
    let fc = FourierConstant { n: dims.n(), c_n: mean, spread };
    if !(spread <= max_spread) {
        return Err(Error::Calibration(format!("c_{} spread {spread:e} exceeds {max_spread:e}", dims.n())));
    }
    Ok(fc)
}

/// Coefficient 2^{−λ}Γ((d−λ)/2)/Γ(λ/2) of the |γ|^{−λ} transform.
pub fn riesz_coefficient(dims: Dimensions, lambda: f64) -> f64 {
    2f64.powf(-lambda) * gamma((dims.df() - lambda) / 2.0) / gamma(lambda / 2.0)
}

/// Outcome of testing the |γ|^{−λ} transform against a test profile.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PairingCheck {
    pub lambda: f64,
    /// ∫ |γ|^{−λ} f̂(γ) dγ.
    pub lhs: f64,
    /// c_n·coefficient·∫ f(ξ)|ξ|^{λ−d} dξ.
    pub rhs: f64,
    pub residual: f64,
}

/// Fourier transform of a test profile by finite-range quadrature; the
/// profile must be negligible beyond `support`. `scale` sets the absolute
/// accuracy floor.
fn compact_transform(d: usize, profile: &RadialProfile, support: f64, rho: f64, scale: f64) -> Result<f64> {
    let di = d as i32;
    let g = |r: f64| profile.eval(r) * r.powi(di - 1) * spherical_kernel(d, rho * r);
    let tol = Tolerance::new(1e-15 * scale, 1e-13);
    let head = tanh_sinh(&g, 0.0, 1.0_f64.min(support), tol)?;
    let rest = if support > 1.0 { adaptive(&g, 1.0, support, tol)?.value } else { 0.0 };
    Ok(head.value + rest)
}

/// Checks ∫|γ|^{−λ} f̂(γ) dγ = c_n 2^{−λ}Γ((d−λ)/2)/Γ(λ/2) ∫ f(ξ)|ξ|^{λ−d} dξ,
/// the pairing form of the |γ|^{−λ} transform. Both f and f̂ must decay fast;
/// `support` and `spectral_support` bound where they are numerically nonzero.
pub fn pairing_check(
    dims: Dimensions,
    c_n: f64,
    lambda: f64,
    profile: &RadialProfile,
    support: f64,
    spectral_support: f64,
) -> Result<PairingCheck> {
    if !(lambda > 0.0 && lambda < dims.df()) {
        return Err(Error::Domain(format!("pairing needs 0 < lambda < {}", dims.df())));
    }
    let d = dims.d();
    let area = sphere_area(d);
    let tol = Tolerance::new(1e-14, 1e-11);
    let m0 = compact_transform(d, profile, support, 0.0, 1.0)?;
    let scale = m0.abs().max(1e-300);
    let ft = |rho: f64| compact_transform(d, profile, support, rho, scale).unwrap_or(f64::NAN);
    // on [0, 1] the singular factor ρ^{d−1−λ} is integrated exactly against f̂(0)
    let a = d as f64 - 1.0 - lambda;
    let head = |rho: f64| (ft(rho) - m0) * rho.powf(a);
    let outer = |rho: f64| ft(rho) * rho.powf(a);
    let lhs = area
        * (m0 / (a + 1.0)
            + tanh_sinh(&head, 0.0, 1.0, Tolerance::new(1e-14 * scale, 1e-11))?.value
            + adaptive(&outer, 1.0, spectral_support, Tolerance::new(1e-14 * scale, 1e-11))?.value);
    let inner = |r: f64| profile.eval(r) * r.powf(lambda - 1.0);
    let m = tanh_sinh(&inner, 0.0, 1.0_f64.min(support), tol)?.value
        + if support > 1.0 { adaptive(&inner, 1.0, support, tol)?.value } else { 0.0 };
    let rhs = c_n * riesz_coefficient(dims, lambda) * area * m;
    if !lhs.is_finite() {
        return Err(Error::Convergence("test-profile transform failed".into()));
    }
    Ok(PairingCheck { lambda, lhs, rhs, residual: ((lhs - rhs) / rhs).abs() })
}

/// The radial transform of 1/V_ρ(|ξ|) at |x|, by quadrature.
pub fn inverse_v_transform(dims: Dimensions, rho: f64, x: f64) -> Result<QuadratureReport> {
    let profile = RadialProfile::new(0.0, move |r| {
        if r == 0.0 {
            1.0
        } else {
            (-crate::specfun::ln_v_rho(rho, r).unwrap_or(f64::INFINITY)).exp()
        }
    });
    radial_fourier(dims, &profile, x)
}

/// Closed form (2π)^d/c_n · Γ(d/2+ρ)/Γ(ρ) · (1+|x|²/4)^{−d/2−ρ} for the
/// transform of 1/V_ρ, obtained by inverting the Lorentzian transform.
pub fn inverse_v_closed_form(dims: Dimensions, c_n: f64, rho: f64, x: f64) -> f64 {
    let h = dims.df() / 2.0;
    (2.0 * std::f64::consts::PI).powf(dims.df()) / c_n * (ln_gamma(h + rho) - ln_gamma(rho)).exp()
        * (1.0 + 0.25 * x * x).powf(-h - rho)
}

/// The coefficient as printed alongside that transform,
/// c_n Γ(ρ)/Γ(d/2+ρ) (1+|x|²/4)^{−d/2−ρ}.
pub fn inverse_v_printed_form(dims: Dimensions, c_n: f64, rho: f64, x: f64) -> f64 {
    let h = dims.df() / 2.0;
    c_n * (ln_gamma(rho) - ln_gamma(h + rho)).exp() * (1.0 + 0.25 * x * x).powf(-h - rho)
}

//! The kernel of the operator attached to the element s in the commutative
//! model,
//!
//! A^λ(ξ, ξ′) = 2^{d−λ/2} ∫_0^∞ r^{λ−d−1} Ŝ_d(|rξ + 2ξ′/r|) dr,
//!
//! so that the operator itself is φ ↦ (2π)^{−d} ∫ A^λ(ξ, ξ′) φ(ξ′) dξ′.

use std::f64::consts::PI;

use super::oscillatory::{oscillatory_sum, OscillatoryConfig};
use super::rules::{QuadratureReport, Tolerance};
use super::zeros::spherical_zeros;
use crate::error::{Error, Result};
use crate::specfun::bessel::{j_nu, k_nu};
use crate::specfun::{spherical_kernel, Dimensions};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// ∫_{x0}^∞ x^p Ŝ_d(t(x)) dx with t(x)² = A²x² + 2C + B²/x², where
/// x0 = sqrt(B/A) is the point after which t increases.
fn half_line(d: usize, p: f64, a: f64, b: f64, c: f64, cfg: OscillatoryConfig) -> Result<QuadratureReport> {
    let x0 = (b / a).sqrt();
    let t = move |x: f64| (a * a * x * x + 2.0 * c + b * b / (x * x)).max(0.0).sqrt();
    let f = move |x: f64| x.powf(p) * spherical_kernel(d, t(x));
    let t0 = t(x0);
    // invert t(x) = θ on the increasing branch
    let inv = move |theta: f64| {
        let q = theta * theta - 2.0 * c;
        let disc = (q * q - 4.0 * a * a * b * b).max(0.0);
        ((q + disc.sqrt()) / (2.0 * a * a)).sqrt()
    };
    let breaks = std::iter::once(x0).chain(spherical_zeros(d).filter(move |&z| z > t0).map(inv));
    oscillatory_sum(&f, breaks, cfg)
}

pub fn kernel_config() -> OscillatoryConfig {
    OscillatoryConfig {
        piece_tol: Tolerance::new(1e-15, 1e-12),
        tol: Tolerance::new(1e-11, 1e-9),
        min_pieces: 6,
        max_pieces: 800,
    }
}

/// A^λ(ξ, ξ′) by oscillatory quadrature. Both arguments must be nonzero.
pub fn kernel_a(dims: Dimensions, lambda: f64, xi: &[f64], xi_prime: &[f64]) -> Result<QuadratureReport> {
    kernel_a_with(dims, lambda, xi, xi_prime, kernel_config())
}

pub fn kernel_a_with(
    dims: Dimensions,
    lambda: f64,
    xi: &[f64],
    xi_prime: &[f64],
    cfg: OscillatoryConfig,
) -> Result<QuadratureReport> {
    let d = dims.d();
    if !(lambda >= 0.0 && lambda < dims.df()) {
        return Err(Error::Domain(format!("kernel needs 0 <= lambda < {}", dims.df())));
    }
    if xi.len() != d || xi_prime.len() != d {
        return Err(Error::Domain("kernel arguments must have length n-1".into()));
    }
    let a = dot(xi, xi).sqrt();
    let b = 2.0 * dot(xi_prime, xi_prime).sqrt();
    if a == 0.0 || b == 0.0 {
        return Err(Error::Domain("kernel is evaluated only for nonzero arguments".into()));
    }
    let c = 2.0 * dot(xi, xi_prime);
    let df = d as f64;
    // outer r ≥ r0, then inner r ≤ r0 through u = 1/r
    let outer = half_line(d, lambda - df - 1.0, a, b, c, cfg)?;
    let inner = half_line(d, df - 1.0 - lambda, b, a, c, cfg)?;
    Ok((outer + inner).scaled(2f64.powf(df - 0.5 * lambda)))
}

/// Closed form of A^λ for n = 2 (scalar arguments), with z = 2√(2|ξξ′|):
/// J-difference when ξξ′ > 0, K_{λ−1} when ξξ′ < 0. Requires 0 < λ < 1.
pub fn kernel_a_closed_n2(lambda: f64, xi: f64, xi_prime: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) || xi == 0.0 || xi_prime == 0.0 {
        return Err(Error::Domain("closed form needs 0 < lambda < 1 and nonzero arguments".into()));
    }
    let a = xi.abs();
    let b = 2.0 * xi_prime.abs();
    let z = 2.0 * (a * b).sqrt();
    let pw = (b / a).powf(0.5 * (lambda - 1.0));
    let integral = if xi * xi_prime > 0.0 {
        0.5 * PI * pw * (j_nu(lambda - 1.0, z) - j_nu(1.0 - lambda, z)) / (0.5 * PI * lambda).cos()
    } else {
        2.0 * (0.5 * PI * lambda).sin() * pw * k_nu(1.0 - lambda, z)
    };
    Ok(2.0 * 2f64.powf(1.0 - 0.5 * lambda) * integral)
}

/// The n = 2 closed form exactly as printed, with its unnamed constant set
/// to 1: (cos πλ/2)^{−1} |ξ′/ξ|^{1/2} [J_{λ−1}(w) − J_{1−λ}(w)] for ξξ′ < 0
/// and the I-difference for ξξ′ > 0, w = 2^{3/2}|ξξ′|.
pub fn kernel_a_printed_n2(lambda: f64, xi: f64, xi_prime: f64) -> Result<f64> {
    let w = 2f64.powf(1.5) * (xi * xi_prime).abs();
    let pre = (xi_prime / xi).abs().sqrt() / (0.5 * PI * lambda).cos();
    if xi * xi_prime < 0.0 {
        Ok(pre * (j_nu(lambda - 1.0, w) - j_nu(1.0 - lambda, w)))
    } else {
        Ok(pre
            * (crate::specfun::bessel::i_nu(lambda - 1.0, w)? - crate::specfun::bessel::i_nu(1.0 - lambda, w)?))
    }
}

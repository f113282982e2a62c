use std::f64::consts::PI;

use super::bessel::{i_series, i_series_signed, j_nu, ln_k_nu};
use super::gamma::{gamma, ln_gamma};
use super::Dimensions;
use crate::error::{domain, Result};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// ln V_ρ(x).
pub fn ln_v_rho(rho: f64, x: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return domain(format!("V_rho needs rho > 0, got {rho}"));
    }
    if !(x >= 0.0) {
        return domain(format!("V_rho needs x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if (rho - 0.5).abs() < 1e-15 {
        return Ok(2.0 * x);
    }
    Ok(ln_gamma(rho) - std::f64::consts::LN_2 - rho * x.ln() - ln_k_nu(rho, 2.0 * x))
}

/// V_ρ(x) = ((2/Γ(ρ)) x^ρ K_ρ(2x))^{−1}, with V_ρ(0) = 1.
pub fn v_rho(rho: f64, x: f64) -> Result<f64> {
    ln_v_rho(rho, x).map(f64::exp)
}

/// V_ρ(x) through (Γ(1−ρ) x^ρ [I_{−ρ}(2x) − I_ρ(2x)])^{−1}; non-integer ρ,
/// moderate x.
pub fn v_rho_reflection(rho: f64, x: f64) -> Result<f64> {
    if !(rho > 0.0) || rho == rho.round() {
        return domain(format!("reflection form needs non-integer rho > 0, got {rho}"));
    }
    if !(x > 0.0) {
        return domain("reflection form needs x > 0");
    }
    let diff = i_series_signed(-rho, 2.0 * x)? - i_series(rho, 2.0 * x)?;
    Ok(1.0 / (gamma(1.0 - rho) * x.powf(rho) * diff))
}

/// Leading small-x behaviour of V_ρ.
///
/// The ρ > 1 branch is 1 + x²/(ρ−1); see `v_rho_asymptotic_as_printed` for
/// the variant with coefficient 2.
pub fn v_rho_asymptotic(rho: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if (rho - 1.0).abs() < 1e-12 {
        1.0 - 2.0 * x * x * x.ln()
    } else if rho < 1.0 {
        1.0 + x.powf(2.0 * rho) * gamma(1.0 - rho) / gamma(1.0 + rho)
    } else {
        1.0 + x * x / (rho - 1.0)
    }
}

/// The three-branch expansion with 2x²/(ρ−1) in the ρ > 1 branch.
pub fn v_rho_asymptotic_as_printed(rho: f64, x: f64) -> f64 {
    if rho > 1.0 + 1e-12 && x != 0.0 {
        1.0 + 2.0 * x * x / (rho - 1.0)
    } else {
        v_rho_asymptotic(rho, x)
    }
}

/// Area of the unit sphere S^{d−1} ⊂ R^d.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// ∫_{S^{d−1}} e^{it⟨e,ω⟩} dω = (2π)^{d/2} t^{1−d/2} J_{d/2−1}(t).
pub fn spherical_kernel(d: usize, t: f64) -> f64 {
    let t = t.abs();
    match d {
        1 => 2.0 * t.cos(),
        3 => {
            if t < 1e-4 {
                4.0 * PI * (1.0 - t * t / 6.0)
            } else {
                4.0 * PI * t.sin() / t
            }
        }
        _ => {
            if t < 1e-8 {
                return sphere_area(d);
            }
            let h = d as f64 / 2.0;
            (2.0 * PI).powf(h) * t.powf(1.0 - h) * j_nu(h - 1.0, t)
        }
    }
}

/// Ŝ_d(t) − |S^{d−1}|, accurate for small t where the difference cancels.
pub fn spherical_kernel_minus_area(d: usize, t: f64) -> f64 {
    let t = t.abs();
    let area = sphere_area(d);
    if t > 0.5 {
        return spherical_kernel(d, t) - area;
    }
    // Ŝ_d(t)/area = Σ_k (−1)^k Γ(d/2) (t/2)^{2k} / (k! Γ(k + d/2))
    let h = d as f64 / 2.0;
    let q = 0.25 * t * t;
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..30 {
        let kf = k as f64;
        term *= -q / (kf * (kf - 1.0 + h));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    area * sum
}

/// ln g(ξ) for g(ξ) = |ξ|^{−d/2} K_{d/2}(2|ξ|).
pub fn ln_levy_density(dims: Dimensions, xi: &[f64]) -> Result<f64> {
    let r = norm(xi);
    if r == 0.0 {
        return domain("Levy density is singular at the origin");
    }
    let h = dims.df() / 2.0;
    Ok(-h * r.ln() + ln_k_nu(h, 2.0 * r))
}

/// g(ξ) = |ξ|^{−(n−1)/2} K_{(n−1)/2}(2|ξ|).
pub fn levy_density(dims: Dimensions, xi: &[f64]) -> Result<f64> {
    ln_levy_density(dims, xi).map(f64::exp)
}

/// ln of (2/Γ(λ/2)) r^{(λ−d)/2} K_{(d−λ)/2}(2r); λ may be any positive value.
pub(crate) fn ln_marginal_radial(dims: Dimensions, lambda: f64, r: f64) -> f64 {
    let rho = (dims.df() - lambda) / 2.0;
    std::f64::consts::LN_2 - ln_gamma(lambda / 2.0) - rho * r.ln() + ln_k_nu(rho.abs(), 2.0 * r)
}

pub fn ln_marginal_radial_density(dims: Dimensions, lambda: f64, xi: &[f64]) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda must be positive, got {lambda}"));
    }
    let r = norm(xi);
    if r == 0.0 {
        return domain("marginal density evaluated at the origin");
    }
    Ok(ln_marginal_radial(dims, lambda, r))
}

/// (2/Γ(λ/2)) |ξ|^{(λ−n+1)/2} K_{(n−1−λ)/2}(2|ξ|), for any λ > 0.
///
/// This is the density of the marginal law with respect to π^{d/2}-scaled
/// Lebesgue measure: its integral over R^d is π^{d/2}. Use
/// [`crate::measures::mu_alpha_probability_density`] for the probability
/// density.
pub fn marginal_radial_density(dims: Dimensions, lambda: f64, xi: &[f64]) -> Result<f64> {
    ln_marginal_radial_density(dims, lambda, xi).map(f64::exp)
}

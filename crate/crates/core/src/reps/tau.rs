use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{inner_std, CurrentFunction, McEstimate, StdFunction, StdProposal};
use crate::error::{Error, Result};
use crate::quadrature::fourier::riesz_coefficient;
use crate::specfun::{gamma, sphere_area, Dimensions};

/// τφ(ξ^1, …, ξ^l) = φ(ξ^1 + … + ξ^l).
pub fn tau_embed(phi: &CurrentFunction) -> CurrentFunction {
    let phi = phi.clone();
    CurrentFunction::new(move |x| {
        let mut s = vec![0.0; x[0].len()];
        for v in x {
            for (a, b) in s.iter_mut().zip(v) {
                *a += b;
            }
        }
        phi.eval(&[s])
    })
}

/// Both sides of the isometry for f(γ) = e^{−|γ|²/2}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TauReport {
    pub n: usize,
    pub lambdas: Vec<f64>,
    /// ⟨τφ, τφ⟩ on the tensor product, by Monte Carlo over the cells.
    pub tensor_norm: McEstimate,
    /// ⟨f, f⟩ in the standard model, by Monte Carlo.
    pub standard_norm: McEstimate,
    /// Closed form (2π)^d 2^{−λ}Γ((d−λ)/2)/Γ(d/2).
    pub exact: f64,
    pub z: f64,
}

fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&v);
        if n > 0.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// The Householder reflection sending e₁ to the unit vector `u`, applied
/// to `w`.
fn align(u: &[f64], w: &[f64]) -> Vec<f64> {
    let mut h = u.to_vec();
    h[0] -= 1.0;
    let hh: f64 = h.iter().map(|x| x * x).sum();
    if hh < 1e-30 {
        return w.to_vec();
    }
    let c = 2.0 * h.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / hh;
    w.iter().zip(&h).map(|(a, b)| a - c * b).collect()
}

/// Draws w ∈ R^d from an equal mixture of |w|^{a−d} on the unit ball, the
/// same law with exponent b around e₁, and a |w|^{−d−κ} tail outside the
/// unit ball. Returns w and its density.
fn sample_w<R: Rng + ?Sized>(d: usize, a: f64, b: f64, kappa: f64, rng: &mut R) -> (Vec<f64>, f64) {
    let area = sphere_area(d);
    let df = d as f64;
    let k: u32 = rng.random_range(0..3);
    let u = unit_vector(d, rng);
    let t: f64 = rng.random();
    let w: Vec<f64> = match k {
        0 => u.iter().map(|x| x * t.powf(1.0 / a)).collect(),
        1 => {
            let r = t.powf(1.0 / b);
            let mut w: Vec<f64> = u.iter().map(|x| x * r).collect();
            w[0] += 1.0;
            w
        }
        _ => {
            let r = (1.0 - t).powf(-1.0 / kappa);
            u.iter().map(|x| x * r).collect()
        }
    };
    let r0 = norm(&w);
    let mut e = w.clone();
    e[0] -= 1.0;
    let r1 = norm(&e);
    let mut q = 0.0;
    if r0 < 1.0 {
        q += a * r0.powf(a - df) / area;
    }
    if r1 < 1.0 {
        q += b * r1.powf(b - df) / area;
    }
    if r0 > 1.0 {
        q += kappa * r0.powf(-df - kappa) / area;
    }
    (w, q / 3.0)
}

/// One draw of Π_i π^{−d/2}R_{λ_i}|ξ^i|^{λ_i−d} |φ(Σξ^i)|² over its
/// sampling density, for φ(ξ) = (2π)^{d/2}e^{−|ξ|²/2}.
fn tensor_draw<R: Rng + ?Sized>(dims: Dimensions, lambdas: &[f64], eta_law: &Gamma<f64>, rng: &mut R) -> f64 {
    let d = dims.d();
    let df = dims.df();
    let lam: f64 = lambdas.iter().sum();
    // η has density |η|^{λ−d}e^{−|η|²}/Z
    let ln_z = (0.5 * sphere_area(d) * gamma(0.5 * lam)).ln();
    let eta_r = eta_law.sample(rng).sqrt();
    let mut rest: Vec<f64> = unit_vector(d, rng).into_iter().map(|x| x * eta_r).collect();
    let mut ln_val = df * (2.0 * PI).ln() + ln_z - (lam - df) * eta_r.ln();
    let mut rest_mass = lam;
    for (i, &li) in lambdas.iter().enumerate() {
        ln_val += riesz_coefficient(dims, li).ln() - 0.5 * df * PI.ln();
        let rr = norm(&rest);
        if i + 1 == lambdas.len() {
            ln_val += (li - df) * rr.ln();
            break;
        }
        let b = rest_mass - li;
        let (w, q) = sample_w(d, li, b, df - rest_mass, rng);
        let dir: Vec<f64> = rest.iter().map(|x| x / rr).collect();
        let xi: Vec<f64> = align(&dir, &w).into_iter().map(|x| x * rr).collect();
        // ξ = |ρ| R w has density q(w)/|ρ|^d
        ln_val += (li - df) * norm(&xi).ln() - q.ln() + df * rr.ln();
        rest = rest.iter().zip(&xi).map(|(a, b)| a - b).collect();
        rest_mass = b;
    }
    ln_val.exp()
}

/// Checks ⟨τφ, τφ⟩ = ⟨f, f⟩ for f(γ) = e^{−|γ|²/2} and λ = Σλ_i, with the
/// per-cell norm coefficients π^{−d/2}·2^{−λ_i}Γ((d−λ_i)/2)/Γ(λ_i/2).
pub fn tau_isometry_check<R: Rng + ?Sized>(
    dims: Dimensions,
    lambdas: &[f64],
    samples: usize,
    rng: &mut R,
) -> Result<TauReport> {
    let df = dims.df();
    let lam: f64 = lambdas.iter().sum();
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0)) || !(lam < df) {
        return Err(Error::Domain(format!("cell masses must be positive with sum below {df}")));
    }
    if samples < 2 {
        return Err(Error::Domain("at least two samples are required".into()));
    }
    let eta_law = Gamma::new(0.5 * lam, 1.0).map_err(|e| Error::Domain(e.to_string()))?;
    let vals: Vec<f64> = (0..samples).map(|_| tensor_draw(dims, lambdas, &eta_law, rng)).collect();
    let tensor_norm = McEstimate::from_values(&vals);
    let f: StdFunction = Arc::new(|g: &[f64]| (-0.5 * g.iter().map(|x| x * x).sum::<f64>()).exp());
    let proposal = StdProposal::Gaussian { center: vec![0.0; dims.d()], sigma: 1.1 };
    let standard_norm = inner_std(dims, lam, &f, &f, &proposal, 1.6, samples, rng)?;
    let exact = (2.0 * PI).powf(df) * 2f64.powf(-lam) * gamma(0.5 * (df - lam)) / gamma(0.5 * df);
    Ok(TauReport {
        n: dims.n(),
        lambdas: lambdas.to_vec(),
        z: tensor_norm.z_against(&standard_norm),
        tensor_norm,
        standard_norm,
        exact,
    })
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rules::{adaptive, tanh_sinh, QuadratureReport, Tolerance};
use crate::error::{Error, Result};
use crate::specfun::{bessel::ln_k_nu, spherical_kernel_minus_area, Dimensions};

/// ∫_{R^d} (e^{i⟨ξ,γ⟩} − 1) g(ξ) dξ as a radial integral.
pub fn levy_khinchin_integral(dims: Dimensions, gamma_norm: f64) -> Result<QuadratureReport> {
    if gamma_norm == 0.0 {
        return Ok(QuadratureReport::zero());
    }
    let d = dims.d();
    let h = dims.df() / 2.0;
    let f = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        let g = (-h * r.ln() + ln_k_nu(h, 2.0 * r)).exp();
        spherical_kernel_minus_area(d, gamma_norm * r) * r.powi(d as i32 - 1) * g
    };
    let tol = Tolerance::new(1e-15, 1e-12);
    let head = tanh_sinh(&f, 0.0, 1.0, tol)?;
    // g decays like e^{−2r}; nothing survives past r = 30
    let tail = adaptive(&f, 1.0, 30.0, tol)?;
    Ok(head + tail)
}

/// log(1 + |γ|²/4).
pub fn levy_khinchin_lhs(gamma_norm: f64) -> f64 {
    (0.25 * gamma_norm * gamma_norm).ln_1p()
}

pub const LEVY_GRID: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// Result of fitting the single constant κ with log(1+|γ|²/4) = κ ∫(e^{i⟨ξ,γ⟩}−1)g.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevyKhinchinFit {
    pub n: usize,
    pub kappa: f64,
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl LevyKhinchinFit {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn levy_khinchin_fit(dims: Dimensions, grid: &[f64]) -> Result<LevyKhinchinFit> {
    if grid.iter().any(|&g| g <= 0.0) {
        return Err(Error::Domain("Levy-Khinchin grid needs |gamma| > 0".into()));
    }
    let rhs: Vec<f64> =
        grid.par_iter().map(|&g| levy_khinchin_integral(dims, g).map(|q| q.value)).collect::<Result<_>>()?;
    let ratios: Vec<f64> = grid.iter().zip(&rhs).map(|(&g, r)| levy_khinchin_lhs(g) / r).collect();
    let kappa = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let residuals = grid
        .iter()
        .zip(&rhs)
        .map(|(&g, r)| {
            let l = levy_khinchin_lhs(g);
            ((l - kappa * r) / l).abs()
        })
        .collect();
    Ok(LevyKhinchinFit { n: dims.n(), kappa, grid: grid.to_vec(), residuals })
}

/// |LHS − κ·RHS| / |LHS| at γ, with κ fitted on the standard grid.
pub fn levy_khinchin_residual(dims: Dimensions, gamma: &[f64]) -> Result<f64> {
    let g = gamma.iter().map(|x| x * x).sum::<f64>().sqrt();
    if g == 0.0 {
        return Err(Error::Domain("gamma must be nonzero".into()));
    }
    let fit = levy_khinchin_fit(dims, &LEVY_GRID)?;
    let r = levy_khinchin_integral(dims, g)?.value;
    let l = levy_khinchin_lhs(g);
    Ok(((l - fit.kappa * r) / l).abs())
}

/// The analytic constant −2π^{−d/2}.
pub fn levy_khinchin_kappa_analytic(dims: Dimensions) -> f64 {
    -2.0 * std::f64::consts::PI.powf(-dims.df() / 2.0)
}

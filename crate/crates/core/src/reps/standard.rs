use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{act, cocycle_beta, GroupElement};
use crate::specfun::{ln_gamma, sphere_area, Dimensions};

/// A real function on R^{n−1}.
pub type StdFunction = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// T^λ_g f(γ) = f(γḡ) β(γ,g)^{1−n+λ/2}. Points sent to infinity give 0,
/// which is the right value for compactly supported f.
pub fn t_std_apply(dims: Dimensions, lambda: f64, g: &GroupElement, f: StdFunction) -> StdFunction {
    let g = g.clone();
    let p = 1.0 - dims.n() as f64 + 0.5 * lambda;
    Arc::new(move |gamma: &[f64]| match (act(gamma, &g), cocycle_beta(gamma, &g)) {
        (Ok(y), Ok(b)) => f(&y) * b.powf(p),
        _ => 0.0,
    })
}

/// Sampling law for the first point γ′ of the double integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StdProposal {
    Gaussian { center: Vec<f64>, sigma: f64 },
    /// Uniform on the box [lo, hi].
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub se: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn from_values(v: &[f64]) -> Self {
        let (value, se) = crate::process::mean_and_se(v);
        Self { value, se, samples: v.len() }
    }

    /// |a − b| in units of the combined standard error.
    pub fn z_against(&self, other: &McEstimate) -> f64 {
        (self.value - other.value).abs() / (self.se * self.se + other.se * other.se).sqrt().max(1e-300)
    }

    pub fn z_against_exact(&self, exact: f64) -> f64 {
        (self.value - exact).abs() / self.se.max(1e-300)
    }
}

/// ⟨f₁, f₂⟩ = ∫∫ |γ′−γ″|^{−λ} f₁(γ′) f₂(γ″) dγ′ dγ″ by importance sampling:
/// γ′ from `proposal`, h = γ″ − γ′ from the density ∝ |h|^{−λ} e^{−|h|²/(2s²)}
/// with s = `h_scale`.
#[allow(clippy::too_many_arguments)]
pub fn inner_std<R: Rng + ?Sized>(
    dims: Dimensions,
    lambda: f64,
    f1: &StdFunction,
    f2: &StdFunction,
    proposal: &StdProposal,
    h_scale: f64,
    samples: usize,
    rng: &mut R,
) -> Result<McEstimate> {
    let d = dims.d();
    let df = dims.df();
    if !(lambda > 0.0 && lambda < df) {
        return Err(Error::Domain(format!("lambda must lie in (0, {df})")));
    }
    if !(h_scale > 0.0) || samples < 2 {
        return Err(Error::Domain("h_scale must be positive and samples >= 2".into()));
    }
    let shape = 0.5 * (df - lambda);
    let gam = Gamma::new(shape, 1.0).map_err(|e| Error::Domain(e.to_string()))?;
    // normalizer of |h|^{−λ} e^{−|h|²/(2s²)}
    let ln_zq = sphere_area(d).ln() + shape * (2.0 * h_scale * h_scale).ln() + ln_gamma(shape) - std::f64::consts::LN_2;
    let mut vals = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (g1, ln_p) = match proposal {
            StdProposal::Gaussian { center, sigma } => {
                let z: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
                let q: f64 = z.iter().map(|v| v * v).sum();
                let ln_p = -0.5 * q - df * (sigma.ln() + 0.5 * (2.0 * std::f64::consts::PI).ln());
                (center.iter().zip(&z).map(|(c, v)| c + sigma * v).collect::<Vec<f64>>(), ln_p)
            }
            StdProposal::Box { lo, hi } => {
                let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
                (lo.iter().zip(hi).map(|(a, b)| rng.random_range(*a..*b)).collect(), -vol.ln())
            }
        };
        let a = f1(&g1);
        if a == 0.0 {
            vals.push(0.0);
            // keep the stream aligned
            let _: f64 = gam.sample(rng);
            for _ in 0..d {
                let _: f64 = StandardNormal.sample(rng);
            }
            continue;
        }
        let t: f64 = gam.sample(rng);
        let r = h_scale * (2.0 * t).sqrt();
        let dir: Vec<f64> = {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        };
        let g2: Vec<f64> = g1.iter().zip(&dir).map(|(a, u)| a + r * u).collect();
        let b = f2(&g2);
        vals.push(a * b * (ln_zq + 0.5 * r * r / (h_scale * h_scale) - ln_p).exp());
    }
    Ok(McEstimate::from_values(&vals))
}

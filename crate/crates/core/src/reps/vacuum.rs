use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{t_comm_apply, CellGrid, CurrentFunction, Involution};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::quadrature::fourier::{radial_fourier, riesz_coefficient, RadialProfile};
use crate::specfun::{bessel::ln_k_nu, gamma, Dimensions};

/// f_λ(ξ) = (|ξ|^ρ K_ρ(2|ξ|))^{1/2} with ρ = (n−1−λ)/2; λ = 0 gives f₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumVector {
    pub dims: Dimensions,
    pub lambda: f64,
}

impl VacuumVector {
    fn rho(&self) -> f64 {
        0.5 * (self.dims.df() - self.lambda)
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let rho = self.rho();
        if r == 0.0 {
            return (0.5 * gamma(rho)).sqrt();
        }
        (0.5 * (rho * r.ln() + ln_k_nu(rho, 2.0 * r))).exp()
    }

    pub fn function(&self) -> CurrentFunction {
        let v = *self;
        CurrentFunction::single(move |x| v.eval(x))
    }
}

pub fn vacuum(dims: Dimensions, lambda: f64) -> Result<VacuumVector> {
    if !(lambda >= 0.0 && lambda < dims.df()) {
        return Err(Error::Domain(format!("lambda must lie in [0, {})", dims.df())));
    }
    Ok(VacuumVector { dims, lambda })
}

/// Matrix-coefficient checks for the vacuum vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VacuumReport {
    pub n: usize,
    pub lambda: f64,
    /// ∫|ξ|^{λ−d} f_λ² dξ by quadrature.
    pub integral: f64,
    /// (2π)^d Γ(λ/2)/(2c_n).
    pub integral_closed_form: f64,
    /// Γ(λ/2)/(2c_n), the value without the (2π)^d factor.
    pub integral_without_2pi: f64,
    /// ‖f_λ‖² with the norm coefficient 2^{−λ}Γ((d−λ)/2)/Γ(λ/2).
    pub norm2: f64,
    /// (|γ|, ⟨T_z f, f⟩/‖f‖², (1+|γ|²/4)^{−λ/2}).
    pub ratios: Vec<(f64, f64, f64)>,
    pub max_ratio_residual: f64,
    pub integral_residual: f64,
}

/// Checks ⟨T_{z(γ)} f_λ, f_λ⟩ = ‖f_λ‖² (1+|γ|²/4)^{−λ/2} on the given |γ|
/// values, and the closed form of ‖f_λ‖² for the given c_n.
pub fn vacuum_checks(dims: Dimensions, lambda: f64, c_n: f64, gammas: &[f64]) -> Result<VacuumReport> {
    if !(lambda > 0.0 && lambda < dims.df()) {
        return Err(Error::Domain(format!("lambda must lie in (0, {})", dims.df())));
    }
    let rho = 0.5 * (dims.df() - lambda);
    // |ξ|^{λ−d} f_λ² = |ξ|^{−ρ} K_ρ(2|ξ|)
    let profile = RadialProfile::new(-2.0 * rho, move |r| (-rho * r.ln() + ln_k_nu(rho, 2.0 * r)).exp());
    let integral = radial_fourier(dims, &profile, 0.0)?.value;
    let mut ratios = Vec::with_capacity(gammas.len());
    let mut worst = 0.0f64;
    for &g in gammas {
        let v = if g == 0.0 { integral } else { radial_fourier(dims, &profile, g)?.value };
        let ratio = v / integral;
        let target = (1.0 + 0.25 * g * g).powf(-0.5 * lambda);
        worst = worst.max((ratio - target).abs() / target);
        ratios.push((g, ratio, target));
    }
    let closed = (2.0 * PI).powf(dims.df()) * gamma(0.5 * lambda) / (2.0 * c_n);
    Ok(VacuumReport {
        n: dims.n(),
        lambda,
        integral,
        integral_closed_form: closed,
        integral_without_2pi: gamma(0.5 * lambda) / (2.0 * c_n),
        norm2: riesz_coefficient(dims, lambda) * integral,
        ratios,
        max_ratio_residual: worst,
        integral_residual: (integral - closed).abs() / closed,
    })
}

/// T⁰_g φ for the special representation (λ = 0).
pub fn special_t_apply(
    dims: Dimensions,
    g: &GroupElement,
    phi: &CurrentFunction,
    involution: Option<&Involution>,
) -> Result<CurrentFunction> {
    t_comm_apply(dims, 0.0, g, phi, involution)
}

/// The cocycle b(g) = T⁰_g f₀ − f₀ tabulated on a cell grid. Words with an
/// s-letter need the λ = 0 involution.
pub fn special_cocycle(
    dims: Dimensions,
    g: &GroupElement,
    nodes: &CellGrid,
    involution: Option<&Involution>,
) -> Result<Vec<Complex64>> {
    let f0 = vacuum(dims, 0.0)?.function();
    let tf = special_t_apply(dims, g, &f0, involution)?;
    Ok(nodes.points.iter().map(|p| tf.eval(std::slice::from_ref(p)) - f0.eval(std::slice::from_ref(p))).collect())
}

//! Representation operators of O(n,1) and of the current group on the
//! finite-level spaces L²(ν_α).
//!
//! Conventions. In the commutative model T^λ acts by e^{−i⟨ξ,γ⟩} for z(γ),
//! by |ε|^{λ/2}φ(εξu) for d(ε,u), and by (2π)^{−d}∫A^λ(ξ,ξ′)φ(ξ′)dξ′ for s.
//! The current-group operators U_g on L²(ν_α) are the mirror images
//! U_g = P T_g P with Pφ(ξ) = φ(−ξ): U_z multiplies by e^{+i⟨ξ,γ⟩}, and U_d
//! and U_s = I have the same form as T_d and T_s.

mod commutative;
mod grid;
mod spherical;
mod standard;
mod tau;
mod vacuum;

use std::sync::Arc;

use num_complex::Complex64;

pub use commutative::{
    comm_norm, involution_apply, kernel_value, lift_function, r_transform, t_comm_apply, u_current_apply,
    u_letter_apply, Involution, Letter1,
};
pub use grid::{CellGrid, GridFunction, ProductGrid};
pub use spherical::{spherical_reproduce, SphericalReport};
pub use standard::{inner_std, t_std_apply, McEstimate, StdFunction, StdProposal};
pub use tau::{tau_embed, tau_isometry_check, TauReport};
pub use vacuum::{special_cocycle, special_t_apply, vacuum, vacuum_checks, VacuumReport, VacuumVector};

/// Residual allowed where an identity holds exactly up to rounding.
pub const EXACT_TOL: f64 = 1e-10;
/// Residual allowed for one level of quadrature.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Residual allowed when the s-kernel is discretized.
pub const KERNEL_TOL: f64 = 1e-3;
/// Monte Carlo agreement is judged in standard errors.
pub const MC_SIGMAS: f64 = 3.0;

type Evaluator = dyn Fn(&[Vec<f64>]) -> Complex64 + Send + Sync;

/// A complex function of the per-cell vectors (ξ^1, …, ξ^l).
#[derive(Clone)]
pub struct CurrentFunction {
    f: Arc<Evaluator>,
}

impl std::fmt::Debug for CurrentFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("CurrentFunction")
    }
}

impl CurrentFunction {
    pub fn new(f: impl Fn(&[Vec<f64>]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    /// A real function of a single vector, for one-cell partitions.
    pub fn single(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |x| Complex64::new(f(&x[0]), 0.0))
    }

    pub fn eval(&self, x: &[Vec<f64>]) -> Complex64 {
        (self.f)(x)
    }

    /// Π_i e^{−|ξ^i − c_i|²/(2σ²)}, real and even when all c_i vanish.
    pub fn gaussian(centers: Vec<Vec<f64>>, sigma: f64) -> Self {
        Self::new(move |x| {
            let q: f64 = x
                .iter()
                .zip(&centers)
                .map(|(v, c)| v.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .sum();
            Complex64::new((-0.5 * q / (sigma * sigma)).exp(), 0.0)
        })
    }

    /// Sum of two functions.
    pub fn add(&self, other: &CurrentFunction) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |x| a.eval(x) + b.eval(x))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let a = self.clone();
        Self::new(move |x| c * a.eval(x))
    }
}

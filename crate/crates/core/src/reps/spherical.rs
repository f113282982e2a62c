use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{
    big_psi, ln_rn_derivative, nu_alpha_normalized_density, rn_derivative, CellVector, MarginalVector, Partition,
};
use crate::process::{mean_and_se, sample_marginal};
use crate::quadrature::fourier::{radial_integral, RadialProfile};
use crate::specfun::Dimensions;

/// ⟨U_{z(γ)} v^{−1/2}, v^{−1/2}⟩ on L²(ν_α) against Ψ(γ).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphericalReport {
    pub n: usize,
    pub masses: Vec<f64>,
    pub gamma: CellVector,
    pub estimate: Complex64,
    pub re_se: f64,
    pub im_se: f64,
    pub psi: f64,
    pub z: f64,
    pub samples: usize,
    /// ‖v^{−1/2}‖² = ∫ v^{−1} dν_α by radial quadrature, when every cell
    /// mass is below n−1 so that ν_α exists.
    pub vacuum_norm2: Option<f64>,
}

/// Monte Carlo over μ_α: each draw contributes e^{i⟨ξ,γ⟩} v^{−1/2}v^{−1/2}
/// dν_α/dμ_α. Cells with λ ≥ n−1 have no ν and contribute e^{i⟨ξ,γ⟩} alone.
pub fn spherical_reproduce<R: Rng + ?Sized>(
    dims: Dimensions,
    partition: &Partition,
    gamma: &CellVector,
    samples: usize,
    rng: &mut R,
) -> Result<SphericalReport> {
    gamma.check(dims, partition)?;
    let has_nu = partition.check_nu(dims).is_ok();
    let mut re = Vec::with_capacity(samples);
    let mut im = Vec::with_capacity(samples);
    for _ in 0..samples {
        let xi = sample_marginal(dims, partition, rng)?;
        let w = if has_nu {
            let l = ln_rn_derivative(dims, partition, &xi)?;
            (-0.5 * l - 0.5 * l + l).exp()
        } else {
            1.0
        };
        let ph = xi.pairing(gamma);
        re.push(w * ph.cos());
        im.push(w * ph.sin());
    }
    let (mr, sr) = mean_and_se(&re);
    let (mi, si) = mean_and_se(&im);
    let psi = big_psi(partition, gamma);
    let z = if samples > 1 {
        ((mr - psi).abs() / sr.max(1e-300)).max(mi.abs() / si.max(1e-300))
    } else {
        0.0
    };
    let vacuum_norm2 = if has_nu { Some(vacuum_norm2(dims, partition)?) } else { None };
    Ok(SphericalReport {
        n: dims.n(),
        masses: partition.masses().to_vec(),
        gamma: gamma.clone(),
        estimate: Complex64::new(mr, mi),
        re_se: sr,
        im_se: si,
        psi,
        z,
        samples,
        vacuum_norm2,
    })
}

/// Π over cells of ∫ v_i^{−1} dν_{λ_i}, each a radial integral.
fn vacuum_norm2(dims: Dimensions, partition: &Partition) -> Result<f64> {
    let mut acc = 1.0;
    for &l in partition.masses() {
        let cell = Partition::new(vec![l])?;
        let f = move |r: f64| {
            let mut x = vec![0.0; dims.d()];
            x[0] = r;
            let xi = MarginalVector(vec![x]);
            match (nu_alpha_normalized_density(dims, &cell, &xi), rn_derivative(dims, &cell, &xi)) {
                (Ok(a), Ok(b)) if b > 0.0 => a / b,
                _ => 0.0,
            }
        };
        let profile = RadialProfile::new(l - dims.df(), f);
        acc *= radial_integral(dims, &profile)?.value;
    }
    Ok(acc)
}

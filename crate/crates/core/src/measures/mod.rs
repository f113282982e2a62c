//! Finite-dimensional projections of the measures μ and ν.
//!
//! X is modelled as [0, m(X)] with Lebesgue mass; a partition lays its cells
//! out left to right. Every formula depends only on the cell masses λ_i.
//!
//! Two density conventions are exposed. The `*_density` functions follow the
//! closed forms with the 2/Γ(λ/2) and 2^{−λ}Γ((d−λ)/2)/Γ(λ/2) prefactors;
//! each cell factor of the μ density integrates to π^{d/2}. The
//! `mu_alpha_probability_density` and `nu_alpha_normalized_density` variants
//! carry an extra π^{−d/2} per cell, which makes μ_α a probability measure and
//! gives ν_α the Fourier transform Π|γ^i|^{−λ_i}. The ratio dν_α/dμ_α is the
//! same in both conventions.

use std::f64::consts::{LN_2, PI};
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{sample_marginal, EmpiricalCharacteristic, PointConfiguration};
use crate::specfun::{ln_gamma, ln_v_rho, Dimensions};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A finite partition of X into cells of positive mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Partition {
    masses: Vec<f64>,
}

impl Partition {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::Domain("a partition needs at least one cell".into()));
        }
        if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::Domain(format!("cell masses must be positive, got {m}")));
        }
        Ok(Self { masses })
    }

    /// `cells` cells of equal mass.
    pub fn uniform(total_mass: f64, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Domain("a partition needs at least one cell".into()));
        }
        Self::new(vec![total_mass / cells as f64; cells])
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn max_mass(&self) -> f64 {
        self.masses.iter().cloned().fold(0.0, f64::max)
    }

    /// The extra condition λ_i < n − 1 needed wherever ν appears.
    pub fn check_nu(&self, dims: Dimensions) -> Result<()> {
        match self.masses.iter().find(|&&m| m >= dims.df()) {
            Some(m) => Err(Error::Domain(format!("cell mass {m} must be below n-1 = {}", dims.df()))),
            None => Ok(()),
        }
    }

    /// Index of the cell containing x; x = m(X) belongs to the last cell.
    pub fn cell_of(&self, x: f64) -> usize {
        let mut acc = 0.0;
        for (i, m) in self.masses.iter().enumerate() {
            acc += m;
            if x < acc {
                return i;
            }
        }
        self.masses.len() - 1
    }
}

impl TryFrom<Vec<f64>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<f64> {
    fn from(p: Partition) -> Vec<f64> {
        p.masses
    }
}

/// Parses comma-separated masses such as `0.5,0.5`.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let masses = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Config(format!("bad mass '{t}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(masses)
    }
}

/// Per-cell test vectors γ^i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellVector(pub Vec<Vec<f64>>);

/// Per-cell points ξ^i of the dual space; ⟨ξ, γ⟩ = Σ⟨ξ^i, γ^i⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalVector(pub Vec<Vec<f64>>);

fn check_cells(dims: Dimensions, partition: &Partition, v: &[Vec<f64>], what: &str) -> Result<()> {
    if v.len() != partition.len() {
        return Err(Error::Domain(format!("{what} has {} cells, partition has {}", v.len(), partition.len())));
    }
    if v.iter().any(|c| c.len() != dims.d()) {
        return Err(Error::Domain(format!("{what} entries must have length n-1 = {}", dims.d())));
    }
    Ok(())
}

impl CellVector {
    /// The same γ on every cell.
    pub fn constant(partition: &Partition, gamma: &[f64]) -> Self {
        Self(vec![gamma.to_vec(); partition.len()])
    }

    pub fn check(&self, dims: Dimensions, partition: &Partition) -> Result<()> {
        check_cells(dims, partition, &self.0, "cell vector")
    }
}

impl MarginalVector {
    pub fn check(&self, dims: Dimensions, partition: &Partition) -> Result<()> {
        check_cells(dims, partition, &self.0, "marginal vector")
    }

    pub fn pairing(&self, gamma: &CellVector) -> f64 {
        self.0.iter().zip(&gamma.0).map(|(a, b)| dot(a, b)).sum()
    }
}

/// β refining α: child cell j lies inside parent cell `assignment[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub parent: Partition,
    pub child: Partition,
    pub assignment: Vec<usize>,
}

impl Refinement {
    /// Child cells must appear in parent order and conserve each parent mass.
    pub fn new(parent: Partition, child: Partition, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != child.len() {
            return Err(Error::Domain("assignment must list a parent for every child cell".into()));
        }
        if assignment.windows(2).any(|w| w[1] < w[0]) || assignment.iter().any(|&a| a >= parent.len()) {
            return Err(Error::Domain("child cells must be laid out in parent order".into()));
        }
        let mut sums = vec![0.0; parent.len()];
        for (j, &a) in assignment.iter().enumerate() {
            sums[a] += child.masses[j];
        }
        for (s, m) in sums.iter().zip(&parent.masses) {
            if (s - m).abs() > 1e-12 * m.max(1.0) {
                return Err(Error::Domain(format!("child masses sum to {s}, parent cell has {m}")));
            }
        }
        Ok(Self { parent, child, assignment })
    }

    /// Splits every parent cell into pieces proportional to `fractions`.
    pub fn split(parent: &Partition, fractions: &[f64]) -> Result<Self> {
        let total: f64 = fractions.iter().sum();
        let mut masses = Vec::new();
        let mut assignment = Vec::new();
        for (i, m) in parent.masses.iter().enumerate() {
            for f in fractions {
                masses.push(m * f / total);
                assignment.push(i);
            }
        }
        Self::new(parent.clone(), Partition::new(masses)?, assignment)
    }

    pub fn identity(p: &Partition) -> Self {
        Self { parent: p.clone(), child: p.clone(), assignment: (0..p.len()).collect() }
    }

    /// γ constant on α-cells, seen as a function on β-cells.
    pub fn lift(&self, gamma: &CellVector) -> CellVector {
        CellVector(self.assignment.iter().map(|&a| gamma.0[a].clone()).collect())
    }

    /// Sums the β-cell vectors inside each α-cell.
    pub fn project(&self, xi: &MarginalVector) -> MarginalVector {
        let d = xi.0.first().map_or(0, |v| v.len());
        let mut out = vec![vec![0.0; d]; self.parent.len()];
        for (j, &a) in self.assignment.iter().enumerate() {
            for (o, v) in out[a].iter_mut().zip(&xi.0[j]) {
                *o += v;
            }
        }
        MarginalVector(out)
    }

    /// α ≤ β ≤ δ gives α ≤ δ.
    pub fn then(&self, next: &Refinement) -> Result<Refinement> {
        if next.parent != self.child {
            return Err(Error::Domain("refinements do not chain".into()));
        }
        let assignment = next.assignment.iter().map(|&j| self.assignment[j]).collect();
        Refinement::new(self.parent.clone(), next.child.clone(), assignment)
    }
}

/// l(γ) = (1 + |γ|²/4)^{−1/2}.
pub fn char_l(gamma: &[f64]) -> f64 {
    (1.0 + 0.25 * dot(gamma, gamma)).powf(-0.5)
}

/// ln Ψ(γ) = −½ Σ λ_i log(1 + |γ^i|²/4).
pub fn ln_big_psi(partition: &Partition, gamma: &CellVector) -> f64 {
    partition.masses.iter().zip(&gamma.0).map(|(l, g)| -0.5 * l * (0.25 * dot(g, g)).ln_1p()).sum()
}

/// Ψ(γ) = Π (1 + |γ^i|²/4)^{−λ_i/2}.
pub fn big_psi(partition: &Partition, gamma: &CellVector) -> f64 {
    ln_big_psi(partition, gamma).exp()
}

pub fn ln_mu_alpha_density(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    xi.check(dims, partition)?;
    let mut acc = 0.0;
    for (l, x) in partition.masses.iter().zip(&xi.0) {
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::Domain("mu density evaluated with a zero cell vector".into()));
        }
        acc += crate::specfun::ln_marginal_radial(dims, *l, r);
    }
    Ok(acc)
}

/// Π_k (2/Γ(λ_k/2)) |ξ^k|^{(λ_k−d)/2} K_{(d−λ_k)/2}(2|ξ^k|).
pub fn mu_alpha_density(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    ln_mu_alpha_density(dims, partition, xi).map(f64::exp)
}

/// [`mu_alpha_density`] times π^{−d/2} per cell: the probability density of μ_α.
pub fn mu_alpha_probability_density(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    let shift = -0.5 * dims.df() * PI.ln() * partition.len() as f64;
    ln_mu_alpha_density(dims, partition, xi).map(|v| (v + shift).exp())
}

/// ln of 2^{−λ}Γ((d−λ)/2)/Γ(λ/2).
fn ln_nu_coefficient(dims: Dimensions, lambda: f64) -> f64 {
    -lambda * LN_2 + ln_gamma((dims.df() - lambda) / 2.0) - ln_gamma(lambda / 2.0)
}

pub fn ln_nu_alpha_density(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    partition.check_nu(dims)?;
    xi.check(dims, partition)?;
    let mut acc = 0.0;
    for (l, x) in partition.masses.iter().zip(&xi.0) {
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::Domain("nu density evaluated with a zero cell vector".into()));
        }
        acc += ln_nu_coefficient(dims, *l) + (l - dims.df()) * r.ln();
    }
    Ok(acc)
}

/// Π_i 2^{−λ_i}Γ((d−λ_i)/2)/Γ(λ_i/2) |ξ^i|^{λ_i−d}.
pub fn nu_alpha_density(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    ln_nu_alpha_density(dims, partition, xi).map(f64::exp)
}

/// [`nu_alpha_density`] times π^{−d/2} per cell.
pub fn nu_alpha_normalized_density(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    let shift = -0.5 * dims.df() * PI.ln() * partition.len() as f64;
    ln_nu_alpha_density(dims, partition, xi).map(|v| (v + shift).exp())
}

/// ln dν_α/dμ_α = −m(X) ln 2 + Σ ln V_{(d−λ_k)/2}(|ξ^k|).
pub fn ln_rn_derivative(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    partition.check_nu(dims)?;
    xi.check(dims, partition)?;
    let mut acc = -partition.total_mass() * LN_2;
    for (l, x) in partition.masses.iter().zip(&xi.0) {
        acc += ln_v_rho((dims.df() - l) / 2.0, norm(x))?;
    }
    Ok(acc)
}

pub fn rn_derivative(dims: Dimensions, partition: &Partition, xi: &MarginalVector) -> Result<f64> {
    ln_rn_derivative(dims, partition, xi).map(f64::exp)
}

/// ln v(ξ) = −m(X) ln 2 + Σ ln V_{d/2}(|c^i|).
pub fn ln_density_v(dims: Dimensions, config: &PointConfiguration, total_mass: f64) -> Result<f64> {
    if !(total_mass > 0.0) {
        return Err(Error::Domain("total mass must be positive".into()));
    }
    let rho = dims.df() / 2.0;
    let mut acc = -total_mass * LN_2;
    for r in config.norms() {
        acc += ln_v_rho(rho, r)?;
    }
    Ok(acc)
}

/// v(Σc^iδ_{x_i}) = 2^{−m(X)} Π V_{d/2}(|c^i|). For n = 2 this is
/// 2^{−m(X)} e^{2Σ|c^i|}.
pub fn density_v(dims: Dimensions, config: &PointConfiguration, total_mass: f64) -> Result<f64> {
    ln_density_v(dims, config, total_mass).map(f64::exp)
}

/// Partial sums of ln v over the first k atoms, k = 0..=len.
pub fn density_v_partial_logs(dims: Dimensions, config: &PointConfiguration, total_mass: f64) -> Result<Vec<f64>> {
    let rho = dims.df() / 2.0;
    let mut acc = -total_mass * LN_2;
    let mut out = vec![acc];
    for r in config.norms() {
        acc += ln_v_rho(rho, r)?;
        out.push(acc);
    }
    Ok(out)
}

/// ln rn_derivative on uniform partitions of [0, m(X)] into `cells[k]` cells,
/// for the projections of `config`. As the cells shrink these approach
/// [`ln_density_v`].
pub fn refinement_sequence(
    dims: Dimensions,
    config: &PointConfiguration,
    total_mass: f64,
    cells: &[usize],
) -> Result<Vec<f64>> {
    cells
        .iter()
        .map(|&k| {
            let p = Partition::uniform(total_mass, k)?;
            let xi = crate::process::project_config(dims, config, &p);
            ln_rn_derivative(dims, &p, &xi)
        })
        .collect()
}

/// Richardson extrapolation of values computed with cell masses halving at
/// each step; the error is a power series in the cell mass.
pub fn extrapolate_halving(seq: &[f64]) -> f64 {
    let mut t = seq.to_vec();
    let mut pow = 2.0;
    while t.len() > 1 {
        t = t.windows(2).map(|w| (pow * w[1] - w[0]) / (pow - 1.0)).collect();
        pow *= 2.0;
    }
    t.first().copied().unwrap_or(f64::NAN)
}

/// ν̂_α(γ) = Π |γ^i|^{−λ_i}.
pub fn nu_char(partition: &Partition, gamma: &CellVector) -> Result<f64> {
    let mut acc = 0.0;
    for (l, g) in partition.masses.iter().zip(&gamma.0) {
        let r = norm(g);
        if r == 0.0 {
            return Err(Error::Domain("nu characteristic needs nonzero cell vectors".into()));
        }
        acc -= l * r.ln();
    }
    Ok(acc.exp())
}

/// Outcome of a coherence check for one refinement and one test vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoherenceReport {
    /// |ν̂_β(lift γ) − ν̂_α(γ)| / ν̂_α(γ).
    pub nu_residual: f64,
    /// |Ψ_β(lift γ) − Ψ_α(γ)|.
    pub psi_residual: f64,
    /// Deviation, in standard errors, of the empirical characteristic
    /// function of projected μ_β samples from Ψ_α(γ).
    pub mu_z_score: f64,
    pub samples: usize,
}

/// Checks that ν̂ and Ψ are unchanged by refinement, and that μ_β samples
/// summed over α-cells follow μ_α.
pub fn check_coherence<R: Rng + ?Sized>(
    dims: Dimensions,
    refinement: &Refinement,
    gamma: &CellVector,
    samples: usize,
    rng: &mut R,
) -> Result<CoherenceReport> {
    gamma.check(dims, &refinement.parent)?;
    let lifted = refinement.lift(gamma);
    let nu_a = nu_char(&refinement.parent, gamma)?;
    let nu_b = nu_char(&refinement.child, &lifted)?;
    let psi_a = big_psi(&refinement.parent, gamma);
    let psi_b = big_psi(&refinement.child, &lifted);
    let mut phases = Vec::with_capacity(samples);
    for _ in 0..samples {
        let xi = sample_marginal(dims, &refinement.child, rng)?;
        phases.push(refinement.project(&xi).pairing(gamma));
    }
    let ec = EmpiricalCharacteristic::from_phases(&phases);
    Ok(CoherenceReport {
        nu_residual: (nu_b - nu_a).abs() / nu_a,
        psi_residual: (psi_b - psi_a).abs(),
        mu_z_score: ec.z_score(psi_a),
        samples,
    })
}

/// Smallest eigenvalue of the Gram matrix [l(γ_i − γ_j)].
pub fn char_l_gram_min_eigenvalue(points: &[Vec<f64>]) -> f64 {
    let k = points.len();
    let g = DMatrix::from_fn(k, k, |i, j| {
        let diff: Vec<f64> = points[i].iter().zip(&points[j]).map(|(a, b)| a - b).collect();
        char_l(&diff)
    });
    g.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

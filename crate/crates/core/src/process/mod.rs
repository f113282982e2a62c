//! Samplers for the gamma-type measure: exact finite-dimensional marginals,
//! the jump-level Lévy process, and the n = 2 gamma-difference oracle.

mod stats;

use std::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{MarginalVector, Partition};
use crate::quadrature::rules::{adaptive, tanh_sinh, Tolerance};
use crate::specfun::{bessel::ln_k_nu, sphere_area, Dimensions};

pub use stats::{ks_statistic, ks_two_sample, mean_and_se, EmpiricalCharacteristic};

/// Deterministic random stream: ChaCha20 keyed by `seed`, on stream `stream_id`.
#[derive(Debug, Clone)]
pub struct SeededStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// An independent stream with the same seed.
    pub fn fork(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }
}

impl RngCore for SeededStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    if d == 1 {
        return vec![if rng.random_bool(0.5) { 1.0 } else { -1.0 }];
    }
    loop {
        let v = gaussian_vector(d, rng);
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// One cell: W ~ Gamma(λ/2, 1), then ξ ~ N(0, (W/2)·I).
pub fn sample_cell<R: Rng + ?Sized>(dims: Dimensions, lambda: f64, rng: &mut R) -> Result<Vec<f64>> {
    sample_cell_mixture(dims, lambda, rng).map(|(_, xi)| xi)
}

/// Like [`sample_cell`] but also returns the mixing variable W.
pub fn sample_cell_mixture<R: Rng + ?Sized>(dims: Dimensions, lambda: f64, rng: &mut R) -> Result<(f64, Vec<f64>)> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("cell mass must be positive, got {lambda}")));
    }
    let w: f64 = Gamma::new(0.5 * lambda, 1.0).map_err(|e| Error::Domain(e.to_string()))?.sample(rng);
    let s = (0.5 * w).sqrt();
    Ok((w, gaussian_vector(dims.d(), rng).into_iter().map(|x| s * x).collect()))
}

/// A draw from μ_α: independent cells with the Bessel-K marginal law.
pub fn sample_marginal<R: Rng + ?Sized>(dims: Dimensions, partition: &Partition, rng: &mut R) -> Result<MarginalVector> {
    partition
        .masses()
        .iter()
        .map(|&l| sample_cell(dims, l, rng))
        .collect::<Result<Vec<_>>>()
        .map(MarginalVector)
}

/// n = 2 oracle: the difference of two independent Gamma(λ/2, scale 1/2)
/// variables, whose characteristic function is (1+γ²/4)^{−λ/2}.
pub fn oracle_n2<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<f64> {
    let g = Gamma::new(0.5 * lambda, 0.5).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(g.sample(rng) - g.sample(rng))
}

/// A jump (x, c) of the process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub c: Vec<f64>,
}

/// A finite sum Σ c^i δ_{x_i} of vector point masses on [0, m(X)].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub atoms: Vec<Atom>,
    /// Expected total |c|-mass of the jumps discarded below the cutoff.
    pub truncation_bound: f64,
}

impl PointConfiguration {
    pub fn new(atoms: Vec<Atom>, truncation_bound: f64) -> Result<Self> {
        if !(truncation_bound >= 0.0) {
            return Err(Error::Domain("truncation_bound must be non-negative".into()));
        }
        let mut xs: Vec<f64> = atoms.iter().map(|a| a.x).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("atom locations must be distinct".into()));
        }
        Ok(Self { atoms, truncation_bound })
    }

    pub fn empty() -> Self {
        Self { atoms: Vec::new(), truncation_bound: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// |c(x)| at each atom, the orbit invariant of pointwise rotations.
    pub fn norms(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect()
    }

    /// Σ |c^i|.
    pub fn total_variation(&self) -> f64 {
        self.norms().iter().sum()
    }

    /// ⟨ξ, γ⟩ for a function γ on X.
    pub fn pairing(&self, gamma: impl Fn(f64) -> Vec<f64>) -> f64 {
        self.atoms.iter().map(|a| gamma(a.x).iter().zip(&a.c).map(|(g, c)| g * c).sum::<f64>()).sum()
    }
}

/// ξ^i = Σ_{x_j ∈ X_i} c^j, with cells laid out left to right on [0, m(X)].
pub fn project_config(dims: Dimensions, config: &PointConfiguration, partition: &Partition) -> MarginalVector {
    let mut out = vec![vec![0.0; dims.d()]; partition.len()];
    for a in &config.atoms {
        let i = partition.cell_of(a.x);
        for (o, c) in out[i].iter_mut().zip(&a.c) {
            *o += c;
        }
    }
    MarginalVector(out)
}

/// c^i ↦ c^i u(x_i).
pub fn rotate_config(config: &PointConfiguration, u: impl Fn(f64) -> nalgebra::DMatrix<f64>) -> PointConfiguration {
    let atoms = config
        .atoms
        .iter()
        .map(|a| {
            let m = u(a.x);
            let c = (0..a.c.len()).map(|j| (0..a.c.len()).map(|i| a.c[i] * m[(i, j)]).sum()).collect();
            Atom { x: a.x, c }
        })
        .collect();
    PointConfiguration { atoms, truncation_bound: config.truncation_bound }
}

/// c^i ↦ ε(x_i) c^i.
pub fn scale_config(config: &PointConfiguration, eps: impl Fn(f64) -> f64) -> PointConfiguration {
    let mut bound_scale = 0.0f64;
    let atoms = config
        .atoms
        .iter()
        .map(|a| {
            let e = eps(a.x);
            bound_scale = bound_scale.max(e.abs());
            Atom { x: a.x, c: a.c.iter().map(|c| e * c).collect() }
        })
        .collect();
    PointConfiguration { atoms, truncation_bound: config.truncation_bound * bound_scale.max(1.0) }
}

/// Jump intensity per unit mass, π^{−d/2} g(ξ) dξ with
/// g(ξ) = |ξ|^{−d/2} K_{d/2}(2|ξ|). Equal to −κ/2 for the fitted
/// Lévy–Khinchin constant κ.
pub fn default_intensity_scale(dims: Dimensions) -> f64 {
    PI.powf(-dims.df() / 2.0)
}

/// Settings for [`sample_process`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessConfig {
    pub total_mass: f64,
    pub cutoff_eps: f64,
    /// Multiplier of g(ξ)dξ in the jump intensity.
    pub intensity_scale: f64,
}

impl ProcessConfig {
    pub fn new(dims: Dimensions, total_mass: f64, cutoff_eps: f64) -> Self {
        Self { total_mass, cutoff_eps, intensity_scale: default_intensity_scale(dims) }
    }
}

/// Jump radii come from inverting the tail Λ(r) = ∫_{|ξ|>r} intensity,
/// tabulated on a log grid and interpolated in (log r, log Λ).
#[derive(Debug, Clone)]
pub struct JumpTable {
    dims: Dimensions,
    cfg: ProcessConfig,
    log_r: Vec<f64>,
    log_tail: Vec<f64>,
    truncation_bound: f64,
}

const R_MAX: f64 = 25.0;
const TABLE_POINTS: usize = 3000;

/// Radial intensity s^{d−1}|S^{d−1}| g(s), without the scale.
fn radial_intensity(dims: Dimensions, s: f64) -> f64 {
    let h = dims.df() / 2.0;
    sphere_area(dims.d()) * ((dims.df() - 1.0 - h) * s.ln() + ln_k_nu(h, 2.0 * s)).exp()
}

impl JumpTable {
    pub fn new(dims: Dimensions, cfg: ProcessConfig) -> Result<Self> {
        if !(cfg.cutoff_eps > 0.0 && cfg.cutoff_eps < R_MAX) {
            return Err(Error::Domain(format!("cutoff_eps must lie in (0, {R_MAX})")));
        }
        if !(cfg.total_mass > 0.0 && cfg.intensity_scale > 0.0) {
            return Err(Error::Domain("total_mass and intensity_scale must be positive".into()));
        }
        let tol = Tolerance::new(1e-16, 1e-12);
        let lo = cfg.cutoff_eps.ln();
        let hi = R_MAX.ln();
        let log_r: Vec<f64> =
            (0..TABLE_POINTS).map(|i| lo + (hi - lo) * i as f64 / (TABLE_POINTS - 1) as f64).collect();
        // integrate in t = log s so the 1/s behaviour near 0 is flat
        let f = |t: f64| {
            let s = t.exp();
            s * radial_intensity(dims, s)
        };
        let mut tail = vec![0.0; TABLE_POINTS];
        // beyond R_MAX the intensity is below e^{−50}
        tail[TABLE_POINTS - 1] = 1e-300;
        for i in (0..TABLE_POINTS - 1).rev() {
            tail[i] = tail[i + 1] + adaptive(&f, log_r[i], log_r[i + 1], tol)?.value;
        }
        let log_tail = tail.iter().map(|v| (v * cfg.intensity_scale).ln()).collect();
        let small = |s: f64| s * radial_intensity(dims, s);
        let truncation_bound =
            cfg.total_mass * cfg.intensity_scale * tanh_sinh(&small, 0.0, cfg.cutoff_eps, tol)?.value;
        Ok(Self { dims, cfg, log_r, log_tail, truncation_bound })
    }

    /// Expected number of retained jumps per unit mass.
    pub fn rate(&self) -> f64 {
        self.log_tail[0].exp()
    }

    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }

    /// Radius r with Λ(r) = Λ(ε)·u, 0 < u ≤ 1.
    fn invert(&self, u: f64) -> f64 {
        let target = self.log_tail[0] + u.ln();
        // log_tail is decreasing
        let k = self.log_tail.partition_point(|&v| v > target);
        if k == 0 {
            return self.log_r[0].exp();
        }
        if k >= self.log_tail.len() {
            return R_MAX;
        }
        let (a, b) = (self.log_tail[k - 1], self.log_tail[k]);
        let w = (a - target) / (a - b);
        (self.log_r[k - 1] + w * (self.log_r[k] - self.log_r[k - 1])).exp()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PointConfiguration> {
        let mean = self.cfg.total_mass * self.rate();
        let count = if mean > 0.0 {
            let p = Poisson::new(mean).map_err(|e| Error::Domain(e.to_string()))?;
            p.sample(rng) as usize
        } else {
            0
        };
        let mut atoms: Vec<Atom> = (0..count)
            .map(|_| {
                let e: f64 = Exp1.sample(rng);
                let r = self.invert((-e).exp());
                let dir = unit_vector(self.dims.d(), rng);
                let x = rng.random_range(0.0..self.cfg.total_mass);
                Atom { x, c: dir.into_iter().map(|v| r * v).collect() }
            })
            .collect();
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        // ties have probability zero; redraw if one ever occurs
        for i in 1..atoms.len() {
            while atoms[i].x <= atoms[i - 1].x {
                atoms[i].x = rng.random_range(atoms[i - 1].x..self.cfg.total_mass);
            }
        }
        Ok(PointConfiguration { atoms, truncation_bound: self.truncation_bound })
    }
}

/// One path of the jump process over [0, total_mass], keeping jumps with
/// |ξ| ≥ cutoff_eps. Builds a fresh [`JumpTable`]; reuse one when sampling
/// many paths.
pub fn sample_process<R: Rng + ?Sized>(dims: Dimensions, cfg: ProcessConfig, rng: &mut R) -> Result<PointConfiguration> {
    JumpTable::new(dims, cfg)?.sample(rng)
}

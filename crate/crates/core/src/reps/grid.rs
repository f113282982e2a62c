use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CurrentFunction;
use crate::error::{Error, Result};
use crate::measures::{nu_alpha_normalized_density, MarginalVector, Partition};
use crate::quadrature::gauss_legendre;
use crate::specfun::Dimensions;

/// Quadrature nodes in R^d with Lebesgue weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellGrid {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

/// Radial nodes r = R t^p on Gauss–Legendre t ∈ (0,1); the power p
/// clusters nodes near the origin, where the ν weights are singular.
fn radial_nodes(n: usize, radius: f64, power: f64) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(n);
    t.iter()
        .zip(&w)
        .map(|(&t, &w)| {
            let u = 0.5 * (t + 1.0);
            (radius * u.powf(power), 0.5 * w * radius * power * u.powf(power - 1.0))
        })
        .unzip()
}

impl CellGrid {
    /// Symmetric 1-d grid with `n_half` nodes on each side of the origin.
    pub fn line(n_half: usize, radius: f64, power: f64) -> Self {
        let (r, w) = radial_nodes(n_half, radius, power);
        let mut points = Vec::with_capacity(2 * n_half);
        let mut weights = Vec::with_capacity(2 * n_half);
        for (ri, wi) in r.iter().rev().zip(w.iter().rev()) {
            points.push(vec![-ri]);
            weights.push(*wi);
        }
        for (ri, wi) in r.iter().zip(&w) {
            points.push(vec![*ri]);
            weights.push(*wi);
        }
        Self { points, weights }
    }

    /// Polar grid in the plane: Gauss radial nodes times equispaced angles.
    pub fn polar(n_radial: usize, n_angle: usize, radius: f64, power: f64) -> Self {
        let (r, w) = radial_nodes(n_radial, radius, power);
        let mut points = Vec::with_capacity(n_radial * n_angle);
        let mut weights = Vec::with_capacity(n_radial * n_angle);
        let dth = 2.0 * PI / n_angle as f64;
        for (ri, wi) in r.iter().zip(&w) {
            for m in 0..n_angle {
                let th = dth * (m as f64 + 0.5);
                points.push(vec![ri * th.cos(), ri * th.sin()]);
                weights.push(wi * ri * dth);
            }
        }
        Self { points, weights }
    }

    /// The default desk-scale grid: 64 nodes for d = 1, 32×32 polar for d = 2.
    pub fn standard(dims: Dimensions, radius: f64, power: f64) -> Result<Self> {
        match dims.d() {
            1 => Ok(Self::line(32, radius, power)),
            2 => Ok(Self::polar(32, 32, radius, power)),
            d => Err(Error::Domain(format!("grids are provided for n <= 3 only (d = {d})"))),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Tensor product of per-cell grids; node k has multi-index in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductGrid {
    pub cells: Vec<CellGrid>,
}

impl ProductGrid {
    pub fn new(cells: Vec<CellGrid>) -> Self {
        Self { cells }
    }

    /// The same grid on every cell of the partition.
    pub fn uniform(partition: &Partition, cell: CellGrid) -> Self {
        Self { cells: vec![cell; partition.len()] }
    }

    pub fn len(&self) -> usize {
        self.cells.iter().map(|c| c.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi_index(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.cells.len()];
        for (i, c) in self.cells.iter().enumerate().rev() {
            idx[i] = k % c.len();
            k /= c.len();
        }
        idx
    }

    pub fn point(&self, k: usize) -> Vec<Vec<f64>> {
        self.multi_index(k).iter().zip(&self.cells).map(|(&j, c)| c.points[j].clone()).collect()
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.multi_index(k).iter().zip(&self.cells).map(|(&j, c)| c.weights[j]).product()
    }

    /// Lebesgue weight times the normalized ν_α density at every node.
    pub fn nu_weights(&self, dims: Dimensions, partition: &Partition) -> Result<Vec<f64>> {
        (0..self.len())
            .map(|k| Ok(self.weight(k) * nu_alpha_normalized_density(dims, partition, &MarginalVector(self.point(k)))?))
            .collect()
    }
}

/// Values of a function at the nodes of a product grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub partition: Partition,
    pub grid: Arc<ProductGrid>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn tabulate(partition: &Partition, grid: Arc<ProductGrid>, f: &CurrentFunction) -> Self {
        let values = (0..grid.len()).map(|k| f.eval(&grid.point(k))).collect();
        Self { partition: partition.clone(), grid, values }
    }

    pub fn zeros(partition: &Partition, grid: Arc<ProductGrid>) -> Self {
        let n = grid.len();
        Self { partition: partition.clone(), grid, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// ∫|φ|² dν_α by node quadrature.
    pub fn nu_norm2(&self, dims: Dimensions) -> Result<f64> {
        let w = self.grid.nu_weights(dims, &self.partition)?;
        Ok(w.iter().zip(&self.values).map(|(w, v)| w * v.norm_sqr()).sum())
    }

    /// ∫ φ ψ̄ dν_α by node quadrature.
    pub fn nu_inner(&self, dims: Dimensions, other: &GridFunction) -> Result<Complex64> {
        let w = self.grid.nu_weights(dims, &self.partition)?;
        Ok(w.iter().zip(self.values.iter().zip(&other.values)).map(|(w, (a, b))| a * b.conj() * *w).sum())
    }

    /// ‖φ − ψ‖ / ‖ψ‖ in L²(ν_α).
    pub fn relative_distance(&self, dims: Dimensions, reference: &GridFunction) -> Result<f64> {
        let w = self.grid.nu_weights(dims, &self.partition)?;
        let (mut num, mut den) = (0.0, 0.0);
        for ((w, a), b) in w.iter().zip(&self.values).zip(&reference.values) {
            num += w * (a - b).norm_sqr();
            den += w * b.norm_sqr();
        }
        Ok((num / den).sqrt())
    }

    /// Largest |φ(−ξ) − conj φ(ξ)| over nodes whose mirror image is also a node.
    pub fn conjugation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.grid.len() {
            let p = self.grid.point(k);
            let neg: Vec<Vec<f64>> = p.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
            if let Some(j) = self.grid_index_of(&neg) {
                worst = worst.max((self.values[j] - self.values[k].conj()).norm());
            }
        }
        worst
    }

    fn grid_index_of(&self, p: &[Vec<f64>]) -> Option<usize> {
        let mut k = 0;
        for (c, v) in self.grid.cells.iter().zip(p) {
            let j = c.points.iter().position(|q| q.iter().zip(v).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs())))?;
            k = k * c.len() + j;
        }
        Some(k)
    }
}

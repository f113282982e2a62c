use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{CurrentFunction, GridFunction, ProductGrid};
use crate::error::{Error, Result};
use crate::group::{factor_word, GroupElement, Letter, TriangularElement};
use crate::measures::{CellVector, Partition, Refinement};
use crate::quadrature::fourier::riesz_coefficient;
use crate::quadrature::{kernel_a, kernel_a_closed_n2};
use crate::specfun::Dimensions;

fn row_times(xi: &[f64], u: &DMatrix<f64>) -> Vec<f64> {
    (0..xi.len()).map(|j| (0..xi.len()).map(|i| xi[i] * u[(i, j)]).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A^λ(ξ, ξ′): Bessel closed form for n = 2 and 0 < λ < 1, oscillatory
/// quadrature otherwise.
pub fn kernel_value(dims: Dimensions, lambda: f64, xi: &[f64], xi_prime: &[f64]) -> Result<f64> {
    if dims.n() == 2 && lambda > 0.0 && lambda < 1.0 {
        kernel_a_closed_n2(lambda, xi[0], xi_prime[0])
    } else {
        kernel_a(dims, lambda, xi, xi_prime).map(|q| q.value)
    }
}

/// The s-operator discretized on a product grid: per cell, the matrix
/// (2π)^{−d} A^{λ_c}(ξ_i, ξ_j) w_j.
#[derive(Debug, Clone)]
pub struct Involution {
    dims: Dimensions,
    lambdas: Vec<f64>,
    grid: Arc<ProductGrid>,
    matrices: Vec<DMatrix<f64>>,
}

impl Involution {
    /// Current-group involution I on L²(ν_α).
    pub fn new(dims: Dimensions, partition: &Partition, grid: Arc<ProductGrid>) -> Result<Self> {
        partition.check_nu(dims)?;
        Self::with_lambdas(dims, partition.masses().to_vec(), grid)
    }

    /// One kernel per entry of `lambdas`, which may include 0.
    pub fn with_lambdas(dims: Dimensions, lambdas: Vec<f64>, grid: Arc<ProductGrid>) -> Result<Self> {
        if lambdas.len() != grid.cells.len() {
            return Err(Error::Domain("one grid per cell is required".into()));
        }
        let norm = (2.0 * PI).powf(-dims.df());
        let matrices = lambdas
            .iter()
            .zip(&grid.cells)
            .map(|(&lambda, cell)| {
                let n = cell.len();
                let entries: Vec<f64> = (0..n * n)
                    .into_par_iter()
                    .map(|k| {
                        let (i, j) = (k / n, k % n);
                        kernel_value(dims, lambda, &cell.points[i], &cell.points[j]).map(|a| norm * a * cell.weights[j])
                    })
                    .collect::<Result<_>>()?;
                Ok(DMatrix::from_row_slice(n, n, &entries))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dims, lambdas, grid, matrices })
    }

    pub fn grid(&self) -> &Arc<ProductGrid> {
        &self.grid
    }

    /// Applies the operator to node values, returning node values.
    pub fn apply_values(&self, values: &[Complex64]) -> Vec<Complex64> {
        let sizes: Vec<usize> = self.grid.cells.iter().map(|c| c.len()).collect();
        let mut cur = values.to_vec();
        for (axis, m) in self.matrices.iter().enumerate() {
            let inner: usize = sizes[axis + 1..].iter().product();
            let outer: usize = sizes[..axis].iter().product();
            let n = sizes[axis];
            let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
            for o in 0..outer {
                for i in 0..n {
                    for r in 0..inner {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for j in 0..n {
                            acc += cur[(o * n + j) * inner + r] * m[(i, j)];
                        }
                        next[(o * n + i) * inner + r] = acc;
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn apply_grid(&self, f: &GridFunction) -> GridFunction {
        GridFunction { partition: f.partition.clone(), grid: f.grid.clone(), values: self.apply_values(&f.values) }
    }

    /// An evaluator for the operator applied to the given node values; each
    /// evaluation costs one kernel row per cell.
    pub fn evaluator(&self, values: Vec<Complex64>) -> CurrentFunction {
        let dims = self.dims;
        let lambdas = self.lambdas.clone();
        let grid = self.grid.clone();
        let norm = (2.0 * PI).powf(-dims.df());
        CurrentFunction::new(move |x| {
            let rows: Vec<Vec<f64>> = lambdas
                .iter()
                .zip(&grid.cells)
                .zip(x)
                .map(|((&lambda, cell), xi)| {
                    cell.points
                        .iter()
                        .zip(&cell.weights)
                        .map(|(p, w)| kernel_value(dims, lambda, xi, p).map_or(f64::NAN, |a| norm * a * w))
                        .collect()
                })
                .collect();
            (0..grid.len())
                .map(|k| {
                    let idx = grid.multi_index(k);
                    let w: f64 = idx.iter().zip(&rows).map(|(&j, r)| r[j]).product();
                    values[k] * w
                })
                .sum()
        })
    }

    /// The operator applied to an arbitrary function through its node values.
    pub fn apply(&self, f: &CurrentFunction) -> CurrentFunction {
        let values = (0..self.grid.len()).map(|k| f.eval(&self.grid.point(k))).collect();
        self.evaluator(values)
    }
}

/// I f for f given on a grid: node values of the discretized kernel operator.
pub fn involution_apply(dims: Dimensions, partition: &Partition, f: &GridFunction) -> Result<GridFunction> {
    Ok(Involution::new(dims, partition, f.grid.clone())?.apply_grid(f))
}

/// U_b f(ξ) = Π_i |ε_i|^{λ_i/2} e^{i⟨ξ^i,γ^i⟩} f(ε_1ξ^1u_1, …, ε_lξ^lu_l)
/// for b = (ε_i, u_i, γ_i) constant on the cells.
pub fn u_current_apply(
    dims: Dimensions,
    partition: &Partition,
    b: &[TriangularElement],
    f: &CurrentFunction,
) -> Result<CurrentFunction> {
    if b.len() != partition.len() {
        return Err(Error::Domain("one triangular element per cell is required".into()));
    }
    if b.iter().any(|t| t.gamma.len() != dims.d()) {
        return Err(Error::Domain("triangular elements must act on R^(n-1)".into()));
    }
    let b = b.to_vec();
    let lambdas = partition.masses().to_vec();
    let f = f.clone();
    Ok(CurrentFunction::new(move |x| {
        let mut log_amp = 0.0;
        let mut phase = 0.0;
        let moved: Vec<Vec<f64>> = b
            .iter()
            .zip(&lambdas)
            .zip(x)
            .map(|((t, l), xi)| {
                log_amp += 0.5 * l * t.epsilon.abs().ln();
                phase += dot(xi, &t.gamma);
                row_times(xi, &t.u).into_iter().map(|v| t.epsilon * v).collect()
            })
            .collect();
        f.eval(&moved) * Complex64::from_polar(log_amp.exp(), phase)
    }))
}

/// One current-group letter applied on a grid: triangular letters act
/// exactly, s through the discretized involution.
#[derive(Debug, Clone)]
pub enum Letter1 {
    B(Vec<TriangularElement>),
    S,
}

/// Applies U for a word of letters, rightmost first.
pub fn u_letter_apply(
    dims: Dimensions,
    partition: &Partition,
    word: &[Letter1],
    involution: &Involution,
    f: &CurrentFunction,
) -> Result<CurrentFunction> {
    let mut cur = f.clone();
    for l in word.iter().rev() {
        cur = match l {
            Letter1::B(b) => u_current_apply(dims, partition, b, &cur)?,
            Letter1::S => involution.apply(&cur),
        };
    }
    Ok(cur)
}

/// T^λ_g φ in the commutative model, for any g through its factorization
/// over B ∪ {s}. The s-letters use `involution`, which must carry the single
/// mass λ.
pub fn t_comm_apply(
    dims: Dimensions,
    lambda: f64,
    g: &GroupElement,
    phi: &CurrentFunction,
    involution: Option<&Involution>,
) -> Result<CurrentFunction> {
    if g.n() != dims.n() {
        return Err(Error::Domain("group element and dimensions disagree".into()));
    }
    let word = factor_word(g)?;
    let mut cur = phi.clone();
    for l in word.letters.iter().rev() {
        cur = match l {
            Letter::B(t) => {
                let t = t.clone();
                let f = cur.clone();
                CurrentFunction::new(move |x| {
                    let xi = &x[0];
                    let moved: Vec<f64> = row_times(xi, &t.u).into_iter().map(|v| t.epsilon * v).collect();
                    f.eval(&[moved]) * Complex64::from_polar(t.epsilon.abs().powf(0.5 * lambda), -dot(xi, &t.gamma))
                })
            }
            Letter::S => match involution {
                Some(inv) => inv.apply(&cur),
                None => return Err(Error::Domain("an s-letter needs a discretized involution".into())),
            },
        };
    }
    Ok(cur)
}

/// ‖φ‖² = 2^{−λ}Γ((d−λ)/2)/Γ(λ/2) ∫|ξ|^{λ−d}|φ|² dξ on a one-cell grid; for
/// λ = 0 the coefficient is 1.
pub fn comm_norm(dims: Dimensions, lambda: f64, phi: &GridFunction) -> Result<f64> {
    if phi.grid.cells.len() != 1 {
        return Err(Error::Domain("comm_norm takes one-cell grid functions".into()));
    }
    if !(lambda >= 0.0 && lambda < dims.df()) {
        return Err(Error::Domain(format!("lambda must lie in [0, {})", dims.df())));
    }
    let cell = &phi.grid.cells[0];
    let coef = if lambda == 0.0 { 1.0 } else { riesz_coefficient(dims, lambda) };
    let s: f64 = cell
        .points
        .iter()
        .zip(&cell.weights)
        .zip(&phi.values)
        .map(|((p, w), v)| w * dot(p, p).sqrt().powf(lambda - dims.df()) * v.norm_sqr())
        .sum();
    Ok(coef * s)
}

/// f on α-cells seen on β-cells: (Lf)(ξ_β) = f(Σ of ξ_β over each α-cell).
pub fn lift_function(refinement: &Refinement, f: &CurrentFunction) -> CurrentFunction {
    let r = refinement.clone();
    let f = f.clone();
    CurrentFunction::new(move |x| f.eval(&r.project(&crate::measures::MarginalVector(x.to_vec())).0))
}

/// R f(γ) = ∫ f(ξ) e^{i⟨ξ,γ⟩} dν_α(ξ) by node quadrature.
pub fn r_transform(dims: Dimensions, f: &GridFunction, gamma: &CellVector) -> Result<Complex64> {
    gamma.check(dims, &f.partition)?;
    let w = f.grid.nu_weights(dims, &f.partition)?;
    Ok((0..f.grid.len())
        .map(|k| {
            let p = f.grid.point(k);
            let ph: f64 = p.iter().zip(&gamma.0).map(|(a, b)| dot(a, b)).sum();
            f.values[k] * Complex64::from_polar(w[k], ph)
        })
        .sum())
}

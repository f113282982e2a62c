//! O(n,1) realized as (n+1)×(n+1) matrices g with g s gᵀ = s, acting on
//! R^{n−1} from the right through the light-cone chart
//! γ ↦ (−|γ|²/2, γ, 1).
//!
//! Blocks are indexed by rows/columns {0}, {1..n−1}, {n}: g₁₁ is the top-left
//! scalar, g₂₂ the central (n−1)×(n−1) block, and so on.

mod factor;
mod random;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::specfun::Dimensions;

pub use factor::{factor_word, GroupWord, Letter};
pub use random::{random_element, random_orthogonal, random_word};

/// Relative tolerance for membership and triangularity tests.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// An element of O(n,1).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    m: DMatrix<f64>,
}

/// The matrix s swapping the first and last coordinates.
pub fn s_matrix(dims: Dimensions) -> DMatrix<f64> {
    let k = dims.n() + 1;
    let mut m = DMatrix::identity(k, k);
    m[(0, 0)] = 0.0;
    m[(k - 1, k - 1)] = 0.0;
    m[(0, k - 1)] = 1.0;
    m[(k - 1, 0)] = 1.0;
    m
}

impl GroupElement {
    /// Wraps a matrix after checking g s gᵀ = s.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let g = Self::from_matrix_unchecked(m)?;
        let r = g.membership_residual();
        if r > MEMBERSHIP_TOL {
            return Err(Error::NonMember(r));
        }
        Ok(g)
    }

    /// Wraps a square matrix of size ≥ 3 without the membership check.
    pub fn from_matrix_unchecked(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 3 {
            return Err(Error::Domain("group elements are square matrices of order n+1 >= 3".into()));
        }
        Ok(Self { m })
    }

    pub fn identity(dims: Dimensions) -> Self {
        let k = dims.n() + 1;
        Self { m: DMatrix::identity(k, k) }
    }

    pub fn s(dims: Dimensions) -> Self {
        Self { m: s_matrix(dims) }
    }

    /// z(γ): rows (1,0,0), (−γᵀ, e, 0), (−|γ|²/2, γ, 1).
    pub fn z(gamma: &[f64]) -> Self {
        let d = gamma.len();
        let k = d + 2;
        let mut m = DMatrix::identity(k, k);
        for (i, &g) in gamma.iter().enumerate() {
            m[(1 + i, 0)] = -g;
            m[(k - 1, 1 + i)] = g;
        }
        m[(k - 1, 0)] = -0.5 * norm2(gamma);
        Self { m }
    }

    /// diag(ε⁻¹, u, ε).
    pub fn d(epsilon: f64, u: &DMatrix<f64>) -> Result<Self> {
        if epsilon == 0.0 || !epsilon.is_finite() {
            return Err(Error::Domain("epsilon must be a nonzero real".into()));
        }
        let dd = u.nrows();
        if u.ncols() != dd || dd == 0 {
            return Err(Error::Domain("u must be square".into()));
        }
        let r = (u * u.transpose() - DMatrix::identity(dd, dd)).abs().max();
        if r > MEMBERSHIP_TOL {
            return Err(Error::Domain(format!("u is not orthogonal (residual {r:e})")));
        }
        let k = dd + 2;
        let mut m = DMatrix::zeros(k, k);
        m[(0, 0)] = 1.0 / epsilon;
        m[(k - 1, k - 1)] = epsilon;
        m.view_mut((1, 1), (dd, dd)).copy_from(u);
        Ok(Self { m })
    }

    /// diag(−2/|γ|², u_γ, −|γ|²/2) with u_γ = e − 2γᵀγ/|γ|², the reflection
    /// across the hyperplane orthogonal to γ.
    pub fn d_of_gamma(gamma: &[f64]) -> Result<Self> {
        let q = norm2(gamma);
        if q == 0.0 {
            return Err(Error::Domain("d(gamma) needs gamma != 0".into()));
        }
        let dd = gamma.len();
        let mut u = DMatrix::identity(dd, dd);
        for i in 0..dd {
            for j in 0..dd {
                u[(i, j)] -= 2.0 * gamma[i] * gamma[j] / q;
            }
        }
        Self::d(-0.5 * q, &u)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.nrows() - 1
    }

    pub fn dims(&self) -> Dimensions {
        Dimensions::new(self.n()).expect("order >= 3")
    }

    /// Order n+1 of the matrix minus one, i.e. the last block index.
    fn last(&self) -> usize {
        self.m.nrows() - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { m: &self.m * &other.m }
    }

    /// g⁻¹ = s gᵀ s.
    pub fn inverse(&self) -> Self {
        let s = s_matrix(self.dims());
        Self { m: &s * self.m.transpose() * &s }
    }

    /// max |g s gᵀ − s| / max(1, max|g|)².
    pub fn membership_residual(&self) -> f64 {
        let s = s_matrix(self.dims());
        let r = (&self.m * &s * self.m.transpose() - &s).abs().max();
        let scale = self.m.abs().max().max(1.0);
        r / (scale * scale)
    }

    /// Residuals of the six block relations implied by g s gᵀ = s, each
    /// scaled like [`Self::membership_residual`].
    pub fn block_relation_residuals(&self) -> [f64; 6] {
        let k = self.last();
        let g = &self.m;
        let row = |i: usize| g.row(i).clone_owned();
        let form = |a: &nalgebra::RowDVector<f64>, b: &nalgebra::RowDVector<f64>| {
            a[0] * b[k] + a[k] * b[0] + (1..k).map(|j| a[j] * b[j]).sum::<f64>()
        };
        let scale = g.abs().max().max(1.0).powi(2);
        let r0 = row(0);
        let rk = row(k);
        let mut mid_mid = 0.0f64;
        let mut first_mid = 0.0f64;
        let mut last_mid = 0.0f64;
        for i in 1..k {
            let ri = row(i);
            first_mid = first_mid.max(form(&r0, &ri).abs());
            last_mid = last_mid.max(form(&rk, &ri).abs());
            for j in 1..k {
                let want = if i == j { 1.0 } else { 0.0 };
                mid_mid = mid_mid.max((form(&ri, &row(j)) - want).abs());
            }
        }
        [
            form(&r0, &r0).abs() / scale,
            (form(&r0, &rk) - 1.0).abs() / scale,
            form(&rk, &rk).abs() / scale,
            first_mid / scale,
            last_mid / scale,
            mid_mid / scale,
        ]
    }

    /// True when g lies in the block lower-triangular subgroup B = Z·D.
    pub fn is_triangular(&self) -> bool {
        let scale = self.m.abs().max().max(1.0);
        self.m[(0, self.last())].abs() <= MEMBERSHIP_TOL * scale
    }

    /// The spherical function |(g₁₁ + g₃₃ − g₁₃ − g₃₁)/2|^{−λ/2}.
    pub fn spherical_function(&self, lambda: f64) -> f64 {
        let k = self.last();
        let g = &self.m;
        (0.5 * (g[(0, 0)] + g[(k, k)] - g[(0, k)] - g[(k, 0)])).abs().powf(-0.5 * lambda)
    }

    /// Row-major entries.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.m.nrows()).map(|i| self.m.row(i).iter().cloned().collect()).collect()
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Domain("matrix rows must all have length n+1".into()));
        }
        Self::from_matrix(DMatrix::from_fn(k, k, |i, j| rows[i][j]))
    }

    /// (D, N) with p·g = (…, N, D) for p = (−|γ|²/2, γ, 1).
    fn projective(&self, gamma: &[f64]) -> Result<(f64, Vec<f64>)> {
        let k = self.last();
        if gamma.len() != k - 1 {
            return Err(Error::Domain(format!("point must have length {}, got {}", k - 1, gamma.len())));
        }
        let h = -0.5 * norm2(gamma);
        let g = &self.m;
        let col = |j: usize| h * g[(0, j)] + (0..k - 1).map(|i| gamma[i] * g[(1 + i, j)]).sum::<f64>() + g[(k, j)];
        let den = col(k);
        let num = (1..k).map(col).collect();
        Ok((den, num))
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        GroupElement::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, o: &GroupElement) -> GroupElement {
        GroupElement::mul(self, o)
    }
}

fn singular(den: f64, scale: f64) -> bool {
    den.abs() <= 1e-14 * scale.max(1.0)
}

/// γḡ = N/D.
pub fn act(gamma: &[f64], g: &GroupElement) -> Result<Vec<f64>> {
    let (den, num) = g.projective(gamma)?;
    let scale = g.m.abs().max() * (1.0 + norm2(gamma));
    if singular(den, scale) {
        return Err(Error::PointAtInfinity(den));
    }
    Ok(num.into_iter().map(|x| x / den).collect())
}

/// β(γ, g) = |−(|γ|²/2)g₁₃ + γg₂₃ + g₃₃|.
pub fn cocycle_beta(gamma: &[f64], g: &GroupElement) -> Result<f64> {
    let (den, _) = g.projective(gamma)?;
    let scale = g.m.abs().max() * (1.0 + norm2(gamma));
    if singular(den, scale) {
        return Err(Error::PointAtInfinity(den));
    }
    Ok(den.abs())
}

/// Which block column the multiplicative cocycle is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BetaVariant {
    /// Last block column (g₁₃, g₂₃, g₃₃): the denominator of the action.
    Denominator,
    /// Middle block column (g₁₂, g₂₂, g₃₂), taking the Euclidean length of
    /// the resulting vector.
    MiddleColumn,
}

pub fn cocycle_beta_variant(gamma: &[f64], g: &GroupElement, variant: BetaVariant) -> Result<f64> {
    match variant {
        BetaVariant::Denominator => cocycle_beta(gamma, g),
        BetaVariant::MiddleColumn => {
            let (_, num) = g.projective(gamma)?;
            Ok(norm2(&num).sqrt())
        }
    }
}

/// The inversion jγ = −2γ/|γ|².
pub fn inversion(gamma: &[f64]) -> Result<Vec<f64>> {
    let q = norm2(gamma);
    if q == 0.0 {
        return Err(Error::PointAtInfinity(0.0));
    }
    Ok(gamma.iter().map(|x| -2.0 * x / q).collect())
}

/// The point of R^{n−1} that g sends to infinity, if any.
pub fn preimage_of_infinity(g: &GroupElement) -> Option<Vec<f64>> {
    // the image of infinity under g⁻¹, read from the first row of g⁻¹
    let h = g.inverse();
    let k = h.last();
    let den = h.m[(0, k)];
    if den.abs() < 1e-14 * h.m.abs().max() {
        return None;
    }
    Some((1..k).map(|j| h.m[(0, j)] / den).collect())
}

/// Triple (ε, u, γ) standing for z(γ)·d(ε, u) ∈ B.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularElement {
    pub epsilon: f64,
    pub u: DMatrix<f64>,
    pub gamma: Vec<f64>,
}

impl TriangularElement {
    pub fn new(epsilon: f64, u: DMatrix<f64>, gamma: Vec<f64>) -> Result<Self> {
        if epsilon == 0.0 || !epsilon.is_finite() {
            return Err(Error::Domain("epsilon must be nonzero".into()));
        }
        let dd = gamma.len();
        if u.nrows() != dd || u.ncols() != dd {
            return Err(Error::Domain("u and gamma sizes disagree".into()));
        }
        let r = (&u * u.transpose() - DMatrix::identity(dd, dd)).abs().max();
        if r > MEMBERSHIP_TOL {
            return Err(Error::Domain(format!("u is not orthogonal (residual {r:e})")));
        }
        Ok(Self { epsilon, u, gamma })
    }

    pub fn identity(dims: Dimensions) -> Self {
        Self { epsilon: 1.0, u: DMatrix::identity(dims.d(), dims.d()), gamma: vec![0.0; dims.d()] }
    }

    pub fn translation(gamma: Vec<f64>) -> Self {
        let dd = gamma.len();
        Self { epsilon: 1.0, u: DMatrix::identity(dd, dd), gamma }
    }

    pub fn dilation(epsilon: f64, u: DMatrix<f64>) -> Result<Self> {
        let dd = u.nrows();
        Self::new(epsilon, u, vec![0.0; dd])
    }

    pub fn to_element(&self) -> GroupElement {
        let d = GroupElement::d(self.epsilon, &self.u).expect("validated on construction");
        GroupElement::z(&self.gamma).mul(&d)
    }

    /// Decomposes a member of B; None when g is not block lower-triangular.
    pub fn from_element(g: &GroupElement) -> Option<Self> {
        if !g.is_triangular() {
            return None;
        }
        let k = g.last();
        let dd = k - 1;
        let epsilon = g.m[(k, k)];
        let u = g.m.view((1, 1), (dd, dd)).clone_owned();
        let b32: Vec<f64> = (1..k).map(|j| g.m[(k, j)]).collect();
        let gamma = (0..dd).map(|i| (0..dd).map(|j| b32[j] * u[(i, j)]).sum()).collect();
        Some(Self { epsilon, u, gamma })
    }

    /// (ε₁,u₁,γ₁)(ε₂,u₂,γ₂) = (ε₁ε₂, u₁u₂, γ₁ + ε₁γ₂u₁⁻¹).
    pub fn compose(&self, o: &Self) -> Self {
        let dd = self.gamma.len();
        let gamma = (0..dd)
            .map(|j| self.gamma[j] + self.epsilon * (0..dd).map(|i| o.gamma[i] * self.u[(j, i)]).sum::<f64>())
            .collect();
        Self { epsilon: self.epsilon * o.epsilon, u: &self.u * &o.u, gamma }
    }
}

/// Relative residuals of the Jacobian law |det ∂(γḡ)/∂γ| = β^{1−n}(γ, g)
/// (by Richardson-extrapolated central differences) and of the distance law
/// |x−y|² = |xḡ−yḡ|² β(x,g) β(y,g).
pub fn measure_relation_check(g: &GroupElement, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let dd = x.len();
    let bx = cocycle_beta(x, g)?;
    let by = cocycle_beta(y, g)?;
    let jac = |h: f64| -> Result<DMatrix<f64>> {
        let mut j = DMatrix::zeros(dd, dd);
        for c in 0..dd {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[c] += h;
            m[c] -= h;
            let fp = act(&p, g)?;
            let fm = act(&m, g)?;
            for r in 0..dd {
                j[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        Ok(j)
    };
    let h = 1e-3 * (1.0 + norm2(x).sqrt()).min(10.0) * bx.min(1.0);
    let j1 = jac(h)?;
    let j2 = jac(0.5 * h)?;
    let j = (&j2 * 4.0 - j1) / 3.0;
    let det = j.determinant().abs();
    let want = bx.powf(-(dd as f64));
    let r1 = (det - want).abs() / want;
    let xg = act(x, g)?;
    let yg = act(y, g)?;
    let lhs = norm2(&x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>());
    let rhs = norm2(&xg.iter().zip(&yg).map(|(a, b)| a - b).collect::<Vec<_>>()) * bx * by;
    let r2 = (lhs - rhs).abs() / lhs;
    Ok((r1, r2))
}

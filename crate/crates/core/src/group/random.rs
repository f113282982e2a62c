use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::GroupElement;
use crate::specfun::Dimensions;

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal absorbed into Q.
pub fn random_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Random letters z(γ), d(ε,u) or s, with γ standard normal,
/// log|ε| uniform on [−1,1] and a random sign, u Haar.
pub fn random_word<R: Rng + ?Sized>(dims: Dimensions, len: usize, rng: &mut R) -> Vec<GroupElement> {
    let dd = dims.d();
    (0..len)
        .map(|_| match rng.random_range(0..3) {
            0 => {
                let g: Vec<f64> = (0..dd).map(|_| StandardNormal.sample(rng)).collect();
                GroupElement::z(&g)
            }
            1 => {
                let mag = rng.random_range(-1.0f64..=1.0).exp();
                let eps = if rng.random_bool(0.5) { mag } else { -mag };
                let u = random_orthogonal(dd, rng);
                GroupElement::d(eps, &u).expect("orthogonal by construction")
            }
            _ => GroupElement::s(dims),
        })
        .collect()
}

/// Product of a random word of length 1..=6.
pub fn random_element<R: Rng + ?Sized>(dims: Dimensions, rng: &mut R) -> GroupElement {
    let len = rng.random_range(1..=6);
    random_word(dims, len, rng)
        .iter()
        .fold(GroupElement::identity(dims), |acc, g| acc.mul(g))
}

use serde::{Deserialize, Serialize};

use super::{GroupElement, TriangularElement, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::specfun::Dimensions;

/// One letter of a word: an element of B or the distinguished element s.
#[derive(Debug, Clone, PartialEq)]
pub enum Letter {
    B(TriangularElement),
    S,
}

impl Letter {
    pub fn to_element(&self, dims: Dimensions) -> GroupElement {
        match self {
            Letter::B(t) => t.to_element(),
            Letter::S => GroupElement::s(dims),
        }
    }
}

/// A product of letters, evaluated left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupWord {
    pub dims: Dimensions,
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn evaluate(&self) -> GroupElement {
        self.letters
            .iter()
            .fold(GroupElement::identity(self.dims), |acc, l| acc.mul(&l.to_element(self.dims)))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Compact description such as "B S B".
    pub fn shape(&self) -> String {
        let v: Vec<&str> = self.letters.iter().map(|l| if matches!(l, Letter::S) { "S" } else { "B" }).collect();
        v.join(" ")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "letter", rename_all = "lowercase")]
enum LetterRepr {
    B { epsilon: f64, u: Vec<Vec<f64>>, gamma: Vec<f64> },
    S,
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<LetterRepr> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::S => LetterRepr::S,
                Letter::B(t) => LetterRepr::B {
                    epsilon: t.epsilon,
                    u: (0..t.u.nrows()).map(|i| t.u.row(i).iter().cloned().collect()).collect(),
                    gamma: t.gamma.clone(),
                },
            })
            .collect();
        v.serialize(s)
    }
}

fn is_identity(t: &TriangularElement) -> bool {
    let dd = t.gamma.len();
    (t.epsilon - 1.0).abs() < 1e-14
        && t.gamma.iter().all(|x| x.abs() < 1e-14)
        && (&t.u - nalgebra::DMatrix::identity(dd, dd)).abs().max() < 1e-14
}

fn b_letter(g: &GroupElement) -> Result<Letter> {
    TriangularElement::from_element(g)
        .map(Letter::B)
        .ok_or_else(|| Error::Accuracy("reduction did not land in B".into()))
}

/// Writes g as a word of length at most 4 over B ∪ {s}:
/// g ∈ B gives [b]; g ∈ sBs gives [s, b, s]; otherwise
/// g = b·s·z(γ₁) with γ₁ = g₁₂/g₁₃, or g = s·b·s·z(γ′) with γ′ = g₃₂/g₃₃,
/// whichever of g₁₃, g₃₃ is larger in modulus. Identity letters are dropped.
pub fn factor_word(g: &GroupElement) -> Result<GroupWord> {
    let r = g.membership_residual();
    if r > MEMBERSHIP_TOL {
        return Err(Error::NonMember(r));
    }
    let dims = g.dims();
    let k = dims.n();
    let m = g.matrix();
    let s = GroupElement::s(dims);
    let scale = m.abs().max().max(1.0);
    let letters = if g.is_triangular() {
        vec![b_letter(g)?]
    } else if m[(k, 0)].abs() <= MEMBERSHIP_TOL * scale {
        vec![Letter::S, b_letter(&s.mul(g).mul(&s))?, Letter::S]
    } else if m[(0, k)].abs() >= m[(k, k)].abs() {
        let g1: Vec<f64> = (1..k).map(|j| m[(0, j)] / m[(0, k)]).collect();
        let neg: Vec<f64> = g1.iter().map(|x| -x).collect();
        let b = g.mul(&GroupElement::z(&neg)).mul(&s);
        vec![b_letter(&b)?, Letter::S, Letter::B(TriangularElement::translation(g1))]
    } else {
        let h = s.mul(g);
        let hm = h.matrix();
        let g1: Vec<f64> = (1..k).map(|j| hm[(0, j)] / hm[(0, k)]).collect();
        let neg: Vec<f64> = g1.iter().map(|x| -x).collect();
        let b = h.mul(&GroupElement::z(&neg)).mul(&s);
        vec![Letter::S, b_letter(&b)?, Letter::S, Letter::B(TriangularElement::translation(g1))]
    };
    let letters: Vec<Letter> =
        letters.into_iter().filter(|l| !matches!(l, Letter::B(t) if is_identity(t))).collect();
    Ok(GroupWord { dims, letters })
}

//! O(n,1) elements, the boundary action, the cocycle and word factorization.
//!
//!     cargo run --example group_actions

use lorentz_current::group::{act, cocycle_beta, factor_word, random_element, GroupElement};
use lorentz_current::process::SeededStream;
use lorentz_current::specfun::Dimensions;
use nalgebra::DMatrix;

fn main() -> lorentz_current::Result<()> {
    let d = Dimensions::new(3)?;
    let z = GroupElement::z(&[1.0, -0.5]);
    let dil = GroupElement::d(2.0, &DMatrix::identity(2, 2))?;
    let s = GroupElement::s(d);
    let g = z.mul(&s).mul(&dil);
    println!("g = z s d:\n{}", g.matrix());
    println!("membership residual {:.1e}", g.membership_residual());

    let x = [0.3, 0.7];
    let y = act(&x, &g)?;
    println!("x = {x:?} -> x g = {y:?}, beta(x, g) = {:.12}", cocycle_beta(&x, &g)?);

    let mut rng = SeededStream::new(1, 0);
    let h = random_element(d, &mut rng);
    let w = factor_word(&h)?;
    let back = w.evaluate();
    println!("random element factors as {}, round-trip error {:.1e}", w.shape(), (back.matrix() - h.matrix()).abs().max());

    let lhs = cocycle_beta(&x, &g.mul(&h))?;
    let rhs = cocycle_beta(&x, &g)? * cocycle_beta(&y, &h)?;
    println!("cocycle law: {lhs:.12} vs {rhs:.12}");
    println!("as JSON rows: {}", serde_json::to_string(&s).unwrap());
    Ok(())
}

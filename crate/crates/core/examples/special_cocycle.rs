//! The λ = 0 representation and its nontrivial additive cocycle.
//!
//!     cargo run --example special_cocycle

use lorentz_current::group::GroupElement;
use lorentz_current::reps::{special_cocycle, CellGrid};
use lorentz_current::specfun::Dimensions;
use nalgebra::DMatrix;

fn main() -> lorentz_current::Result<()> {
    let d = Dimensions::new(3)?;
    let nodes = CellGrid::polar(4, 4, 3.0, 1.0);
    let rot = DMatrix::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
    for (name, g) in [
        ("rotation", GroupElement::d(1.0, &rot)?),
        ("translation", GroupElement::z(&[0.5, -0.2])),
        ("dilation", GroupElement::d(1.7, &DMatrix::identity(2, 2))?),
    ] {
        let b = special_cocycle(d, &g, &nodes, None)?;
        let size = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
        println!("{name:<12} max |b(g)| on nodes = {size:.6}");
    }
    Ok(())
}

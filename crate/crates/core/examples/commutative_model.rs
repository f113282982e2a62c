//! Operators of the commutative model on a node grid: translations,
//! dilations and the kernel involution.
//!
//!     cargo run --release --example commutative_model

use std::sync::Arc;

use lorentz_current::group::TriangularElement;
use lorentz_current::measures::{CellVector, Partition};
use lorentz_current::reps::{
    r_transform, u_current_apply, CellGrid, CurrentFunction, GridFunction, Involution, ProductGrid,
};
use lorentz_current::specfun::Dimensions;
use nalgebra::DMatrix;

fn main() -> lorentz_current::Result<()> {
    let d = Dimensions::new(2)?;
    let p = Partition::new(vec![0.5])?;
    let grid = Arc::new(ProductGrid::uniform(&p, CellGrid::standard(d, 20.0, 2.0)?));
    let f = CurrentFunction::single(|x| (-x[0] * x[0] / 4.0).exp());
    let fg = GridFunction::tabulate(&p, grid.clone(), &f);
    println!("|f|^2 in L2(nu) = {:.10}", fg.nu_norm2(d)?);

    let b = TriangularElement::new(1.7, -DMatrix::identity(1, 1), vec![0.6])?;
    let uf = GridFunction::tabulate(&p, grid.clone(), &u_current_apply(d, &p, &[b], &f)?);
    println!("after a dilation and translation: {:.10}", uf.nu_norm2(d)?);

    let inv = Involution::new(d, &p, grid.clone())?;
    let once = inv.apply_grid(&fg);
    let twice = inv.apply_grid(&once);
    println!("after I: {:.10}; |I I f - f| / |f| = {:.2e}", once.nu_norm2(d)?, twice.relative_distance(d, &fg)?);

    for gamma in [0.8, 1.5] {
        let a = r_transform(d, &once, &CellVector(vec![vec![gamma]]))?;
        let b = r_transform(d, &fg, &CellVector(vec![vec![-2.0 / gamma]]))? * 2f64.powf(0.25) * gamma.powf(-0.5);
        println!("R(I f)({gamma}) = {a:.6}, predicted {b:.6}");
    }
    Ok(())
}

//! The kernel of the involution, by oscillatory quadrature and in closed
//! form for n = 2.
//!
//!     cargo run --release --example intertwining_kernel

use lorentz_current::quadrature::{kernel_a, kernel_a_closed_n2};
use lorentz_current::specfun::Dimensions;

fn main() -> lorentz_current::Result<()> {
    let d = Dimensions::new(2)?;
    let lambda = 0.5;
    println!("{:>6} {:>6} {:>20} {:>20} {:>10}", "xi", "xi'", "quadrature", "closed form", "err est");
    for (x, y) in [(0.5, 0.3), (0.5, -0.3), (2.0, 0.1), (1.0, 1.7)] {
        let q = kernel_a(d, lambda, &[x], &[y])?;
        let c = kernel_a_closed_n2(lambda, x, y)?;
        println!("{x:>6} {y:>6} {:>20.14} {c:>20.14} {:>10.1e}", q.value, q.abs_error_estimate);
    }
    let d3 = Dimensions::new(3)?;
    let q = kernel_a(d3, 0.5, &[0.5, 0.2], &[-0.3, 0.4])?;
    println!("n = 3: A((0.5,0.2), (-0.3,0.4)) = {:.12}", q.value);
    Ok(())
}

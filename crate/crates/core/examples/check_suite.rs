//! Runs a named check suite and prints one line per check.
//!
//!     cargo run --release --example check_suite -- spherical

use lorentz_current::suite::{run_suite, RunConfig, Suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "specfun".into());
    let suite: Suite = name.parse()?;
    let report = run_suite(&RunConfig::default(), suite)?;
    for c in &report.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        println!("{mark} {:<40} residual {:.3e}  tol {:.1e}  {} ms", c.check_id, c.residual, c.tolerance, c.runtime_ms);
        if let Some(e) = &c.error {
            println!("     error: {e}");
        }
    }
    println!("{}: {}", report.suite, if report.pass { "pass" } else { "fail" });
    Ok(())
}

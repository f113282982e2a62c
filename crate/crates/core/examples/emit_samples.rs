//! Writes marginal draws as JSON lines, as `sample marginal` does.
//!
//!     cargo run --example emit_samples

use lorentz_current::measures::Partition;
use lorentz_current::suite::{emit_samples, RunConfig, SampleKind};

fn main() -> lorentz_current::Result<()> {
    let cfg = RunConfig { n: 3, partition: Partition::new(vec![0.25, 0.75])?, seed: 9, ..RunConfig::default() };
    let mut out = std::io::stdout().lock();
    emit_samples(&cfg, SampleKind::Marginal, 3, &mut out)?;
    emit_samples(&cfg, SampleKind::Process { cutoff_eps: 1e-3 }, 2, &mut out)?;
    Ok(())
}

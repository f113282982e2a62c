use super::accel::wynn_epsilon;
use super::rules::{adaptive, QuadratureReport, Tolerance};
use crate::error::{Error, Result};

/// Settings for summing an oscillatory integral piece by piece.
#[derive(Debug, Clone, Copy)]
pub struct OscillatoryConfig {
    /// Target for each piece.
    pub piece_tol: Tolerance,
    /// Target for the extrapolated sum.
    pub tol: Tolerance,
    pub min_pieces: usize,
    pub max_pieces: usize,
}

impl Default for OscillatoryConfig {
    fn default() -> Self {
        Self {
            piece_tol: Tolerance::new(1e-15, 1e-13),
            tol: Tolerance::new(1e-12, 1e-10),
            min_pieces: 6,
            max_pieces: 400,
        }
    }
}

/// ∫_{b_0}^∞ f, with f integrated exactly between consecutive breakpoints
/// (typically zeros of the oscillating factor) and the partial sums
/// extrapolated by the ε-algorithm. Divergent alternating tails of bounded or
/// slowly growing amplitude are summed in the Abel sense.
pub fn oscillatory_sum<F, B>(f: &F, mut breakpoints: B, cfg: OscillatoryConfig) -> Result<QuadratureReport>
where
    F: Fn(f64) -> f64 + ?Sized,
    B: Iterator<Item = f64>,
{
    let mut left = match breakpoints.next() {
        Some(x) => x,
        None => return Ok(QuadratureReport::zero()),
    };
    let mut partial = Vec::with_capacity(64);
    let mut sum = 0.0;
    let mut piece_err = 0.0;
    let mut evals = 0;
    let mut last_est = f64::NAN;
    let mut stable = 0;
    let mut small_terms = 0;
    for right in breakpoints.by_ref() {
        if right <= left {
            continue;
        }
        let r = adaptive(f, left, right, cfg.piece_tol)?;
        left = right;
        sum += r.value;
        piece_err += r.abs_error_estimate;
        evals += r.nodes_used;
        partial.push(sum);
        let n = partial.len();
        if r.value.abs() <= 0.1 * cfg.tol.abs.max(cfg.tol.rel * sum.abs()) {
            small_terms += 1;
            if small_terms >= 3 && n >= cfg.min_pieces {
                return Ok(QuadratureReport {
                    value: sum,
                    abs_error_estimate: piece_err + r.value.abs(),
                    nodes_used: evals,
                });
            }
        } else {
            small_terms = 0;
        }
        if n < cfg.min_pieces {
            continue;
        }
        // extrapolate from a bounded window; long tables lose accuracy
        let window = &partial[n.saturating_sub(40)..];
        let (est, _) = wynn_epsilon(window);
        let diff = (est - last_est).abs();
        last_est = est;
        if cfg.tol.met(est, diff) {
            stable += 1;
            if stable >= 2 {
                return Ok(QuadratureReport {
                    value: est,
                    abs_error_estimate: diff + piece_err,
                    nodes_used: evals,
                });
            }
        } else {
            stable = 0;
        }
        if n >= cfg.max_pieces {
            break;
        }
    }
    Err(Error::Convergence(format!(
        "oscillatory tail did not settle after {} pieces (last estimate {last_est})",
        partial.len()
    )))
}

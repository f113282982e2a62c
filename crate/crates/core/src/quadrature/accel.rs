/// Wynn's ε-algorithm over a sequence of partial sums.
///
/// Returns the most advanced even-column entry and the difference from the
/// previous one. For alternating series with non-decaying terms the limit is
/// the Abel sum.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (partial[0], f64::INFINITY),
        _ => {}
    }
    // prev = column j−1, cur = column j; column j has n−j entries
    let mut prev = vec![0.0; n + 1];
    let mut cur = partial.to_vec();
    let mut best = partial[n - 1];
    let mut best_prev = partial[n - 2];
    let mut j = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for k in 0..cur.len() - 1 {
            let diff = cur[k + 1] - cur[k];
            if diff == 0.0 || !diff.is_finite() {
                return (best, (best - best_prev).abs());
            }
            next.push(prev[k + 1] + 1.0 / diff);
        }
        j += 1;
        prev = cur;
        cur = next;
        if j % 2 == 0 && cur.len() >= 2 {
            let m = cur.len();
            if cur[m - 1].is_finite() && cur[m - 2].is_finite() {
                best = cur[m - 1];
                best_prev = cur[m - 2];
            }
        } else if j % 2 == 0 && cur.len() == 1 && cur[0].is_finite() {
            best_prev = best;
            best = cur[0];
        }
    }
    (best, (best - best_prev).abs())
}

use crate::error::{Error, Result};

/// Dynamic time warping distance between two series under the absolute
/// local cost `|a_i - b_j|`, with unit steps (insertion, deletion, match)
/// and no warping-window constraint. Endpoints are anchored: the path runs
/// from `(0, 0)` to `(len(a)-1, len(b)-1)`.
pub fn dtw_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("dtw requires non-empty series"));
    }
    if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite value"));
    }
    // Rolling single-row DP over the (len(a)+1) x (len(b)+1) grid with an
    // infinite border, so the recurrence needs no edge cases.
    let cols = b.len() + 1;
    let mut prev = vec![f64::INFINITY; cols];
    let mut curr = vec![f64::INFINITY; cols];
    prev[0] = 0.0;
    for &ai in a {
        curr[0] = f64::INFINITY;
        for j in 1..cols {
            let cost = (ai - b[j - 1]).abs();
            let best = prev[j].min(curr[j - 1]).min(prev[j - 1]);
            curr[j] = cost + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Ok(prev[cols - 1])
}

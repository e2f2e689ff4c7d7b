//! Small numeric helpers shared across modules.

/// Shortest contiguous interval of sorted samples containing at least
/// `ceil(mass * n)` of them; ties broken toward the lowest start index.
/// Degenerate inputs are handled leniently: one sample yields a point
/// interval. The caller guarantees `samples` is non-empty and sorted.
pub(crate) fn shortest_interval(sorted: &[f64], mass: f64) -> (f64, f64) {
    let n = sorted.len();
    debug_assert!(n > 0);
    if n == 1 {
        return (sorted[0], sorted[0]);
    }
    let k = ((mass * n as f64).ceil() as usize).clamp(1, n);
    let mut best = (sorted[0], sorted[k - 1]);
    let mut best_width = best.1 - best.0;
    for i in 1..=(n - k) {
        let width = sorted[i + k - 1] - sorted[i];
        if width < best_width {
            best_width = width;
            best = (sorted[i], sorted[i + k - 1]);
        }
    }
    best
}

/// Mean of a slice (0.0 for an empty slice).
pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_dominates() {
        // 90% zeros, 10% at 10: the 90% interval is the zero point.
        let mut samples = vec![0.0; 90];
        samples.extend(vec![10.0; 10]);
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(shortest_interval(&samples, 0.9), (0.0, 0.0));
    }

    #[test]
    fn ties_pick_lowest_start() {
        let samples: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        // Every window of 95 consecutive integers has the same width; the
        // lowest start wins.
        assert_eq!(shortest_interval(&samples, 0.95), (1.0, 95.0));
    }
}

//! Randomized invariants: alignment-distance symmetry and bounds,
//! standardization equivariance, metric scaling laws, interval bracketing,
//! and dendrogram monotonicity.

use bsts::evaluation::{mae, mse, smape};
use bsts::inference::hdi;
use bsts::preprocessing::{cluster_trends, dtw_distance, standardize};
use proptest::prelude::*;

fn series(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-25.0..25.0f64, len)
}

/// Strictly positive values so no sMAPE pair has a zero denominator.
fn positive_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(0.1..40.0f64, n),
            prop::collection::vec(0.1..40.0f64, n),
        )
    })
}

fn rotate<T: Clone>(xs: &[T], by: usize) -> Vec<T> {
    let n = xs.len();
    (0..n).map(|i| xs[(i + by) % n].clone()).collect()
}

proptest! {
    #[test]
    fn dtw_is_symmetric_and_zero_on_identity(
        a in series(1..15),
        b in series(1..15),
    ) {
        let ab = dtw_distance(&a, &b).unwrap();
        let ba = dtw_distance(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-9 * (1.0 + ab.abs()));
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(dtw_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn dtw_never_beats_pointwise_alignment_on_equal_lengths(
        pair in (1usize..15).prop_flat_map(|n| {
            (prop::collection::vec(-25.0..25.0f64, n),
             prop::collection::vec(-25.0..25.0f64, n))
        }),
    ) {
        let (a, b) = pair;
        let pointwise: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum();
        let warped = dtw_distance(&a, &b).unwrap();
        prop_assert!(warped <= pointwise + 1e-9);
    }

    #[test]
    fn standardization_is_affine_equivariant_and_invertible(
        x in series(2..40),
        c in 0.05..20.0f64,
        d in -50.0..50.0f64,
    ) {
        let base = match standardize(&x) {
            Ok(s) => s,
            Err(_) => return Ok(()), // constant draw: nothing to compare
        };
        let shifted: Vec<f64> = x.iter().map(|v| c * v + d).collect();
        let transformed = standardize(&shifted).unwrap();
        for (u, v) in base.values.iter().zip(&transformed.values) {
            prop_assert!((u - v).abs() <= 1e-8, "{u} vs {v}");
        }

        let back = base.destandardize();
        for (orig, rec) in x.iter().zip(&back) {
            prop_assert!((orig - rec).abs() <= 1e-10 * (1.0 + orig.abs()));
        }
    }

    #[test]
    fn metrics_obey_scaling_laws(
        pair in positive_pair(),
        c in 0.1..15.0f64,
    ) {
        let (y, p) = pair;
        let scaled_y: Vec<f64> = y.iter().map(|v| c * v).collect();
        let scaled_p: Vec<f64> = p.iter().map(|v| c * v).collect();

        let mae_scaled = mae(&scaled_y, &scaled_p).unwrap();
        let mae_base = mae(&y, &p).unwrap();
        prop_assert!((mae_scaled - c * mae_base).abs() <= 1e-9 * (1.0 + mae_scaled));

        let mse_scaled = mse(&scaled_y, &scaled_p).unwrap();
        let mse_base = mse(&y, &p).unwrap();
        prop_assert!((mse_scaled - c * c * mse_base).abs() <= 1e-9 * (1.0 + mse_scaled));

        let smape_scaled = smape(&scaled_y, &scaled_p).unwrap();
        let smape_base = smape(&y, &p).unwrap();
        prop_assert!((smape_scaled - smape_base).abs() <= 1e-9 * (1.0 + smape_base));
        prop_assert!((0.0..=200.0).contains(&smape_base));
    }

    #[test]
    fn metrics_are_invariant_to_a_common_permutation(
        pair in positive_pair(),
        by in 0usize..30,
    ) {
        let (y, p) = pair;
        let shift = by % y.len();
        let y_rot = rotate(&y, shift);
        let p_rot = rotate(&p, shift);
        for (f, label) in [
            (smape as fn(&[f64], &[f64]) -> bsts::Result<f64>, "smape"),
            (mae, "mae"),
            (mse, "mse"),
        ] {
            let base = f(&y, &p).unwrap();
            let rotated = f(&y_rot, &p_rot).unwrap();
            prop_assert!(
                (base - rotated).abs() <= 1e-9 * (1.0 + base),
                "{label}: {base} vs {rotated}"
            );
        }
    }

    #[test]
    fn hdi_brackets_enough_mass_with_sample_endpoints(
        samples in prop::collection::vec(-100.0..100.0f64, 20..200),
        mass in 0.5..0.99f64,
    ) {
        let (lo, hi) = hdi(&samples, mass).unwrap();
        prop_assert!(lo <= hi);
        prop_assert!(samples.iter().any(|s| *s == lo));
        prop_assert!(samples.iter().any(|s| *s == hi));
        let needed = (mass * samples.len() as f64).ceil() as usize;
        let inside = samples.iter().filter(|s| lo <= **s && **s <= hi).count();
        prop_assert!(inside >= needed, "{inside} inside, needed {needed}");
    }

    #[test]
    fn dendrogram_heights_are_nondecreasing(
        table in (3usize..6, 6usize..14).prop_flat_map(|(rows, cols)| {
            prop::collection::vec(
                prop::collection::vec(-5.0..5.0f64, cols..cols + 1),
                rows..rows + 1,
            )
        }),
    ) {
        let mut named = Vec::new();
        for (i, mut row) in table.into_iter().enumerate() {
            // Deterministic jitter so no series is constant.
            row[0] += 0.37 * (i + 1) as f64;
            row[1] -= 0.53 * (i + 1) as f64;
            let sd = {
                let m = row.iter().sum::<f64>() / row.len() as f64;
                (row.iter().map(|v| (v - m).powi(2)).sum::<f64>()
                    / (row.len() - 1) as f64)
                    .sqrt()
            };
            prop_assume!(sd > 1e-6);
            named.push((format!("s{i}"), row));
        }
        let result = cluster_trends(&named, None).unwrap();
        let heights: Vec<f64> =
            result.dendrogram.merges.iter().map(|m| m.height).collect();
        for w in heights.windows(2) {
            prop_assert!(
                w[1] >= w[0] - 1e-9,
                "merge heights decreased: {} then {}",
                w[0],
                w[1]
            );
        }
    }
}

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::preprocessing::{dtw_distance, standardize};

/// Linkage rule used when merging clusters in the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    /// Unweighted average of pairwise distances (the default).
    Average,
    /// Minimum pairwise distance.
    Single,
    /// Maximum pairwise distance.
    Complete,
}

/// One agglomeration step. Leaves are numbered `0..n-1`; the i-th merge
/// creates node `n + i`, so `left`/`right` may reference either a leaf or
/// an earlier merge.
#[derive(Debug, Clone, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    /// Linkage distance at which the two clusters were joined.
    pub height: f64,
    /// Number of leaves under the new node.
    pub size: usize,
}

/// Full merge tree over the input series.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub labels: Vec<String>,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    /// Flat cluster labels obtained by stopping the agglomeration once `k`
    /// clusters remain. Clusters are numbered by first appearance in input
    /// order, so label 0 always contains the first series.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>> {
        let n = self.labels.len();
        if k == 0 || k > n {
            return Err(Error::invalid(format!(
                "cannot cut {n} series into {k} clusters"
            )));
        }
        // Union-find over leaves, replaying the first n-k merges.
        let mut parent: Vec<usize> = (0..2 * n - 1).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, merge) in self.merges.iter().take(n - k).enumerate() {
            let node = n + i;
            let l = find(&mut parent, merge.left);
            let r = find(&mut parent, merge.right);
            parent[l] = node;
            parent[r] = node;
        }
        let mut assignments = Vec::with_capacity(n);
        let mut seen: Vec<usize> = Vec::new();
        for leaf in 0..n {
            let root = find(&mut parent, leaf);
            let id = match seen.iter().position(|r| *r == root) {
                Some(pos) => pos,
                None => {
                    seen.push(root);
                    seen.len() - 1
                }
            };
            assignments.push(id);
        }
        Ok(assignments)
    }
}

/// Output of [`cluster_trends`]: the merge tree, the pairwise DTW distance
/// matrix it was built from, and flat labels when a cluster count was
/// requested.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub dendrogram: Dendrogram,
    /// Symmetric matrix of DTW distances between the standardized series.
    pub distances: Vec<Vec<f64>>,
    pub assignments: Option<Vec<usize>>,
}

/// Hierarchically clusters named series by the shape of their trajectories:
/// each series is standardized, pairwise DTW distances are computed, and the
/// hierarchy is built with average linkage. Pass `k` to also cut the tree
/// into flat clusters. Standardization is idempotent, so already-standardized
/// input is handled identically.
pub fn cluster_trends(
    series: &[(String, Vec<f64>)],
    k: Option<usize>,
) -> Result<ClusterResult> {
    cluster_trends_with(series, k, Linkage::Average)
}

/// [`cluster_trends`] with an explicit linkage rule.
pub fn cluster_trends_with(
    series: &[(String, Vec<f64>)],
    k: Option<usize>,
    linkage: Linkage,
) -> Result<ClusterResult> {
    let n = series.len();
    if n < 2 {
        return Err(Error::invalid("clustering requires at least two series"));
    }
    for (label, _) in series {
        if series.iter().filter(|(other, _)| other == label).count() > 1 {
            return Err(Error::invalid(format!("duplicate series label {label:?}")));
        }
    }
    let standardized: Vec<Vec<f64>> = series
        .iter()
        .map(|(label, values)| {
            standardize(values)
                .map(|s| s.values)
                .map_err(|e| Error::invalid(format!("series {label:?}: {e}")))
        })
        .collect::<Result<_>>()?;

    // Pairwise DTW distances; pairs are independent, so fill them in parallel.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let computed: Vec<((usize, usize), f64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            dtw_distance(&standardized[i], &standardized[j]).map(|d| ((i, j), d))
        })
        .collect::<Result<_>>()?;
    let mut distances = vec![vec![0.0; n]; n];
    for ((i, j), d) in computed {
        distances[i][j] = d;
        distances[j][i] = d;
    }

    let merges = agglomerate(&distances, linkage);
    let dendrogram = Dendrogram {
        labels: series.iter().map(|(label, _)| label.clone()).collect(),
        merges,
    };
    let assignments = match k {
        Some(k) => Some(dendrogram.cut(k)?),
        None => None,
    };
    Ok(ClusterResult { dendrogram, distances, assignments })
}

/// Agglomerative clustering over a precomputed distance matrix, updating
/// inter-cluster distances with the Lance-Williams recurrence for the chosen
/// linkage. All three supported linkages are monotone, so merge heights never
/// decrease.
fn agglomerate(distances: &[Vec<f64>], linkage: Linkage) -> Vec<Merge> {
    let n = distances.len();
    // Slot i holds (node id, leaf count) while active; merged-away slots
    // become None. The merged cluster reuses the lower slot.
    let mut slots: Vec<Option<(usize, usize)>> =
        (0..n).map(|i| Some((i, 1))).collect();
    let mut d: Vec<Vec<f64>> = distances.to_vec();
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if slots[i].is_none() {
                continue;
            }
            for j in (i + 1)..n {
                if slots[j].is_none() {
                    continue;
                }
                if best.map_or(true, |(_, _, bd)| d[i][j] < bd) {
                    best = Some((i, j, d[i][j]));
                }
            }
        }
        let (i, j, height) = best.expect("at least two active clusters");
        let (left_id, left_size) = slots[i].unwrap();
        let (right_id, right_size) = slots[j].unwrap();
        let size = left_size + right_size;

        for t in 0..n {
            if t == i || t == j || slots[t].is_none() {
                continue;
            }
            let merged = match linkage {
                Linkage::Average => {
                    (left_size as f64 * d[i][t] + right_size as f64 * d[j][t])
                        / size as f64
                }
                Linkage::Single => d[i][t].min(d[j][t]),
                Linkage::Complete => d[i][t].max(d[j][t]),
            };
            d[i][t] = merged;
            d[t][i] = merged;
        }
        slots[i] = Some((n + step, size));
        slots[j] = None;
        merges.push(Merge { left: left_id, right: right_id, height, size });
    }
    merges
}

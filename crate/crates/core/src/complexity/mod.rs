//! Product complexity from quality performance: Hellinger distances between
//! Beta posteriors, complexity ordering and 0–10 scoring, hierarchical
//! clustering and cluster labelling.

mod cluster;

pub use cluster::{
    agglomerative_cluster, cut, ClusterTree, DendrogramSegment, Merge,
};

use serde::{Deserialize, Serialize};

use crate::beta::BetaParams;
use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::special::ln_beta_unchecked;

/// Hellinger distance between Beta(a₁, b₁) and Beta(a₂, b₂).
///
/// Closed form `sqrt(1 − B((a₁+a₂)/2, (b₁+b₂)/2) / sqrt(B(a₁,b₁)·B(a₂,b₂)))`,
/// evaluated in log space; rounding can push the Bhattacharyya coefficient
/// marginally above one, so `1 − r` is clamped to `[0, 1]`.
pub fn hellinger<T: Real>(p: &BetaParams<T>, q: &BetaParams<T>) -> T {
    if p == q {
        return T::zero();
    }
    let two = T::lit(2.0);
    let ln_r = ln_beta_unchecked((p.a + q.a) / two, (p.b + q.b) / two)
        - (ln_beta_unchecked(p.a, p.b) + ln_beta_unchecked(q.a, q.b)) / two;
    let gap = -ln_r.exp_m1();
    gap.max(T::zero()).min(T::one()).sqrt()
}

/// Symmetric matrix of pairwise distances with row/column labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix<T> {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<T>>,
}

/// Distances between Beta posteriors.
pub type HellingerMatrix<T> = DistanceMatrix<T>;

impl<T: Real> DistanceMatrix<T> {
    pub fn new(labels: Vec<String>, entries: Vec<Vec<T>>) -> Result<Self> {
        let m = Self { labels, entries };
        m.validate()?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i][j]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.entries.len();
        if self.labels.len() != n {
            return domain(format!("{} labels for a {n}×{n} matrix", self.labels.len()));
        }
        let tol = T::lit(1e-12);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != n {
                return domain(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() || x < T::zero() {
                    return domain(format!("entry ({i}, {j}) = {x} is not a distance"));
                }
                if i == j && x != T::zero() {
                    return domain(format!("diagonal entry {i} is {x}, expected 0"));
                }
                if j < i && (x - self.entries[j][i]).abs() > tol {
                    return domain(format!("matrix is not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(())
    }

    /// Euclidean distances between the rows of this matrix.
    ///
    /// Clustering on these row profiles groups items whose distances to
    /// every other item look alike, rather than items that are close to
    /// each other directly.
    pub fn row_profile_distances(&self) -> Self {
        let n = self.len();
        let mut entries = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.entries[i]
                    .iter()
                    .zip(&self.entries[j])
                    .map(|(&x, &y)| (x - y) * (x - y))
                    .sum::<T>()
                    .sqrt();
                entries[i][j] = d;
                entries[j][i] = d;
            }
        }
        Self { labels: self.labels.clone(), entries }
    }
}

/// Pairwise Hellinger distances, labelled `1..=N`.
pub fn distance_matrix<T: Real>(posteriors: &[BetaParams<T>]) -> HellingerMatrix<T> {
    let labels = (1..=posteriors.len()).map(|i| i.to_string()).collect();
    labelled_distance_matrix(posteriors, labels)
}

pub fn labelled_distance_matrix<T: Real>(posteriors: &[BetaParams<T>], labels: Vec<String>) -> HellingerMatrix<T> {
    use rayon::prelude::*;
    let n = posteriors.len();
    let entries = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::zero() } else { hellinger(&posteriors[i], &posteriors[j]) })
                .collect()
        })
        .collect::<Vec<Vec<T>>>();
    // enforce exact symmetry
    let mut entries = entries;
    for i in 0..n {
        for j in 0..i {
            entries[i][j] = entries[j][i];
        }
    }
    DistanceMatrix { labels, entries }
}

/// Indices sorted from least to most complex.
///
/// Primary key is the posterior median; exact median ties go to the
/// distribution with the smaller variance, then to the earlier index.
pub fn complexity_order<T: Real>(posteriors: &[BetaParams<T>]) -> Result<Vec<usize>> {
    let keys = posteriors
        .iter()
        .map(|p| Ok((p.median()?, p.variance())))
        .collect::<Result<Vec<(T, T)>>>()?;
    let mut order: Vec<usize> = (0..posteriors.len()).collect();
    order.sort_by(|&i, &j| {
        keys[i]
            .0
            .partial_cmp(&keys[j].0)
            .unwrap()
            .then(keys[i].1.partial_cmp(&keys[j].1).unwrap())
            .then(i.cmp(&j))
    });
    Ok(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityScore<T> {
    /// Position in the input list.
    pub product: usize,
    /// Position in the complexity order, 0 = least complex.
    pub rank: usize,
    /// Cumulative Hellinger distance along the complexity order.
    pub raw_score: T,
    /// `raw_score` rescaled so the most complex product scores 10.
    pub scaled_score: T,
    pub median: T,
}

/// Scores in input order.
pub fn complexity_scores<T: Real>(posteriors: &[BetaParams<T>]) -> Result<Vec<ComplexityScore<T>>> {
    if posteriors.is_empty() {
        return domain("complexity scoring needs at least one posterior");
    }
    let order = complexity_order(posteriors)?;
    let mut raw = vec![T::zero(); posteriors.len()];
    let mut rank = vec![0usize; posteriors.len()];
    let mut acc = T::zero();
    for (r, w) in order.windows(2).enumerate() {
        acc = acc + hellinger(&posteriors[w[1]], &posteriors[w[0]]);
        raw[w[1]] = acc;
        rank[w[1]] = r + 1;
    }
    let max = raw.iter().copied().fold(T::zero(), T::max);
    posteriors
        .iter()
        .enumerate()
        .map(|(i, p)| {
            Ok(ComplexityScore {
                product: i,
                rank: rank[i],
                raw_score: raw[i],
                scaled_score: if max > T::zero() { T::lit(10.0) * raw[i] / max } else { T::zero() },
                median: p.median()?,
            })
        })
        .collect()
}

/// One labelled cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelledCluster<T> {
    pub label: String,
    /// Cluster index as produced by [`cut`].
    pub cluster: usize,
    pub members: Vec<usize>,
    pub mean_score: T,
    pub total_welds: Option<u64>,
    /// Share of all supplied totals falling in this cluster.
    pub business_share: Option<T>,
    /// Member with the largest total, when totals are supplied.
    pub representative: Option<usize>,
}

/// Letter label for the `i`-th cluster: A…Z, AA, AB, …
pub fn cluster_letter(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

/// Labels clusters A, B, … in descending order of mean scaled score, so A is
/// the most complex group.
pub fn label_clusters<T: Real>(
    assignments: &[usize],
    scores: &[ComplexityScore<T>],
    totals: Option<&[u64]>,
) -> Result<Vec<LabelledCluster<T>>> {
    if assignments.len() != scores.len() {
        return domain(format!(
            "{} assignments for {} scores",
            assignments.len(),
            scores.len()
        ));
    }
    if let Some(t) = totals {
        if t.len() != assignments.len() {
            return domain(format!("{} totals for {} products", t.len(), assignments.len()));
        }
    }
    let mut by_product = vec![T::zero(); scores.len()];
    for s in scores {
        if s.product >= scores.len() {
            return domain(format!("score refers to unknown product {}", s.product));
        }
        by_product[s.product] = s.scaled_score;
    }
    let k = assignments.iter().copied().max().map_or(0, |m| m + 1);
    let grand_total: Option<u64> = totals.map(|t| t.iter().sum());
    let mut clusters: Vec<LabelledCluster<T>> = (0..k)
        .filter_map(|c| {
            let members: Vec<usize> = (0..assignments.len()).filter(|&i| assignments[i] == c).collect();
            if members.is_empty() {
                return None;
            }
            let mean_score = members.iter().map(|&i| by_product[i]).sum::<T>() / T::count(members.len() as u64);
            let total_welds = totals.map(|t| members.iter().map(|&i| t[i]).sum::<u64>());
            let business_share = match (total_welds, grand_total) {
                (Some(part), Some(all)) if all > 0 => Some(T::count(part) / T::count(all)),
                _ => None,
            };
            let representative =
                totals.and_then(|t| members.iter().copied().max_by(|&a, &b| t[a].cmp(&t[b]).then(b.cmp(&a))));
            Some(LabelledCluster {
                label: String::new(),
                cluster: c,
                members,
                mean_score,
                total_welds,
                business_share,
                representative,
            })
        })
        .collect();
    clusters.sort_by(|x, y| {
        y.mean_score
            .partial_cmp(&x.mean_score)
            .unwrap()
            .then(x.cluster.cmp(&y.cluster))
    });
    for (i, c) in clusters.iter_mut().enumerate() {
        c.label = cluster_letter(i);
    }
    Ok(clusters)
}

//! Complete-linkage agglomerative clustering over a distance matrix.

use serde::{Deserialize, Serialize};

use super::DistanceMatrix;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// One merge step. Leaves are ids `0..N`; the cluster formed by merge `m`
/// gets id `N + m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge<T> {
    pub left: usize,
    pub right: usize,
    pub height: T,
    /// Leaves of the merged cluster, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterTree<T> {
    pub labels: Vec<String>,
    pub merges: Vec<Merge<T>>,
}

/// A straight line of a dendrogram drawing: x in leaf-slot units, y = height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DendrogramSegment<T> {
    pub x0: T,
    pub y0: T,
    pub x1: T,
    pub y1: T,
}

/// Builds the merge tree under complete linkage.
///
/// Ties between equally distant candidate pairs go to the lexicographically
/// smallest `(min id, max id)` pair, which makes the tree reproducible.
pub fn agglomerative_cluster<T: Real>(matrix: &DistanceMatrix<T>) -> Result<ClusterTree<T>> {
    matrix.validate()?;
    let n = matrix.len();
    if n == 0 {
        return domain("clustering needs at least one item");
    }
    let total = 2 * n - 1;
    let mut dist = vec![vec![T::zero(); total]; total];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = matrix.get(i, j);
        }
    }
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n - 1);
    while active.len() > 1 {
        // `active` stays sorted, so the first strict minimum is the
        // lexicographically smallest pair
        let mut best: Option<(usize, usize, T)> = None;
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let d = dist[a][b];
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((a, b, d));
                }
            }
        }
        let (a, b, height) = best.expect("at least two active clusters");
        let id = n + merges.len();
        for &k in &active {
            if k != a && k != b {
                let d = dist[a][k].max(dist[b][k]);
                dist[id][k] = d;
                dist[k][id] = d;
            }
        }
        let mut m: Vec<usize> = members[a].iter().chain(&members[b]).copied().collect();
        m.sort_unstable();
        members.push(m.clone());
        merges.push(Merge { left: a, right: b, height, members: m });
        active.retain(|&k| k != a && k != b);
        active.push(id);
    }
    Ok(ClusterTree { labels: matrix.labels.clone(), merges })
}

impl<T: Real> ClusterTree<T> {
    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    fn children(&self, id: usize) -> Option<(usize, usize)> {
        let n = self.leaf_count();
        (id >= n).then(|| {
            let m = &self.merges[id - n];
            (m.left, m.right)
        })
    }

    fn root(&self) -> usize {
        2 * self.leaf_count() - 2
    }

    fn height_of(&self, id: usize) -> T {
        let n = self.leaf_count();
        if id < n {
            T::zero()
        } else {
            self.merges[id - n].height
        }
    }

    /// Leaves in drawing order (depth first, left child first).
    pub fn leaf_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaf_count());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            match self.children(id) {
                Some((l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
                None => out.push(id),
            }
        }
        out
    }

    /// Line segments of the dendrogram: each merge contributes two vertical
    /// legs and one horizontal bar.
    pub fn segments(&self) -> Vec<DendrogramSegment<T>> {
        let n = self.leaf_count();
        let mut x = vec![T::zero(); 2 * n - 1];
        for (slot, leaf) in self.leaf_order().into_iter().enumerate() {
            x[leaf] = T::count(slot as u64);
        }
        let mut out = Vec::with_capacity(3 * self.merges.len());
        for (m, merge) in self.merges.iter().enumerate() {
            let (xl, xr) = (x[merge.left], x[merge.right]);
            let h = merge.height;
            out.push(DendrogramSegment { x0: xl, y0: self.height_of(merge.left), x1: xl, y1: h });
            out.push(DendrogramSegment { x0: xl, y0: h, x1: xr, y1: h });
            out.push(DendrogramSegment { x0: xr, y0: self.height_of(merge.right), x1: xr, y1: h });
            x[n + m] = (xl + xr) / T::lit(2.0);
        }
        out
    }

    /// Indented text rendering, root first.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let pad = "  ".repeat(depth);
            match self.children(id) {
                Some((l, r)) => {
                    let names: Vec<&str> = self.merges[id - self.leaf_count()]
                        .members
                        .iter()
                        .map(|&i| self.labels[i].as_str())
                        .collect();
                    out.push_str(&format!("{pad}+ {:.6} [{}]\n", self.height_of(id), names.join(", ")));
                    stack.push((r, depth + 1));
                    stack.push((l, depth + 1));
                }
                None => out.push_str(&format!("{pad}- {}\n", self.labels[id])),
            }
        }
        out
    }
}

/// Flat clustering with exactly `k` clusters, obtained by undoing the last
/// `k − 1` merges. Cluster indices are numbered by their smallest leaf.
pub fn cut<T: Real>(tree: &ClusterTree<T>, k: usize) -> Result<Vec<usize>> {
    let n = tree.leaf_count();
    if k == 0 || k > n {
        return domain(format!("cluster count {k} must lie in 1..={n}"));
    }
    let mut owner: Vec<usize> = (0..n).collect();
    for merge in &tree.merges[..n - k] {
        let target = merge.members[0];
        for &leaf in &merge.members {
            owner[leaf] = target;
        }
    }
    // owners are the smallest leaf of each group; renumber densely in order
    let mut roots: Vec<usize> = owner.clone();
    roots.sort_unstable();
    roots.dedup();
    Ok(owner
        .iter()
        .map(|o| roots.binary_search(o).expect("owner is a root"))
        .collect())
}

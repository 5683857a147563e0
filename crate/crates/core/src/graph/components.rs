use crate::error::{Error, Result};

use super::WeightedGraph;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Label of every element: the smallest index in its set.
    pub fn canonical_labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut smallest = vec![usize::MAX; n];
        for v in 0..n {
            let r = self.find(v);
            smallest[r] = smallest[r].min(v);
        }
        (0..n).map(|v| smallest[self.find(v)]).collect()
    }
}

/// Cluster membership. `label(v)` is the smallest vertex index in `v`'s
/// cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    labels: Vec<usize>,
    /// Indexed by label; zero for indices that are not labels.
    sizes: Vec<usize>,
}

impl ClusterLabels {
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let mut sizes = vec![0; labels.len()];
        for &l in &labels {
            sizes[l] += 1;
        }
        ClusterLabels { labels, sizes }
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn size_of(&self, v: usize) -> usize {
        self.sizes[self.labels[v]]
    }

    pub fn cluster_count(&self) -> usize {
        self.sizes.iter().filter(|s| **s > 0).count()
    }

    /// Cluster sizes in decreasing order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.sizes.iter().copied().filter(|s| *s > 0).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Label of the largest cluster, ties to the smallest label.
    pub fn largest_label(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (l, &s) in self.sizes.iter().enumerate() {
            if s > 0 && best.is_none_or(|b| s > self.sizes[b]) {
                best = Some(l);
            }
        }
        best
    }

    pub fn largest_size(&self) -> usize {
        self.largest_label().map_or(0, |l| self.sizes[l])
    }
}

pub fn connected_components(graph: &WeightedGraph) -> ClusterLabels {
    let mut uf = UnionFind::new(graph.vertex_count());
    for (u, v, _) in graph.edges() {
        uf.union(u, v);
    }
    ClusterLabels::from_labels(uf.canonical_labels())
}

/// Size of the largest cluster over the vertex count.
pub fn largest_cluster_fraction(labels: &ClusterLabels) -> Result<f64> {
    if labels.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(labels.largest_size() as f64 / labels.vertex_count() as f64)
}

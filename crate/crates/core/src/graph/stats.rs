use serde::{Deserialize, Serialize};

use crate::pointprocess::Region;

use super::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub vertices: usize,
    pub mean: f64,
    pub max: usize,
    /// `histogram[k]` = number of vertices of degree `k`.
    pub histogram: Vec<usize>,
}

fn stats_over(graph: &WeightedGraph, vertices: impl Iterator<Item = usize>) -> DegreeStats {
    let mut histogram = Vec::new();
    let mut count = 0;
    let mut total = 0usize;
    for v in vertices {
        let k = graph.degree(v);
        if histogram.len() <= k {
            histogram.resize(k + 1, 0);
        }
        histogram[k] += 1;
        total += k;
        count += 1;
    }
    DegreeStats {
        vertices: count,
        mean: if count == 0 { 0.0 } else { total as f64 / count as f64 },
        max: histogram.len().saturating_sub(1),
        histogram,
    }
}

pub fn degree_stats(graph: &WeightedGraph) -> DegreeStats {
    stats_over(graph, 0..graph.vertex_count())
}

/// Degree statistics over vertices at least `layer · half-width` away from
/// every face of `region` (per axis). Needs vertex positions.
pub fn bulk_degree_stats(graph: &WeightedGraph, region: &Region, layer: f64) -> Option<DegreeStats> {
    graph.positions()?;
    let d = region.dim();
    let inside = |v: usize| {
        let x = graph.position(v).expect("positions present");
        (0..d).all(|i| {
            let margin = layer * 0.5 * region.extent(i);
            x[i] - region.lo()[i] >= margin && region.hi()[i] - x[i] >= margin
        })
    };
    Some(stats_over(graph, (0..graph.vertex_count()).filter(|&v| inside(v))))
}

//! Conductance-weighted random walks and effective resistance.

mod profile;
mod resistance;

pub use profile::{outside_box, palm_graph_in_giant, resistance_growth_profile, GrowthProfile, ProfileOptions, ProfileRow, RadiusSummary};
pub use resistance::{
    effective_resistance, effective_resistance_dense, escape_frequency, escape_probability, ResistanceMethod,
    ResistanceResult, DEFAULT_TOLERANCE, DENSE_LIMIT,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::WeightedGraph;
use crate::stream::RngStream;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStats {
    pub start: usize,
    pub horizon: u64,
    pub returns_to_start: u64,
    pub first_return_time: Option<u64>,
    /// Distinct vertices visited, including the start.
    pub range: usize,
}

/// One step from `v`: neighbour chosen with probability `c(v, w) / c(v)`.
pub(crate) fn step(graph: &WeightedGraph, v: usize, rng: &mut impl Rng) -> usize {
    let row = graph.row_conductances(v);
    let total: f64 = row.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, c) in row.iter().enumerate() {
        if u < *c {
            return graph.neighbors(v)[k];
        }
        u -= c;
    }
    *graph.neighbors(v).last().expect("non-isolated vertex")
}

/// Transition probabilities out of `v`, aligned with `graph.neighbors(v)`.
pub fn transition_row(graph: &WeightedGraph, v: usize) -> Vec<f64> {
    let total = graph.total_conductance(v);
    graph.row_conductances(v).iter().map(|c| c / total).collect()
}

pub fn simulate_walk(graph: &WeightedGraph, start: usize, horizon: u64, stream: RngStream) -> Result<WalkStats> {
    graph.check_vertex(start)?;
    if horizon == 0 {
        return invalid("horizon must be at least 1");
    }
    if graph.degree(start) == 0 {
        return Err(Error::IsolatedVertex(start));
    }
    let mut rng = stream.rng();
    let mut visited = vec![false; graph.vertex_count()];
    visited[start] = true;
    let mut range = 1;
    let mut returns = 0;
    let mut first = None;
    let mut v = start;
    for t in 1..=horizon {
        v = step(graph, v, &mut rng);
        if !visited[v] {
            visited[v] = true;
            range += 1;
        }
        if v == start {
            returns += 1;
            first.get_or_insert(t);
        }
    }
    Ok(WalkStats { start, horizon, returns_to_start: returns, first_return_time: first, range })
}

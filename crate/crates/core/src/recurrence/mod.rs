//! Long-edge projection, box cut-sets and the Nash-Williams sum in d = 2.

mod scaling;

pub use scaling::{cutset_scaling_experiment, CutsetRow, RadiusQuantile, ScalingOptions, ScalingReport};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::WeightedGraph;
use crate::pointprocess::{PointCloud, Region};

/// A two-dimensional network with no edge longer than 1 in the 1-norm.
/// Vertices `0..original_count` are the input vertices in order; the rest
/// are subdivision points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedGraph {
    graph: WeightedGraph,
    original_count: usize,
    region: Region,
}

impl ProjectedGraph {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn original_count(&self) -> usize {
        self.original_count
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn max_edge_length(&self) -> f64 {
        self.graph
            .edges()
            .map(|(u, v, _)| one_norm_distance(self.position(u), self.position(v)))
            .fold(0.0, f64::max)
    }

    pub fn position(&self, v: usize) -> &[f64] {
        self.graph.position(v).expect("projected graph carries positions")
    }
}

fn one_norm_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Replaces every edge of 1-norm length `L > 1` by a straight chain of
/// `m = ceil(L)` equal segments, each with conductance `m · c`, so the
/// chain has the resistance `1 / c` of the edge it replaces. Should
/// rounding push a computed segment above length 1, the edge gets one more
/// segment. Shorter edges are kept as they are.
pub fn project_long_edges(graph: &WeightedGraph, cloud: &PointCloud) -> Result<ProjectedGraph> {
    if cloud.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: cloud.dim() });
    }
    if graph.vertex_count() != cloud.len() {
        return invalid("graph and cloud have different vertex counts");
    }
    let mut coords = cloud.coords().to_vec();
    let mut edges = Vec::with_capacity(graph.edge_count());
    let mut next = cloud.len();
    for (u, v, c) in graph.edges() {
        let (a, b) = (cloud.point(u), cloud.point(v));
        let len = one_norm_distance(a, b);
        if len <= 1.0 {
            edges.push((u, v, c));
            continue;
        }
        let mut m = len.ceil() as usize;
        let chain = loop {
            let pts: Vec<[f64; 2]> = (0..=m)
                .map(|k| {
                    let t = k as f64 / m as f64;
                    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
                })
                .collect();
            if pts.windows(2).all(|w| one_norm_distance(&w[0], &w[1]) <= 1.0) {
                break pts;
            }
            m += 1;
        };
        let seg = c * m as f64;
        let mut prev = u;
        for p in &chain[1..m] {
            coords.extend_from_slice(p);
            edges.push((prev, next, seg));
            prev = next;
            next += 1;
        }
        edges.push((prev, v, seg));
    }
    let projected = WeightedGraph::from_weighted_edges(next, &edges)?.with_positions(2, coords)?;
    Ok(ProjectedGraph { graph: projected, original_count: cloud.len(), region: cloud.region().clone() })
}

fn inside(x: &[f64], n: f64) -> bool {
    x.iter().all(|c| c.abs() <= n)
}

/// Edges with exactly one endpoint in the closed box `[-n, n]^2`. The box
/// grown by 1 must fit inside the sampled region.
pub fn cutset(projected: &ProjectedGraph, n: f64) -> Result<Vec<(usize, usize, f64)>> {
    if n < 1.0 {
        return invalid(format!("cut-set radius must be at least 1, got {n}"));
    }
    let r = &projected.region;
    if (0..2).any(|i| r.lo()[i] > -n - 1.0 || r.hi()[i] < n + 1.0) {
        return Err(Error::InvalidRegion(format!("[-{}, {}]^2 does not fit inside the sampled region", n + 1.0, n + 1.0)));
    }
    Ok(projected
        .graph
        .edges()
        .filter(|&(u, v, _)| inside(projected.position(u), n) != inside(projected.position(v), n))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutsetReport {
    pub radii: Vec<f64>,
    /// Total conductance of each cut-set.
    pub conductance: Vec<f64>,
    /// `C_n / (n ln n)`.
    pub normalized: Vec<f64>,
    pub nash_williams_sum: f64,
}

impl CutsetReport {
    pub fn from_conductances(radii: Vec<f64>, conductance: Vec<f64>) -> Self {
        let normalized = radii.iter().zip(&conductance).map(|(n, c)| c / (n * n.ln())).collect();
        let mut report = CutsetReport { radii, conductance, normalized, nash_williams_sum: 0.0 };
        report.nash_williams_sum = nash_williams_bound(&report);
        report
    }
}

/// Cut-set conductances at increasing radii spaced at least 2 apart, so the
/// cut-sets are pairwise disjoint.
pub fn cutset_report(projected: &ProjectedGraph, radii: &[f64]) -> Result<CutsetReport> {
    if radii.windows(2).any(|w| w[1] - w[0] < 2.0) {
        return invalid("radii must increase in steps of at least 2");
    }
    let conductance = radii
        .iter()
        .map(|&n| Ok(cutset(projected, n)?.iter().map(|e| e.2).sum()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(CutsetReport::from_conductances(radii.to_vec(), conductance))
}

/// `Σ 1 / C_n` over the radii with `C_n > 0`; a lower bound on the
/// effective resistance from inside the smallest box to outside the
/// largest one.
pub fn nash_williams_bound(report: &CutsetReport) -> f64 {
    report.conductance.iter().filter(|&&c| c > 0.0).map(|c| 1.0 / c).sum()
}

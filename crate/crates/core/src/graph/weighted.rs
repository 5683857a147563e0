use crate::connection::EdgeList;
use crate::error::{invalid, Error, Result};
use crate::pointprocess::PointCloud;

/// Undirected graph with positive edge conductances in compressed
/// adjacency form. Each row is sorted by neighbour index; parallel edges
/// are merged by adding conductances.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    conductances: Vec<f64>,
    dim: usize,
    positions: Option<Vec<f64>>,
}

impl WeightedGraph {
    pub fn from_weighted_edges(vertex_count: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut half: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * edges.len());
        for &(u, v, c) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), count: vertex_count });
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            if !(c.is_finite() && c > 0.0) {
                return invalid(format!("conductance of ({u}, {v}) must be positive and finite, got {c}"));
            }
            half.push((u, v, c));
            half.push((v, u, c));
        }
        half.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut offsets = vec![0usize; vertex_count + 1];
        let mut neighbors = Vec::with_capacity(half.len());
        let mut conductances: Vec<f64> = Vec::with_capacity(half.len());
        let mut last: Option<(usize, usize)> = None;
        for (u, v, c) in half {
            if last == Some((u, v)) {
                *conductances.last_mut().expect("previous entry") += c;
                continue;
            }
            last = Some((u, v));
            offsets[u + 1] += 1;
            neighbors.push(v);
            conductances.push(c);
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        Ok(WeightedGraph { offsets, neighbors, conductances, dim: 0, positions: None })
    }

    /// Unit-conductance graph.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges: Vec<_> = pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        WeightedGraph::from_weighted_edges(vertex_count, &edges)
    }

    /// Unit-conductance graph of a sampled realization, keeping coordinates.
    pub fn from_cloud(cloud: &PointCloud, edges: &EdgeList) -> Result<Self> {
        WeightedGraph::from_pairs(cloud.len(), edges.pairs())?.with_positions(cloud.dim(), cloud.coords().to_vec())
    }

    pub fn with_positions(mut self, dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() != dim * self.vertex_count() {
            return invalid("position array does not match the vertex count");
        }
        self.dim = dim;
        self.positions = Some(coords);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn row_conductances(&self, v: usize) -> &[f64] {
        &self.conductances[self.offsets[v]..self.offsets[v + 1]]
    }

    /// `c(v) = Σ_{w ~ v} c(v, w)`.
    pub fn total_conductance(&self, v: usize) -> f64 {
        self.row_conductances(v).iter().sum()
    }

    pub fn conductance(&self, u: usize, v: usize) -> Option<f64> {
        let row = self.neighbors(u);
        row.binary_search(&v).ok().map(|k| self.row_conductances(u)[k])
    }

    /// Each undirected edge once as `(u, v, c)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .zip(self.row_conductances(u))
                .filter(move |(v, _)| **v > u)
                .map(move |(v, c)| (u, *v, *c))
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self, v: usize) -> Option<&[f64]> {
        self.positions.as_ref().map(|p| &p[v * self.dim..(v + 1) * self.dim])
    }

    pub fn positions(&self) -> Option<&[f64]> {
        self.positions.as_deref()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, count: self.vertex_count() })
        }
    }
}

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::WeightedGraph;
use crate::stream::RngStream;

use super::step;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Largest reduced system the dense oracle accepts.
pub const DENSE_LIMIT: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResistanceMethod {
    Iterative,
    DenseOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResistanceResult {
    /// `f64::INFINITY` when no sink is reachable from the source.
    pub value: f64,
    /// Relative residual `|b - Lφ| / |b|` of the returned potential.
    pub residual: f64,
    pub method: ResistanceMethod,
}

impl ResistanceResult {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// Grounded Laplacian restricted to the non-sink vertices reachable from the
/// source without passing through a sink.
struct Reduced {
    /// Reduced index → vertex. Index 0 is the source.
    vertices: Vec<usize>,
    index: Vec<usize>,
    touches_sink: bool,
}

const NONE: usize = usize::MAX;

fn reduce(graph: &WeightedGraph, source: usize, sinks: &[usize]) -> Result<Reduced> {
    graph.check_vertex(source)?;
    if sinks.is_empty() {
        return invalid("sink set is empty");
    }
    let n = graph.vertex_count();
    let mut is_sink = vec![false; n];
    for &s in sinks {
        graph.check_vertex(s)?;
        is_sink[s] = true;
    }
    if is_sink[source] {
        return invalid("source belongs to the sink set");
    }
    let mut index = vec![NONE; n];
    let mut vertices = vec![source];
    index[source] = 0;
    let mut touches_sink = false;
    let mut head = 0;
    while head < vertices.len() {
        let v = vertices[head];
        head += 1;
        for &w in graph.neighbors(v) {
            if is_sink[w] {
                touches_sink = true;
            } else if index[w] == NONE {
                index[w] = vertices.len();
                vertices.push(w);
            }
        }
    }
    Ok(Reduced { vertices, index, touches_sink })
}

impl Reduced {
    fn apply(&self, graph: &WeightedGraph, x: &[f64], out: &mut [f64]) {
        for (i, &v) in self.vertices.iter().enumerate() {
            let mut acc = 0.0;
            let mut diag = 0.0;
            for (&w, &c) in graph.neighbors(v).iter().zip(graph.row_conductances(v)) {
                diag += c;
                let j = self.index[w];
                if j != NONE {
                    acc += c * x[j];
                }
            }
            out[i] = diag * x[i] - acc;
        }
    }

    fn relative_residual(&self, graph: &WeightedGraph, x: &[f64]) -> f64 {
        let mut lx = vec![0.0; x.len()];
        self.apply(graph, x, &mut lx);
        lx[0] -= 1.0;
        norm(&lx)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Effective resistance between `source` and the sinks (shorted together)
/// by Jacobi-preconditioned conjugate gradient on the grounded Laplacian
/// with unit current at the source. Stops at relative residual `tol`;
/// more than `ceil(50 sqrt(n))` iterations is an error.
pub fn effective_resistance(graph: &WeightedGraph, source: usize, sinks: &[usize], tol: f64) -> Result<ResistanceResult> {
    let red = reduce(graph, source, sinks)?;
    if !red.touches_sink {
        return Ok(ResistanceResult { value: f64::INFINITY, residual: 0.0, method: ResistanceMethod::Iterative });
    }
    let m = red.vertices.len();
    let inv_diag: Vec<f64> = red.vertices.iter().map(|&v| 1.0 / graph.total_conductance(v)).collect();
    let cap = (50.0 * (graph.vertex_count() as f64).sqrt()).ceil() as usize;

    let mut x = vec![0.0; m];
    let mut r = vec![0.0; m];
    r[0] = 1.0;
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; m];
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    loop {
        let res = norm(&r);
        if res <= tol {
            break;
        }
        if iterations >= cap {
            return Err(Error::SolverDidNotConverge { iterations, residual: res });
        }
        red.apply(graph, &p, &mut ap);
        let step = rz / dot(&p, &ap);
        for i in 0..m {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        for i in 0..m {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
        iterations += 1;
    }
    let residual = red.relative_residual(graph, &x);
    Ok(ResistanceResult { value: x[0], residual, method: ResistanceMethod::Iterative })
}

/// Same quantity by Cholesky factorization of the dense reduced Laplacian.
/// Rejects reduced systems larger than [`DENSE_LIMIT`].
pub fn effective_resistance_dense(graph: &WeightedGraph, source: usize, sinks: &[usize]) -> Result<ResistanceResult> {
    let red = reduce(graph, source, sinks)?;
    if !red.touches_sink {
        return Ok(ResistanceResult { value: f64::INFINITY, residual: 0.0, method: ResistanceMethod::DenseOracle });
    }
    let m = red.vertices.len();
    if m > DENSE_LIMIT {
        return invalid(format!("dense oracle limited to {DENSE_LIMIT} unknowns, got {m}"));
    }
    let mut lap = DMatrix::<f64>::zeros(m, m);
    for (i, &v) in red.vertices.iter().enumerate() {
        for (&w, &c) in graph.neighbors(v).iter().zip(graph.row_conductances(v)) {
            lap[(i, i)] += c;
            let j = red.index[w];
            if j != NONE {
                lap[(i, j)] -= c;
            }
        }
    }
    let mut b = DVector::<f64>::zeros(m);
    b[0] = 1.0;
    let chol = lap.cholesky().ok_or_else(|| Error::InvalidParameter("grounded Laplacian is singular".into()))?;
    let x = chol.solve(&b);
    let residual = red.relative_residual(graph, x.as_slice());
    Ok(ResistanceResult { value: x[0], residual, method: ResistanceMethod::DenseOracle })
}

/// `1 / (c(source) R_eff)`: probability that the walk from `source` hits
/// the sinks before returning. Zero when no sink is reachable.
pub fn escape_probability(graph: &WeightedGraph, source: usize, sinks: &[usize], tol: f64) -> Result<f64> {
    let r = effective_resistance(graph, source, sinks, tol)?;
    if graph.degree(source) == 0 {
        return Err(Error::IsolatedVertex(source));
    }
    Ok(1.0 / (graph.total_conductance(source) * r.value))
}

const WALKS_PER_BLOCK: u64 = 4096;

/// Monte Carlo count of walks from `source` that reach a sink before
/// coming back. Returns `(escapes, walks)`.
pub fn escape_frequency(
    graph: &WeightedGraph,
    source: usize,
    sinks: &[usize],
    walks: u64,
    stream: RngStream,
) -> Result<(u64, u64)> {
    let red = reduce(graph, source, sinks)?;
    if graph.degree(source) == 0 {
        return Err(Error::IsolatedVertex(source));
    }
    if !red.touches_sink {
        return Ok((0, walks));
    }
    let mut is_sink = vec![false; graph.vertex_count()];
    for &s in sinks {
        is_sink[s] = true;
    }
    let blocks = walks.div_ceil(WALKS_PER_BLOCK);
    let escapes = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream.substream("escape", b).rng();
            let count = WALKS_PER_BLOCK.min(walks - b * WALKS_PER_BLOCK);
            let mut hits = 0;
            for _ in 0..count {
                let mut v = step(graph, source, &mut rng);
                loop {
                    if is_sink[v] {
                        hits += 1;
                        break;
                    }
                    if v == source {
                        break;
                    }
                    v = step(graph, v, &mut rng);
                }
            }
            hits
        })
        .sum();
    Ok((escapes, walks))
}

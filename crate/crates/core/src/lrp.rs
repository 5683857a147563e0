//! Bond-site long-range percolation on `{-L, ..., L}^d`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::connection::DEFAULT_PAIR_BUDGET;
use crate::error::{invalid, Error, Result};
use crate::graph::{UnionFind, WeightedGraph};
use crate::renormalization::half_ball;
use crate::stream::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub dim: usize,
    pub side: usize,
    pub lambda: f64,
    pub mu: f64,
    pub alpha: f64,
    /// Largest 1-norm distance at which bonds are drawn; `None` means `side`.
    pub k_max: Option<u64>,
}

impl LatticeParams {
    pub fn new(dim: usize, side: usize, lambda: f64, mu: f64, alpha: f64) -> Self {
        LatticeParams { dim, side, lambda, mu, alpha, k_max: None }
    }

    pub fn bond_probability(&self, k: u64) -> f64 {
        -(-self.lambda / (k as f64).powf(self.alpha)).exp_m1()
    }

    fn width(&self) -> usize {
        2 * self.side + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub params: LatticeParams,
    pub k_max: u64,
    pub stream: RngStream,
    pub open_sites: Vec<bool>,
    /// Open bonds `(x, y)`, `x < y`, in sampling order.
    pub bonds: Vec<(usize, usize)>,
    /// Pairs examined per distance.
    pub examined: BTreeMap<u64, u64>,
    /// Expected number of open bonds among the pairs beyond `k_max`.
    pub skipped_mass: f64,
}

impl LatticeConfig {
    pub fn vertex_count(&self) -> usize {
        self.open_sites.len()
    }

    /// Lattice coordinates of vertex `v` (last axis fastest).
    pub fn coords(&self, mut v: usize) -> Vec<i64> {
        let w = self.params.width();
        let mut x = vec![0; self.params.dim];
        for i in (0..self.params.dim).rev() {
            x[i] = (v % w) as i64 - self.params.side as i64;
            v /= w;
        }
        x
    }

    pub fn distance(&self, a: usize, b: usize) -> u64 {
        self.coords(a).iter().zip(self.coords(b)).map(|(x, y)| x.abs_diff(y)).sum()
    }

    /// `(open, examined)` per distance.
    pub fn bond_frequencies(&self) -> BTreeMap<u64, (u64, u64)> {
        let mut out: BTreeMap<u64, (u64, u64)> = self.examined.iter().map(|(&k, &n)| (k, (0, n))).collect();
        for &(a, b) in &self.bonds {
            out.get_mut(&self.distance(a, b)).expect("examined distance").0 += 1;
        }
        out
    }
}

/// Number of unordered pairs of `{-L..L}^d` at each 1-norm distance.
pub fn pair_counts(dim: usize, side: usize) -> BTreeMap<u64, u128> {
    let w = 2 * side + 1;
    // ordered pairs per axis at coordinate distance j
    let axis: Vec<u128> = (0..w).map(|j| (w - j) as u128 * if j == 0 { 1 } else { 2 }).collect();
    let mut dist = vec![1u128];
    for _ in 0..dim {
        let mut next = vec![0u128; dist.len() + w - 1];
        for (k, &a) in dist.iter().enumerate() {
            for (j, &b) in axis.iter().enumerate() {
                next[k + j] += a * b;
            }
        }
        dist = next;
    }
    dist.iter().enumerate().skip(1).filter(|(_, &n)| n > 0).map(|(k, &n)| (k as u64, n / 2)).collect()
}

pub fn sample_lrp(params: &LatticeParams, stream: RngStream) -> Result<LatticeConfig> {
    let p = params;
    if p.dim == 0 || p.side == 0 {
        return invalid("need dim >= 1 and side >= 1");
    }
    if !(0.0..=1.0).contains(&p.mu) {
        return invalid(format!("mu must lie in [0, 1], got {}", p.mu));
    }
    if !(p.lambda > 0.0) {
        return invalid(format!("lambda must be positive, got {}", p.lambda));
    }
    if !(p.alpha > p.dim as f64) {
        return invalid(format!("alpha must exceed the dimension, got {}", p.alpha));
    }
    let k_max = p.k_max.unwrap_or(p.side as u64);
    if k_max == 0 {
        return invalid("k_max must be at least 1");
    }
    let counts = pair_counts(p.dim, p.side);
    let examined_pairs: u128 = counts.range(..=k_max).map(|(_, n)| n).sum();
    if examined_pairs > DEFAULT_PAIR_BUDGET {
        return Err(Error::PairBudgetExceeded { pairs: examined_pairs, budget: DEFAULT_PAIR_BUDGET });
    }
    let skipped_mass = counts.range(k_max + 1..).map(|(&k, &n)| n as f64 * p.bond_probability(k)).sum();
    let examined = counts.range(..=k_max).map(|(&k, &n)| (k, n as u64)).collect();

    let w = p.width();
    let n = w.pow(p.dim as u32);
    let mut site_rng = stream.substream("sites", 0).rng();
    let open_sites = (0..n).map(|_| site_rng.random::<f64>() < p.mu).collect();

    let probs: Vec<f64> = (0..=k_max).map(|k| if k == 0 { 0.0 } else { p.bond_probability(k) }).collect();
    let offsets = half_ball(p.dim, k_max as i64);
    let mut rng = stream.substream("bonds", 0).rng();
    let mut bonds = Vec::new();
    let mut x = vec![0i64; p.dim];
    for v in 0..n {
        let mut c = v;
        for i in (0..p.dim).rev() {
            x[i] = (c % w) as i64;
            c /= w;
        }
        'offset: for delta in &offsets {
            let mut u = 0usize;
            for i in 0..p.dim {
                let y = x[i] + delta[i];
                if y < 0 || y >= w as i64 {
                    continue 'offset;
                }
                u = u * w + y as usize;
            }
            let k: u64 = delta.iter().map(|d| d.unsigned_abs()).sum();
            if rng.random::<f64>() < probs[k as usize] {
                bonds.push((v.min(u), v.max(u)));
            }
        }
    }
    Ok(LatticeConfig { params: *p, k_max, stream, open_sites, bonds, examined, skipped_mass })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeClusterStats {
    pub sites: usize,
    pub open_sites: usize,
    pub largest: usize,
    /// Largest cluster over open sites; 0 when no site is open.
    pub largest_fraction_open: f64,
    /// Largest cluster over all sites.
    pub largest_fraction_all: f64,
}

/// Clusters of the open sites joined by bonds whose endpoints are both open.
pub fn lattice_cluster_stats(config: &LatticeConfig) -> LatticeClusterStats {
    let n = config.vertex_count();
    let mut uf = UnionFind::new(n);
    for &(a, b) in &config.bonds {
        if config.open_sites[a] && config.open_sites[b] {
            uf.union(a, b);
        }
    }
    let mut size = vec![0usize; n];
    let mut largest = 0;
    let mut open = 0;
    for v in (0..n).filter(|&v| config.open_sites[v]) {
        open += 1;
        let r = uf.find(v);
        size[r] += 1;
        largest = largest.max(size[r]);
    }
    LatticeClusterStats {
        sites: n,
        open_sites: open,
        largest,
        largest_fraction_open: if open == 0 { 0.0 } else { largest as f64 / open as f64 },
        largest_fraction_all: largest as f64 / n as f64,
    }
}

/// Unit-conductance graph on all sites with the bonds between open sites;
/// closed sites are isolated. Positions are the lattice coordinates.
pub fn lattice_graph(config: &LatticeConfig) -> Result<WeightedGraph> {
    let pairs: Vec<(usize, usize)> = config
        .bonds
        .iter()
        .copied()
        .filter(|&(a, b)| config.open_sites[a] && config.open_sites[b])
        .collect();
    let coords: Vec<f64> = (0..config.vertex_count()).flat_map(|v| config.coords(v)).map(|x| x as f64).collect();
    WeightedGraph::from_pairs(config.vertex_count(), &pairs)?.with_positions(config.params.dim, coords)
}

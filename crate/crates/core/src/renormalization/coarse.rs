use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::connection::EdgeList;
use crate::error::{invalid, Error, Result};
use crate::graph::UnionFind;
use crate::pointprocess::PointCloud;
use crate::stats::{wilson, Interval};

use super::{partition_boxes, BoxGrid};

/// `1 - exp(-β² / k^α)`.
pub fn lemma_tr2_bound(beta: usize, k: f64, alpha: f64) -> f64 {
    let b = beta as f64;
    -(-(b * b) / k.powf(alpha)).exp_m1()
}

/// Smallest integer `k` bounding the 1-norm distance between any two points
/// of boxes whose lattice indices differ by `delta`.
pub fn box_distance(delta: &[i64], epsilon: f64) -> u64 {
    let d = delta.len() as f64;
    let l1: i64 = delta.iter().map(|x| x.abs()).sum();
    let sup = 2.0 * epsilon * (l1 as f64 + d);
    (sup - 1e-9).ceil().max(1.0) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseBond {
    pub a: usize,
    pub b: usize,
    /// Box distance in the ambient 1-norm, rounded up.
    pub k: u64,
    /// 1-norm distance of the lattice indices.
    pub lattice_distance: u64,
    pub open: bool,
}

/// Site-bond configuration on the complete boxes of a [`BoxGrid`]. Bonds
/// are recorded only between good sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoarseConfig {
    pub epsilon: f64,
    pub beta: usize,
    pub rho: f64,
    pub alpha: Option<f64>,
    pub max_k: u64,
    pub dims: Vec<usize>,
    /// Lattice index per site.
    pub sites: Vec<Vec<i64>>,
    pub good: Vec<bool>,
    pub bonds: Vec<CoarseBond>,
}

impl CoarseConfig {
    pub fn good_count(&self) -> usize {
        self.good.iter().filter(|g| **g).count()
    }
}

pub fn coarse_graph(cloud: &PointCloud, edges: &EdgeList, epsilon: f64, beta: usize, max_k: u64) -> Result<CoarseConfig> {
    let grid = partition_boxes(cloud, edges, epsilon)?;
    coarse_config(&grid, cloud, edges, beta, max_k)
}

/// Coarse configuration from an existing partition. A bond between two good
/// boxes at box distance at most `max_k` is open iff some edge joins their
/// designated clusters.
pub fn coarse_config(grid: &BoxGrid, cloud: &PointCloud, edges: &EdgeList, beta: usize, max_k: u64) -> Result<CoarseConfig> {
    if beta == 0 {
        return invalid("beta must be at least 1");
    }
    let complete: Vec<usize> = (0..grid.box_count()).filter(|&b| grid.is_complete(b)).collect();
    let mut site_of = vec![usize::MAX; grid.box_count()];
    for (s, &b) in complete.iter().enumerate() {
        site_of[b] = s;
    }
    let good: Vec<bool> = complete.iter().map(|&b| grid.largest_cluster(b) >= beta).collect();

    let mut open = HashSet::new();
    for &(i, j) in edges.pairs() {
        let (si, sj) = (site_of[grid.box_of_point(i)], site_of[grid.box_of_point(j)]);
        if si != sj
            && si != usize::MAX
            && sj != usize::MAX
            && good[si]
            && good[sj]
            && grid.is_designated(i)
            && grid.is_designated(j)
        {
            open.insert((si.min(sj), si.max(sj)));
        }
    }

    let d = grid.dim();
    let eps = grid.epsilon();
    let reach = (((max_k as f64) / (2.0 * eps) - d as f64) + 1e-9).floor().max(-1.0) as i64;
    let offsets = half_ball(d, reach);
    let mut bonds = Vec::new();
    let sites: Vec<Vec<i64>> = complete.iter().map(|&b| grid.index_of(b)).collect();
    for (sa, ka) in sites.iter().enumerate() {
        if !good[sa] {
            continue;
        }
        for delta in &offsets {
            let kb: Vec<i64> = ka.iter().zip(delta).map(|(x, y)| x + y).collect();
            let Some(bb) = grid.linear_of(&kb) else { continue };
            let sb = site_of[bb];
            if sb == usize::MAX || !good[sb] {
                continue;
            }
            let (a, b) = (sa.min(sb), sa.max(sb));
            bonds.push(CoarseBond {
                a,
                b,
                k: box_distance(delta, eps),
                lattice_distance: delta.iter().map(|x| x.unsigned_abs()).sum(),
                open: open.contains(&(a, b)),
            });
        }
    }
    bonds.sort_by_key(|b| (b.a, b.b));
    Ok(CoarseConfig {
        epsilon: eps,
        beta,
        rho: cloud.provenance().rho,
        alpha: edges.provenance().spec.alpha(),
        max_k,
        dims: grid.dims().to_vec(),
        sites,
        good,
        bonds,
    })
}

/// Nonzero lattice offsets with 1-norm at most `reach` whose first nonzero
/// coordinate is positive.
pub(crate) fn half_ball(d: usize, reach: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if reach < 1 {
        return out;
    }
    let side = (2 * reach + 1) as usize;
    for code in 0..side.pow(d as u32) {
        let mut c = code;
        let delta: Vec<i64> = (0..d)
            .map(|_| {
                let x = (c % side) as i64 - reach;
                c /= side;
                x
            })
            .rev()
            .collect();
        let l1: i64 = delta.iter().map(|x| x.abs()).sum();
        if l1 >= 1 && l1 <= reach && delta.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            out.push(delta);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoarseClusterStats {
    pub sites: usize,
    pub good_sites: usize,
    pub largest: usize,
    /// Largest cluster of good sites over all sites.
    pub largest_fraction: f64,
}

pub fn coarse_cluster_stats(config: &CoarseConfig) -> Result<CoarseClusterStats> {
    if config.sites.is_empty() {
        return Err(Error::EmptyConfig);
    }
    let mut uf = UnionFind::new(config.sites.len());
    for b in config.bonds.iter().filter(|b| b.open) {
        uf.union(b.a, b.b);
    }
    let mut size = vec![0usize; config.sites.len()];
    let mut largest = 0;
    for s in (0..config.sites.len()).filter(|&s| config.good[s]) {
        let r = uf.find(s);
        size[r] += 1;
        largest = largest.max(size[r]);
    }
    Ok(CoarseClusterStats {
        sites: config.sites.len(),
        good_sites: config.good_count(),
        largest,
        largest_fraction: largest as f64 / config.sites.len() as f64,
    })
}

/// Open-bond frequency among recorded bonds, grouped by a distance key.
pub fn bond_frequencies(config: &CoarseConfig, key: impl Fn(&CoarseBond) -> u64) -> BTreeMap<u64, (u64, u64)> {
    let mut out: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for b in &config.bonds {
        let e = out.entry(key(b)).or_default();
        e.0 += b.open as u64;
        e.1 += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DominationMode {
    LongRange { lambda: f64, mu: f64 },
    NearestNeighbor { p_c: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub empirical: Interval,
    pub reference: f64,
    /// Lower confidence bound at or above the reference.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub site_frequency: Interval,
    pub comparisons: Vec<Comparison>,
}

impl DominationReport {
    pub fn all_pass(&self) -> bool {
        !self.comparisons.is_empty() && self.comparisons.iter().all(|c| c.pass)
    }
}

/// Compares coarse frequencies with a reference model using Wilson
/// intervals at normal quantile `z`. Bond distances are lattice distances.
pub fn domination_report(configs: &[CoarseConfig], mode: DominationMode, z: f64) -> Result<DominationReport> {
    let sites: u64 = configs.iter().map(|c| c.sites.len() as u64).sum();
    if sites == 0 {
        return Err(Error::EmptyConfig);
    }
    let good: u64 = configs.iter().map(|c| c.good_count() as u64).sum();
    let site_frequency = wilson(good, sites, z);
    let mut per_distance: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for c in configs {
        for (k, (o, t)) in bond_frequencies(c, |b| b.lattice_distance) {
            let e = per_distance.entry(k).or_default();
            e.0 += o;
            e.1 += t;
        }
    }
    let compare = |name: String, empirical: Interval, reference: f64| Comparison {
        name,
        empirical,
        reference,
        pass: empirical.lo.is_finite() && empirical.lo >= reference && empirical.estimate.is_finite(),
    };
    let mut comparisons = Vec::new();
    match mode {
        DominationMode::LongRange { lambda, mu } => {
            comparisons.push(compare("site".into(), site_frequency, mu));
            let alpha = configs[0].alpha.unwrap_or(f64::NAN);
            if per_distance.is_empty() {
                comparisons.push(compare("bond".into(), wilson(0, 0, z), f64::NAN));
            }
            for (k, (o, t)) in per_distance {
                let reference = -(-lambda / (k as f64).powf(alpha)).exp_m1();
                comparisons.push(compare(format!("bond k={k}"), wilson(o, t, z), reference));
            }
        }
        DominationMode::NearestNeighbor { p_c } => {
            let (o, t) = per_distance.get(&1).copied().unwrap_or((0, 0));
            let bond = wilson(o, t, z);
            let product = Interval {
                estimate: bond.estimate * site_frequency.estimate,
                lo: if t == 0 { f64::NAN } else { bond.lo * site_frequency.lo },
                hi: bond.hi * site_frequency.hi,
            };
            comparisons.push(compare("adjacent bond x site".into(), product, p_c));
        }
    }
    Ok(DominationReport { site_frequency, comparisons })
}

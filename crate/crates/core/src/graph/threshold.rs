use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::{sample_edges, ConnectionSpec, EdgeSampling};
use crate::error::{invalid, Error, Result};
use crate::pointprocess::{sample_poisson, Region};
use crate::stream::RngStream;

use super::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    pub rho_lo: f64,
    pub rho_hi: f64,
    /// Stop once `hi - lo <= rel_width * midpoint`.
    pub rel_width: f64,
    pub max_probes: usize,
    pub sampling: EdgeSampling,
}

impl ThresholdSearch {
    pub fn new(rho_lo: f64, rho_hi: f64) -> Self {
        ThresholdSearch { rho_lo, rho_hi, rel_width: 0.05, max_probes: 40, sampling: EdgeSampling::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
    /// Every evaluated `(rho, mean largest-cluster fraction)`.
    pub probes: Vec<(f64, f64)>,
}

/// One replica at the top intensity; lower intensities are independent
/// thinnings of it, so every probe reuses the same randomness.
struct Replica {
    marks: Vec<f64>,
    pairs: Vec<(usize, usize)>,
}

impl Replica {
    fn largest_fraction(&self, keep: f64) -> f64 {
        let n = self.marks.len();
        let kept = self.marks.iter().filter(|&&u| u < keep).count();
        if kept == 0 {
            return 0.0;
        }
        let mut uf = UnionFind::new(n);
        for &(i, j) in &self.pairs {
            if self.marks[i] < keep && self.marks[j] < keep {
                uf.union(i, j);
            }
        }
        let mut size = vec![0usize; n];
        let mut best = 0;
        for v in (0..n).filter(|&v| self.marks[v] < keep) {
            let r = uf.find(v);
            size[r] += 1;
            best = best.max(size[r]);
        }
        best as f64 / kept as f64
    }
}

/// Bisection on `rho` of the Monte Carlo mean largest-cluster fraction.
pub fn estimate_percolation_threshold(
    spec: &ConnectionSpec,
    region: &Region,
    fraction_target: f64,
    replicas: usize,
    search: &ThresholdSearch,
    stream: RngStream,
) -> Result<ThresholdEstimate> {
    if !(fraction_target > 0.0 && fraction_target < 1.0) {
        return invalid(format!("fraction target must lie in (0, 1), got {fraction_target}"));
    }
    if replicas == 0 {
        return invalid("replicas must be positive");
    }
    if !(search.rho_lo >= 0.0 && search.rho_hi > search.rho_lo && search.rho_hi.is_finite()) {
        return invalid("need 0 <= rho_lo < rho_hi < inf");
    }
    let top = search.rho_hi;
    let reps: Vec<Replica> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let cloud = sample_poisson(region, top, stream.substream("points", r))?;
            let edges = sample_edges(&cloud, spec, stream.substream("edges", r), &search.sampling)?;
            let mut rng = stream.substream("thinning", r).rng();
            let marks = (0..cloud.len()).map(|_| rng.random::<f64>()).collect();
            Ok(Replica { marks, pairs: edges.pairs().to_vec() })
        })
        .collect::<Result<_>>()?;

    let mut probes = Vec::new();
    let mut probe = |rho: f64| {
        let keep = rho / top;
        let f = reps.iter().map(|r| r.largest_fraction(keep)).sum::<f64>() / replicas as f64;
        probes.push((rho, f));
        f
    };

    let (mut lo, mut hi) = (search.rho_lo, search.rho_hi);
    if probe(lo) >= fraction_target {
        return Ok(ThresholdEstimate { estimate: lo, lo, hi: lo, probes });
    }
    let f_hi = probe(hi);
    if f_hi < fraction_target {
        return Err(Error::NotBracketing(format!(
            "mean largest fraction {f_hi:.4} at rho = {hi} is below target {fraction_target}"
        )));
    }
    for _ in 0..search.max_probes {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= search.rel_width * mid {
            break;
        }
        if probe(mid) >= fraction_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdEstimate { estimate: 0.5 * (lo + hi), lo, hi, probes })
}

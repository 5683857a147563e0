use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::{sample_edges, ConnectionSpec, EdgeSampling};
use crate::error::{invalid, Error, Result};
use crate::graph::WeightedGraph;
use crate::pointprocess::{sample_poisson, Region};
use crate::stats::{bootstrap, quantile, Interval};
use crate::stream::RngStream;

use super::{cutset_report, project_long_edges, nash_williams_bound, CutsetReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    pub rho: f64,
    pub radii: Vec<f64>,
    pub replicas: usize,
    /// Half-width of the sampled square; at least `max radius + 1`.
    pub half_width: f64,
    pub quantile: f64,
    pub bootstrap_resamples: usize,
    pub level: f64,
    pub sampling: EdgeSampling,
}

impl ScalingOptions {
    pub fn new(rho: f64, radii: Vec<f64>, replicas: usize, half_width: f64) -> Self {
        ScalingOptions {
            rho,
            radii,
            replicas,
            half_width,
            quantile: 0.9,
            bootstrap_resamples: 2000,
            level: 0.95,
            sampling: EdgeSampling::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutsetRow {
    pub replica: usize,
    pub n: f64,
    pub c_n: f64,
    pub c_n_over_nlogn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusQuantile {
    pub n: f64,
    /// Quantile of `C_n / (n ln n)` with its bootstrap interval.
    pub normalized: Interval,
    pub zero_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<CutsetRow>,
    pub quantiles: Vec<RadiusQuantile>,
    /// Mean over replicas of each replica's Nash-Williams sum.
    pub mean_nash_williams_sum: f64,
}

/// Monte Carlo distribution of the cut-set conductances of the projected
/// graph, one independent realization per replica.
pub fn cutset_scaling_experiment(spec: &ConnectionSpec, options: &ScalingOptions, stream: RngStream) -> Result<ScalingReport> {
    if spec.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: spec.dim() });
    }
    if options.replicas == 0 || options.radii.is_empty() {
        return invalid("need at least one radius and one replica");
    }
    let region = Region::cube(2, options.half_width)?;
    let reports: Vec<CutsetReport> = (0..options.replicas)
        .into_par_iter()
        .map(|r| {
            let rs = stream.substream("replica", r as u64);
            let cloud = sample_poisson(&region, options.rho, rs.substream("points", 0))?;
            let edges = sample_edges(&cloud, spec, rs.substream("edges", 0), &options.sampling)?;
            let graph = WeightedGraph::from_cloud(&cloud, &edges)?;
            let projected = project_long_edges(&graph, &cloud)?;
            cutset_report(&projected, &options.radii)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(options.replicas * options.radii.len());
    for (r, rep) in reports.iter().enumerate() {
        for k in 0..rep.radii.len() {
            rows.push(CutsetRow { replica: r, n: rep.radii[k], c_n: rep.conductance[k], c_n_over_nlogn: rep.normalized[k] });
        }
    }
    let q = options.quantile;
    let quantiles = options
        .radii
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let xs: Vec<f64> = reports.iter().map(|rep| rep.normalized[k]).collect();
            RadiusQuantile {
                n,
                normalized: bootstrap(
                    &xs,
                    |s| quantile(s, q),
                    options.bootstrap_resamples,
                    options.level,
                    stream.substream("bootstrap", k as u64),
                ),
                zero_count: reports.iter().filter(|rep| rep.conductance[k] == 0.0).count(),
            }
        })
        .collect();
    let mean_nash_williams_sum = reports.iter().map(nash_williams_bound).sum::<f64>() / reports.len() as f64;
    Ok(ScalingReport { rows, quantiles, mean_nash_williams_sum })
}

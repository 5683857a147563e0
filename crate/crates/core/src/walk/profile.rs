use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::{sample_edges, ConnectionSpec, EdgeSampling};
use crate::error::{invalid, Error, Result};
use crate::graph::{connected_components, WeightedGraph};
use crate::pointprocess::{palm_condition, sample_poisson, Region};
use crate::stats::{mean, std_error, Interval};
use crate::stream::RngStream;

use super::{effective_resistance, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    pub rho: f64,
    pub radii: Vec<f64>,
    pub replicas: usize,
    /// Half-width of the cubic simulation window; must exceed every radius.
    pub half_width: f64,
    pub max_attempts: usize,
    pub tol: f64,
    pub sampling: EdgeSampling,
}

impl ProfileOptions {
    pub fn new(rho: f64, radii: Vec<f64>, replicas: usize, half_width: f64) -> Self {
        ProfileOptions {
            rho,
            radii,
            replicas,
            half_width,
            max_attempts: 100,
            tol: DEFAULT_TOLERANCE,
            sampling: EdgeSampling::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: f64,
    pub replica: usize,
    /// NaN for dropped replicas, infinite when no sink is reachable.
    pub r_eff: f64,
    pub residual: f64,
    pub dropped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSummary {
    pub n: f64,
    /// Mean of the finite values with a 95% normal interval.
    pub mean: Interval,
    pub finite: usize,
    pub infinite: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub rows: Vec<ProfileRow>,
    pub summaries: Vec<RadiusSummary>,
    pub dropped: usize,
    /// Total resamples spent getting the origin into the largest cluster.
    pub resamples: usize,
}

/// Vertices outside the closed sup-norm box `[-n, n]^d`.
pub fn outside_box(graph: &WeightedGraph, n: f64) -> Vec<usize> {
    (0..graph.vertex_count())
        .filter(|&v| graph.position(v).is_some_and(|x| x.iter().any(|c| c.abs() > n)))
        .collect()
}

/// Palm-conditioned realization whose origin (vertex 0) lies in the
/// largest cluster, with the number of resamples used.
pub fn palm_graph_in_giant(
    spec: &ConnectionSpec,
    region: &Region,
    rho: f64,
    sampling: &EdgeSampling,
    max_attempts: usize,
    stream: RngStream,
) -> Result<Option<(WeightedGraph, usize)>> {
    for attempt in 0..max_attempts as u64 {
        let cloud = palm_condition(&sample_poisson(region, rho, stream.substream("points", attempt))?)?;
        let edges = sample_edges(&cloud, spec, stream.substream("edges", attempt), sampling)?;
        let graph = WeightedGraph::from_cloud(&cloud, &edges)?;
        let labels = connected_components(&graph);
        if labels.largest_label() == Some(labels.label(0)) && graph.degree(0) > 0 {
            return Ok(Some((graph, attempt as usize)));
        }
    }
    Ok(None)
}

/// Effective resistance from the origin to everything outside `[-n, n]^d`,
/// per radius and replica. Each replica uses one graph for all radii.
pub fn resistance_growth_profile(spec: &ConnectionSpec, options: &ProfileOptions, stream: RngStream) -> Result<GrowthProfile> {
    if options.radii.is_empty() || options.replicas == 0 {
        return invalid("need at least one radius and one replica");
    }
    if options.radii.iter().any(|&n| !(n > 0.0 && n < options.half_width)) {
        return invalid("every radius must lie in (0, half_width)");
    }
    let region = Region::cube(spec.dim(), options.half_width)?;
    let per_replica: Vec<(Vec<ProfileRow>, usize, bool)> = (0..options.replicas)
        .into_par_iter()
        .map(|r| {
            let rs = stream.substream("replica", r as u64);
            match palm_graph_in_giant(spec, &region, options.rho, &options.sampling, options.max_attempts, rs)? {
                None => {
                    let rows = options
                        .radii
                        .iter()
                        .map(|&n| ProfileRow { n, replica: r, r_eff: f64::NAN, residual: f64::NAN, dropped: true })
                        .collect();
                    Ok((rows, options.max_attempts, true))
                }
                Some((graph, attempts)) => {
                    let mut rows = Vec::with_capacity(options.radii.len());
                    for &n in &options.radii {
                        let sinks = outside_box(&graph, n);
                        let res = if sinks.is_empty() {
                            None
                        } else {
                            Some(effective_resistance(&graph, 0, &sinks, options.tol)?)
                        };
                        rows.push(ProfileRow {
                            n,
                            replica: r,
                            r_eff: res.map_or(f64::INFINITY, |x| x.value),
                            residual: res.map_or(0.0, |x| x.residual),
                            dropped: false,
                        });
                    }
                    Ok((rows, attempts, false))
                }
            }
        })
        .collect::<Result<_>>()?;

    let dropped = per_replica.iter().filter(|x| x.2).count();
    if dropped == options.replicas {
        return Err(Error::AllReplicasDropped(options.replicas * options.max_attempts));
    }
    let resamples = per_replica.iter().map(|x| x.1).sum();
    let rows: Vec<ProfileRow> = per_replica.into_iter().flat_map(|x| x.0).collect();
    let summaries = options
        .radii
        .iter()
        .map(|&n| {
            let kept: Vec<&ProfileRow> = rows.iter().filter(|row| row.n == n && !row.dropped).collect();
            let finite: Vec<f64> = kept.iter().map(|row| row.r_eff).filter(|v| v.is_finite()).collect();
            let m = mean(&finite);
            let half = if finite.len() > 1 { 1.96 * std_error(&finite) } else { f64::NAN };
            RadiusSummary {
                n,
                mean: Interval { estimate: m, lo: m - half, hi: m + half },
                finite: finite.len(),
                infinite: kept.len() - finite.len(),
            }
        })
        .collect();
    Ok(GrowthProfile { rows, summaries, dropped, resamples })
}

//! One runner per subcommand. Each turns a resolved [`Config`] into named
//! artifacts and an optional statistical check.

use rayon::prelude::*;
use serde::Serialize;

use rcm_core::connection::{integrate_connection, integrate_kernel, integrate_opposite_quadrants, TruncationReport};
use rcm_core::graph::{ThresholdSearch, DegreeStats};
use rcm_core::lrp::{lattice_cluster_stats, LatticeClusterStats};
use rcm_core::recurrence::ScalingOptions;
use rcm_core::renormalization::{bond_frequencies, coarse_cluster_stats, CoarseClusterStats, DominationReport};
use rcm_core::snapshot::{write_lattice, write_snapshot};
use rcm_core::stats::{binomial_sigma, mean, std_error};
use rcm_core::walk::{escape_frequency, outside_box, palm_graph_in_giant, ProfileOptions, RadiusSummary, DEFAULT_TOLERANCE};
use rcm_core::*;
use std::result::Result;

use crate::config::Config;
use crate::CliError;

pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

pub struct Check {
    pub passed: bool,
    pub detail: String,
}

#[derive(Default)]
pub struct Output {
    pub artifacts: Vec<Artifact>,
    pub check: Option<Check>,
}

impl Output {
    fn push(&mut self, name: &str, bytes: Vec<u8>) {
        self.artifacts.push(Artifact { name: name.to_string(), bytes });
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
        bytes.push(b'\n');
        self.push(name, bytes);
        Ok(())
    }
}

struct Csv(csv::Writer<Vec<u8>>);

impl Csv {
    fn new(header: &[&str]) -> Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        Csv(w)
    }

    fn row(&mut self, fields: &[String]) {
        self.0.write_record(fields).expect("in-memory write");
    }

    fn finish(self) -> Vec<u8> {
        self.0.into_inner().expect("in-memory flush")
    }
}

/// Shortest round-trip form, in exponent notation for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x.is_finite() && a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub fn execute(cfg: &Config) -> Result<Output, CliError> {
    match cfg.command() {
        "sample" => sample(cfg),
        "percolate" => percolate(cfg),
        "walk" => walk(cfg),
        "resistance-profile" => resistance_profile(cfg),
        "cutsets" => cutsets(cfg),
        "renormalize" => renormalize(cfg),
        "lrp" => lrp(cfg),
        "integrals" => integrals(cfg),
        "threshold" => threshold(cfg),
        other => Err(CliError::Config(format!("unknown command {other:?}"))),
    }
}

fn config_err(e: impl ToString) -> CliError {
    CliError::Config(e.to_string())
}

pub fn connection_spec(cfg: &Config) -> Result<ConnectionSpec, CliError> {
    let d: usize = cfg.get("d")?;
    let alpha: f64 = cfg.get("alpha")?;
    let trunc: Option<f64> = cfg.optional("trunc-M")?;
    let blob: Option<f64> = cfg.optional("blob-R")?;
    let kind = cfg.raw("kernel");
    let kernel = match (kind, trunc, blob) {
        ("polynomial_tail", None, None) => Kernel::PolynomialTail { alpha },
        ("truncated", Some(radius), None) => Kernel::Truncated { alpha, radius },
        ("blob", None, Some(radius)) => Kernel::Blob { radius },
        ("truncated", None, _) => return Err(config_err("kernel truncated needs trunc-M")),
        ("blob", _, None) => return Err(config_err("kernel blob needs blob-R")),
        ("polynomial_tail" | "truncated" | "blob", _, _) => {
            return Err(config_err(format!("trunc-M/blob-R given but not used by kernel {kind}")))
        }
        _ => return Err(config_err(format!("unknown kernel {kind:?}"))),
    };
    let norm = match cfg.raw("norm") {
        "one" => Norm::One,
        "two" => Norm::Two,
        other => return Err(config_err(format!("unknown norm {other:?}"))),
    };
    Ok(ConnectionSpec::new(d, kernel, norm)?)
}

fn sampling(cfg: &Config) -> Result<EdgeSampling, CliError> {
    let method = match cfg.raw("sampler") {
        "auto" => SamplingMethod::Auto,
        "exact" => SamplingMethod::Exact,
        "hierarchical" => SamplingMethod::Hierarchical,
        other => return Err(config_err(format!("unknown sampler {other:?}"))),
    };
    let boundary = if cfg.entries().any(|(k, _, _)| k == "boundary") {
        match cfg.raw("boundary") {
            "free" => Boundary::Free,
            "periodic" => Boundary::Periodic,
            other => return Err(config_err(format!("unknown boundary {other:?}"))),
        }
    } else {
        Boundary::Free
    };
    Ok(EdgeSampling { method, boundary, ..EdgeSampling::default() })
}

fn root(cfg: &Config) -> Result<RngStream, CliError> {
    Ok(RngStream::root(cfg.get("seed")?))
}

fn region(cfg: &Config) -> Result<Region, CliError> {
    Ok(Region::cube(cfg.get("d")?, cfg.get("half-width")?)?)
}

fn positive_replicas(cfg: &Config) -> Result<usize, CliError> {
    let r: usize = cfg.get("replicas")?;
    if r == 0 {
        return Err(config_err("replicas must be at least 1"));
    }
    Ok(r)
}

fn alpha_field(spec: &ConnectionSpec) -> String {
    spec.alpha().map(num).unwrap_or_default()
}

fn realization(
    spec: &ConnectionSpec,
    region: &Region,
    rho: f64,
    sampling: &EdgeSampling,
    stream: RngStream,
) -> Result<(PointCloud, EdgeList), CliError> {
    let cloud = sample_poisson(region, rho, stream.substream("points", 0))?;
    let edges = sample_edges(&cloud, spec, stream.substream("edges", 0), sampling)?;
    Ok((cloud, edges))
}

#[derive(Serialize)]
struct SampleSummary {
    n_points: usize,
    n_edges: usize,
    mean_degree: f64,
    max_degree: usize,
    clusters: usize,
    largest_fraction: f64,
}

fn sample(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    let region = region(cfg)?;
    let root = root(cfg)?;
    let mut cloud = sample_poisson(&region, cfg.get("rho")?, root.substream("points", 0))?;
    if cfg.get::<bool>("palm")? {
        cloud = palm_condition(&cloud)?;
    }
    let edges = sample_edges(&cloud, &spec, root.substream("edges", 0), &sampling(cfg)?)?;
    let (degree, labels) = if cloud.is_empty() {
        (DegreeStats { vertices: 0, mean: 0.0, max: 0, histogram: Vec::new() }, None)
    } else {
        let g = WeightedGraph::from_cloud(&cloud, &edges)?;
        (degree_stats(&g), Some(connected_components(&g)))
    };
    let summary = SampleSummary {
        n_points: cloud.len(),
        n_edges: edges.len(),
        mean_degree: degree.mean,
        max_degree: degree.max,
        clusters: labels.as_ref().map_or(0, |l| l.cluster_count()),
        largest_fraction: labels.as_ref().map_or(Ok(0.0), largest_cluster_fraction)?,
    };
    let mut out = Output::default();
    out.push("snapshot.rcm1", write_snapshot(&cloud, Some(&edges)).into_bytes());
    out.json("summary.json", &summary)?;
    Ok(out)
}

struct ClusterRow {
    n_points: usize,
    n_edges: usize,
    largest_fraction: f64,
    mean_degree: f64,
}

#[derive(Serialize)]
struct IntensitySummary {
    rho: f64,
    replicas: usize,
    largest_fraction_mean: f64,
    largest_fraction_se: f64,
    mean_degree_mean: f64,
    predicted_mean_degree: f64,
}

fn percolate(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    let region = region(cfg)?;
    let sampling = sampling(cfg)?;
    let root = root(cfg)?;
    let replicas = positive_replicas(cfg)?;
    let rhos: Vec<f64> = cfg.list("rhos")?;
    let mut csv = Csv::new(&["rho", "replica", "n_points", "n_edges", "largest_fraction", "mean_degree"]);
    let mut summaries = Vec::new();
    for (i, &rho) in rhos.iter().enumerate() {
        let base = root.substream("rho", i as u64);
        let rows = (0..replicas)
            .into_par_iter()
            .map(|r| {
                let (cloud, edges) = realization(&spec, &region, rho, &sampling, base.substream("replica", r as u64))?;
                if cloud.is_empty() {
                    return Ok(ClusterRow { n_points: 0, n_edges: 0, largest_fraction: 0.0, mean_degree: 0.0 });
                }
                let g = WeightedGraph::from_cloud(&cloud, &edges)?;
                Ok(ClusterRow {
                    n_points: cloud.len(),
                    n_edges: edges.len(),
                    largest_fraction: largest_cluster_fraction(&connected_components(&g))?,
                    mean_degree: degree_stats(&g).mean,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        for (r, row) in rows.iter().enumerate() {
            csv.row(&[
                num(rho),
                r.to_string(),
                row.n_points.to_string(),
                row.n_edges.to_string(),
                num(row.largest_fraction),
                num(row.mean_degree),
            ]);
        }
        let fr: Vec<f64> = rows.iter().map(|r| r.largest_fraction).collect();
        let deg: Vec<f64> = rows.iter().map(|r| r.mean_degree).collect();
        summaries.push(IntensitySummary {
            rho,
            replicas,
            largest_fraction_mean: mean(&fr),
            largest_fraction_se: if replicas > 1 { std_error(&fr) } else { 0.0 },
            mean_degree_mean: mean(&deg),
            predicted_mean_degree: mean_degree_prediction(&spec, rho, Tolerance::absolute(1e-8))?.value,
        });
    }
    let mut out = Output::default();
    out.push("cluster_stats.csv", csv.finish());
    out.json("percolation.json", &summaries)?;
    Ok(out)
}

struct WalkReplica {
    walk: Option<WalkStats>,
    resistance: Vec<(f64, f64, f64)>,
    escape: Vec<EscapeRow>,
}

#[derive(Serialize, Clone)]
struct EscapeRow {
    replica: usize,
    n: f64,
    predicted: f64,
    hits: u64,
    walks: u64,
    z: f64,
}

fn walk(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    let region = region(cfg)?;
    let sampling = sampling(cfg)?;
    let root = root(cfg)?;
    let replicas = positive_replicas(cfg)?;
    let rho: f64 = cfg.get("rho")?;
    let horizon: u64 = cfg.get("horizon")?;
    let radii: Vec<f64> = cfg.list("radii")?;
    let escape_walks: u64 = cfg.get("escape-walks")?;
    let half: f64 = cfg.get("half-width")?;
    if let Some(&n) = radii.iter().find(|&&n| !(n > 0.0 && n < half)) {
        return Err(config_err(format!("radius {n} must lie in (0, half-width)")));
    }
    let results = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let stream = root.substream("replica", r as u64);
            let Some((g, _)) = palm_graph_in_giant(&spec, &region, rho, &sampling, 100, stream)? else {
                return Ok(WalkReplica { walk: None, resistance: Vec::new(), escape: Vec::new() });
            };
            let walk = simulate_walk(&g, 0, horizon, stream.substream("walk", 0))?;
            let mut resistance = Vec::new();
            let mut escape = Vec::new();
            for (k, &n) in radii.iter().enumerate() {
                let sinks = outside_box(&g, n);
                if sinks.is_empty() {
                    resistance.push((n, f64::INFINITY, 0.0));
                    continue;
                }
                let res = effective_resistance(&g, 0, &sinks, DEFAULT_TOLERANCE)?;
                resistance.push((n, res.value, res.residual));
                if escape_walks == 0 {
                    continue;
                }
                let p = escape_probability(&g, 0, &sinks, DEFAULT_TOLERANCE)?;
                let (hits, walks) = escape_frequency(&g, 0, &sinks, escape_walks, stream.substream("escape", k as u64))?;
                let sigma = binomial_sigma(p, walks);
                let diff = hits as f64 / walks as f64 - p;
                let z = if sigma > 0.0 { diff / sigma } else if diff.abs() < 1e-12 { 0.0 } else { f64::INFINITY };
                escape.push(EscapeRow { replica: r, n, predicted: p, hits, walks, z });
            }
            Ok(WalkReplica { walk: Some(walk), resistance, escape })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let d = spec.dim().to_string();
    let alpha = alpha_field(&spec);
    let mut walks = Csv::new(&["replica", "horizon", "returns", "first_return", "range", "dropped_flag"]);
    let mut profile = Csv::new(&["d", "alpha", "rho", "n", "replica", "R_eff", "resid", "dropped_flag"]);
    let mut escape_rows = Vec::new();
    for (r, res) in results.iter().enumerate() {
        match &res.walk {
            Some(w) => walks.row(&[
                r.to_string(),
                w.horizon.to_string(),
                w.returns_to_start.to_string(),
                w.first_return_time.map(|t| t.to_string()).unwrap_or_default(),
                w.range.to_string(),
                "0".into(),
            ]),
            None => walks.row(&[r.to_string(), horizon.to_string(), String::new(), String::new(), String::new(), "1".into()]),
        }
        if res.walk.is_none() {
            for &n in &radii {
                profile.row(&[d.clone(), alpha.clone(), num(rho), num(n), r.to_string(), "NaN".into(), "NaN".into(), "1".into()]);
            }
        }
        for &(n, value, resid) in &res.resistance {
            profile.row(&[d.clone(), alpha.clone(), num(rho), num(n), r.to_string(), num(value), num(resid), "0".into()]);
        }
        escape_rows.extend(res.escape.iter().cloned());
    }
    let mut esc = Csv::new(&["replica", "n", "predicted", "hits", "walks", "z"]);
    for e in &escape_rows {
        esc.row(&[e.replica.to_string(), num(e.n), num(e.predicted), e.hits.to_string(), e.walks.to_string(), num(e.z)]);
    }
    let worst = escape_rows.iter().map(|e| e.z.abs()).fold(0.0, f64::max);
    let mut out = Output::default();
    out.push("walks.csv", walks.finish());
    out.push("resistance_profile.csv", profile.finish());
    out.push("escape.csv", esc.finish());
    out.check = Some(Check {
        passed: worst <= 4.0,
        detail: format!("escape frequency vs 1/(c R_eff): {} comparisons, max |z| = {worst:.3}", escape_rows.len()),
    });
    Ok(out)
}

#[derive(Serialize)]
struct ProfileSummary {
    summaries: Vec<RadiusSummary>,
    dropped: usize,
    resamples: usize,
}

fn resistance_profile(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    let rho: f64 = cfg.get("rho")?;
    let mut options = ProfileOptions::new(rho, cfg.list("radii")?, positive_replicas(cfg)?, cfg.get("half-width")?);
    options.max_attempts = cfg.get("max-attempts")?;
    options.sampling = sampling(cfg)?;
    let profile = resistance_growth_profile(&spec, &options, root(cfg)?)?;
    let d = spec.dim().to_string();
    let alpha = alpha_field(&spec);
    let mut csv = Csv::new(&["d", "alpha", "rho", "n", "replica", "R_eff", "resid", "dropped_flag"]);
    for row in &profile.rows {
        csv.row(&[
            d.clone(),
            alpha.clone(),
            num(rho),
            num(row.n),
            row.replica.to_string(),
            num(row.r_eff),
            num(row.residual),
            (row.dropped as u8).to_string(),
        ]);
    }
    let mut out = Output::default();
    out.push("resistance_profile.csv", csv.finish());
    out.json(
        "resistance_profile.json",
        &ProfileSummary { summaries: profile.summaries, dropped: profile.dropped, resamples: profile.resamples },
    )?;
    Ok(out)
}

#[derive(Serialize)]
struct CutsetSummary {
    alpha: Option<f64>,
    rho: f64,
    quantile: f64,
    quantiles: Vec<recurrence::RadiusQuantile>,
    nash_williams_sum: f64,
}

fn cutsets(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    if spec.dim() != 2 {
        return Err(config_err("cutsets needs d = 2"));
    }
    if !cfg.get::<bool>("contrast")? && !spec.alpha().is_some_and(|a| a >= 4.0) {
        return Err(config_err("cutsets needs alpha >= 4 unless contrast=true"));
    }
    let rho: f64 = cfg.get("rho")?;
    let mut options = ScalingOptions::new(rho, cfg.list("radii")?, positive_replicas(cfg)?, cfg.get("half-width")?);
    options.quantile = cfg.get("quantile")?;
    options.sampling = sampling(cfg)?;
    let report = cutset_scaling_experiment(&spec, &options, root(cfg)?)?;
    let alpha = alpha_field(&spec);
    let mut csv = Csv::new(&["alpha", "rho", "n", "replica", "C_n", "C_n_over_nlogn"]);
    for row in &report.rows {
        csv.row(&[
            alpha.clone(),
            num(rho),
            num(row.n),
            row.replica.to_string(),
            num(row.c_n),
            num(row.c_n_over_nlogn),
        ]);
    }
    let mut out = Output::default();
    out.push("cutsets.csv", csv.finish());
    out.json(
        "cutsets.json",
        &CutsetSummary {
            alpha: spec.alpha(),
            rho,
            quantile: options.quantile,
            quantiles: report.quantiles,
            nash_williams_sum: report.mean_nash_williams_sum,
        },
    )?;
    Ok(out)
}

#[derive(Serialize)]
struct Tr2Row {
    k: u64,
    open: u64,
    total: u64,
    frequency: f64,
    bound: f64,
    pass: bool,
}

#[derive(Serialize)]
struct RenormalizeSummary {
    clusters: Vec<CoarseClusterStats>,
    domination: DominationReport,
    bond_bound: Vec<Tr2Row>,
}

fn renormalize(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    let region = region(cfg)?;
    let sampling = sampling(cfg)?;
    let root = root(cfg)?;
    let replicas = positive_replicas(cfg)?;
    let rho: f64 = cfg.get("rho")?;
    let epsilon: f64 = cfg.get("epsilon")?;
    let beta: usize = cfg.get("beta")?;
    let max_k: u64 = cfg.get("max-k")?;
    let z: f64 = cfg.get("z")?;
    let mode = match cfg.raw("mode") {
        "long_range" => DominationMode::LongRange { lambda: cfg.get("lambda1")?, mu: cfg.get("mu1")? },
        "nearest_neighbor" => DominationMode::NearestNeighbor { p_c: cfg.get("p-c")? },
        other => return Err(config_err(format!("unknown mode {other:?}"))),
    };
    let configs = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let (cloud, edges) = realization(&spec, &region, rho, &sampling, root.substream("replica", r as u64))?;
            Ok(coarse_graph(&cloud, &edges, epsilon, beta, max_k)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut csv = Csv::new(&["epsilon", "beta", "rho", "box_i", "box_j", "k", "both_good", "bond_open", "replica"]);
    let mut clusters = Vec::new();
    for (r, c) in configs.iter().enumerate() {
        for b in &c.bonds {
            let both_good = c.good[b.a] && c.good[b.b];
            csv.row(&[
                num(epsilon),
                beta.to_string(),
                num(rho),
                b.a.to_string(),
                b.b.to_string(),
                b.k.to_string(),
                (both_good as u8).to_string(),
                (b.open as u8).to_string(),
                r.to_string(),
            ]);
        }
        clusters.push(coarse_cluster_stats(c)?);
    }
    let domination = domination_report(&configs, mode, z)?;

    let mut bond_bound = Vec::new();
    if let Kernel::PolynomialTail { alpha } = spec.kernel() {
        let mut pooled = std::collections::BTreeMap::<u64, (u64, u64)>::new();
        for c in &configs {
            for (k, (open, total)) in bond_frequencies(c, |b| b.k) {
                let e = pooled.entry(k).or_default();
                e.0 += open;
                e.1 += total;
            }
        }
        for (k, (open, total)) in pooled {
            let bound = lemma_tr2_bound(beta, k as f64, alpha);
            let frequency = open as f64 / total as f64;
            let pass = frequency >= bound - z * binomial_sigma(bound, total);
            bond_bound.push(Tr2Row { k, open, total, frequency, bound, pass });
        }
    }
    let failed = bond_bound.iter().filter(|r| !r.pass).count();
    let mut out = Output::default();
    out.push("coarse.csv", csv.finish());
    out.check = Some(Check {
        passed: failed == 0,
        detail: format!("bond frequency vs lower bound: {} distances, {failed} below bound - {z} sigma", bond_bound.len()),
    });
    out.json("domination.json", &RenormalizeSummary { clusters, domination, bond_bound })?;
    Ok(out)
}

#[derive(Serialize)]
struct LrpBond {
    k: u64,
    open: u64,
    examined: u64,
    probability: f64,
    z: f64,
}

#[derive(Serialize)]
struct LrpSummary {
    k_max: u64,
    skipped_mass: f64,
    clusters: Vec<LatticeClusterStats>,
    largest_fraction_open_mean: f64,
    largest_fraction_all_mean: f64,
    bonds: Vec<LrpBond>,
}

fn lrp(cfg: &Config) -> Result<Output, CliError> {
    let mut params = LatticeParams::new(cfg.get("d")?, cfg.get("side")?, cfg.get("lambda")?, cfg.get("mu")?, cfg.get("alpha")?);
    params.k_max = cfg.optional("k-max")?;
    let root = root(cfg)?;
    let z: f64 = cfg.get("z")?;
    let configs = (0..positive_replicas(cfg)?)
        .into_par_iter()
        .map(|r| sample_lrp(&params, root.substream("replica", r as u64)))
        .collect::<rcm_core::Result<Vec<_>>>()?;
    let mut pooled = std::collections::BTreeMap::<u64, (u64, u64)>::new();
    for c in &configs {
        for (k, (open, n)) in c.bond_frequencies() {
            let e = pooled.entry(k).or_default();
            e.0 += open;
            e.1 += n;
        }
    }
    let mut csv = Csv::new(&["k", "open", "examined", "probability", "z"]);
    let mut bonds = Vec::new();
    for (k, (open, examined)) in pooled {
        let p = params.bond_probability(k);
        let sigma = binomial_sigma(p, examined) * examined as f64;
        let diff = open as f64 - p * examined as f64;
        let z = if sigma > 0.0 { diff / sigma } else if diff.abs() < 0.5 { 0.0 } else { f64::INFINITY };
        csv.row(&[k.to_string(), open.to_string(), examined.to_string(), num(p), num(z)]);
        bonds.push(LrpBond { k, open, examined, probability: p, z });
    }
    let clusters: Vec<LatticeClusterStats> = configs.iter().map(lattice_cluster_stats).collect();
    let worst = bonds.iter().map(|b| b.z.abs()).fold(0.0, f64::max);
    let summary = LrpSummary {
        k_max: configs[0].k_max,
        skipped_mass: configs[0].skipped_mass,
        largest_fraction_open_mean: mean(&clusters.iter().map(|c| c.largest_fraction_open).collect::<Vec<_>>()),
        largest_fraction_all_mean: mean(&clusters.iter().map(|c| c.largest_fraction_all).collect::<Vec<_>>()),
        clusters,
        bonds,
    };
    let mut out = Output::default();
    out.push("lattice.rcm1", write_lattice(&configs[0]).into_bytes());
    out.push("lrp_bonds.csv", csv.finish());
    out.json("lrp.json", &summary)?;
    out.check = Some(Check {
        passed: worst <= z,
        detail: format!("bond counts vs 1 - exp(-lambda k^-alpha): max |z| = {worst:.3} (limit {z})"),
    });
    Ok(out)
}

#[derive(Serialize)]
struct IntegralSummary {
    kernel: String,
    norm: String,
    kernel_integral: f64,
    kernel_integral_error: f64,
    region_to_complement: Option<TruncationReport>,
    region_to_complement_shrink: Option<Vec<f64>>,
    opposite_quadrants: Option<TruncationReport>,
    opposite_quadrants_shrink: Option<Vec<f64>>,
}

fn integrals(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    let tol = Tolerance::absolute(cfg.get("tol")?);
    let truncation: f64 = cfg.get("truncation")?;
    let gap: f64 = cfg.get("gap")?;
    let total = integrate_kernel(&spec, tol)?;
    let (near, far) = if spec.dim() == 2 {
        let unit = Region::hypercube(2, 0.0, 1.0)?;
        (
            Some(integrate_connection(&spec, &unit, truncation, tol)?),
            Some(integrate_opposite_quadrants(&spec, gap, truncation, tol)?),
        )
    } else {
        (None, None)
    };
    let summary = IntegralSummary {
        kernel: spec.kernel().name().to_string(),
        norm: spec.norm().name().to_string(),
        kernel_integral: total.value,
        kernel_integral_error: total.error,
        region_to_complement_shrink: near.as_ref().map(|r| r.shrink_factors()),
        region_to_complement: near,
        opposite_quadrants_shrink: far.as_ref().map(|r| r.shrink_factors()),
        opposite_quadrants: far,
    };
    let mut out = Output::default();
    out.json("integrals.json", &summary)?;
    Ok(out)
}

fn threshold(cfg: &Config) -> Result<Output, CliError> {
    let spec = connection_spec(cfg)?;
    let region = region(cfg)?;
    let mut search = ThresholdSearch::new(cfg.get("rho-lo")?, cfg.get("rho-hi")?);
    search.rel_width = cfg.get("rel-width")?;
    search.sampling = sampling(cfg)?;
    let est = estimate_percolation_threshold(&spec, &region, cfg.get("target")?, positive_replicas(cfg)?, &search, root(cfg)?)?;
    let mut out = Output::default();
    out.json("threshold.json", &est)?;
    Ok(out)
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Pass substrings (e.g. `c4 c13`) to run a subset.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rcm_core::connection::{integrate_connection, integrate_opposite_quadrants, EdgeSampling};
use rcm_core::graph::bulk_degree_stats;
use rcm_core::lrp::lattice_cluster_stats;
use rcm_core::recurrence::{cutset_report, ScalingOptions};
use rcm_core::renormalization::{bond_frequencies, coarse_cluster_stats};
use rcm_core::stats::{binomial_sigma, linear_fit, mean, pearson, std_error, variance, wilson};
use rcm_core::walk::{escape_frequency, outside_box, palm_graph_in_giant, ProfileOptions};
use rcm_core::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).map(|a| a.to_lowercase()).collect();
    let criteria: [(&str, &str, fn() -> Outcome); 14] = [
        ("c1", "kernel exactness", c1),
        ("c2", "poisson statistics", c2),
        ("c3", "bulk mean degree", c3),
        ("c4", "resistance oracle equivalence", c4),
        ("c5", "escape identity", c5),
        ("c6", "projection correctness", c6),
        ("c7", "nash-williams bound", c7),
        ("c8", "cut-set scaling trend", c8),
        ("c9", "resistance growth trends", c9),
        ("c10", "good-box connection bound", c10),
        ("c11", "good-box monotonicity", c11),
        ("c12", "lattice comparator", c12),
        ("c13", "quadrature convergence", c13),
        ("c14", "manifest reproducibility", c14),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        if !filters.is_empty() && !filters.iter().any(|x| x == id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        println!("{} {} {name}: {} [{secs:.1}s]", if result.pass { "PASS" } else { "FAIL" }, id.to_uppercase(), result.detail);
        if !result.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    RngStream::root(seed).rng()
}

/// Random connected graph: random recursive tree plus extra chords.
fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> WeightedGraph {
    let n = rng.random_range(2..=max_n);
    let mut edges: Vec<(usize, usize, f64)> =
        (1..n).map(|v| (rng.random_range(0..v), v, rng.random_range(0.1..5.0))).collect();
    for _ in 0..rng.random_range(0..=n) {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            edges.push((a, b, rng.random_range(0.1..5.0)));
        }
    }
    WeightedGraph::from_weighted_edges(n, &edges).unwrap()
}

fn random_terminals(rng: &mut ChaCha8Rng, n: usize) -> (usize, Vec<usize>) {
    let source = rng.random_range(0..n);
    let mut sinks: Vec<usize> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..n)).filter(|&v| v != source).collect();
    if sinks.is_empty() {
        sinks.push((source + 1) % n);
    }
    sinks.sort_unstable();
    sinks.dedup();
    (source, sinks)
}

/// Random planar graph with positions in the cube of half-width `half`;
/// vertex 0 sits at the origin.
fn random_planar(rng: &mut ChaCha8Rng, n: usize, extra: usize, half: f64) -> (PointCloud, WeightedGraph) {
    let region = Region::cube(2, half).unwrap();
    let mut pts = vec![vec![0.0, 0.0]];
    while pts.len() < n {
        pts.push(vec![rng.random_range(-half..half), rng.random_range(-half..half)]);
    }
    let cloud = PointCloud::from_points(region, &pts).unwrap();
    let mut edges: Vec<(usize, usize, f64)> =
        (1..n).map(|v| (rng.random_range(0..v), v, rng.random_range(0.2..3.0))).collect();
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            edges.push((a, b, rng.random_range(0.2..3.0)));
        }
    }
    let g = WeightedGraph::from_weighted_edges(n, &edges).unwrap().with_positions(2, cloud.coords().to_vec()).unwrap();
    (cloud, g)
}

fn palm_sample(spec: &ConnectionSpec, half: f64, rho: f64, seed: u64) -> (PointCloud, WeightedGraph) {
    let region = Region::cube(spec.dim(), half).unwrap();
    let root = RngStream::root(seed);
    let cloud = palm_condition(&sample_poisson(&region, rho, root.substream("points", 0)).unwrap()).unwrap();
    let edges = sample_edges(&cloud, spec, root.substream("edges", 0), &EdgeSampling::default()).unwrap();
    let g = WeightedGraph::from_cloud(&cloud, &edges).unwrap();
    (cloud, g)
}

fn one_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

// ---------------------------------------------------------------------------

fn c1() -> Outcome {
    let unit = -(-1.0f64).exp_m1();
    let mut worst: f64 = 0.0;
    let mut exact_fail = 0;
    for alpha in [2.5, 3.0, 4.0, 4.5, 7.25] {
        for (norm, dirs) in [
            (Norm::One, [[1.0, 0.0], [0.25, -0.75], [-0.5, 0.5]]),
            (Norm::Two, [[1.0, 0.0], [0.6, 0.8], [-0.8, 0.6]]),
        ] {
            let tail = ConnectionSpec::polynomial_tail(2, alpha).unwrap().with_norm(norm);
            let trunc = ConnectionSpec::truncated(2, alpha, 2.0).unwrap().with_norm(norm);
            for x in dirs {
                worst = worst.max((eval_connection(&tail, &x) - unit).abs());
                worst = worst.max((eval_connection(&trunc, &x) - unit).abs());
                let far = [x[0] * 2.5, x[1] * 2.5];
                exact_fail += (eval_connection(&trunc, &far) != 0.0) as usize;
                let edge = [x[0] * 2.0, x[1] * 2.0];
                worst = worst.max((eval_connection(&trunc, &edge) - (1.0 - (-(2.0f64).powf(-alpha)).exp())).abs());
            }
        }
    }
    let d3 = ConnectionSpec::polynomial_tail(3, 4.0).unwrap();
    worst = worst.max((eval_connection(&d3, &[0.0, 0.0, 1.0]) - unit).abs());
    let blob = ConnectionSpec::blob(2, 1.5).unwrap();
    for (x, want) in [([1.5, 0.0], 1.0), ([1.5 + 1e-9, 0.0], 0.0), ([0.7, 0.7], 1.0), ([0.8, 0.8], 0.0), ([0.0, 0.0], 1.0)] {
        exact_fail += (eval_connection(&blob, &x) != want) as usize;
    }
    let blob2 = ConnectionSpec::blob(2, 1.0).unwrap().with_norm(Norm::Two);
    for (x, want) in [([0.6, 0.8], 1.0), ([0.6, 0.81], 0.0), ([0.7, 0.7], 1.0)] {
        exact_fail += (eval_connection(&blob2, &x) != want) as usize;
    }

    let specs = [
        ConnectionSpec::polynomial_tail(2, 4.0).unwrap(),
        ConnectionSpec::polynomial_tail(2, 3.0).unwrap().with_norm(Norm::Two),
        ConnectionSpec::truncated(2, 4.5, 1.5).unwrap(),
        ConnectionSpec::blob(2, 1.0).unwrap(),
        ConnectionSpec::polynomial_tail(3, 5.0).unwrap(),
    ];
    let mut r = rng(1);
    let mut asym = 0;
    let mut out_of_range = 0;
    for i in 0..10_000 {
        let spec = &specs[i % specs.len()];
        let x: Vec<f64> = (0..spec.dim()).map(|_| r.random_range(-5.0..5.0)).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let v = eval_connection(spec, &x);
        asym += (v != eval_connection(spec, &neg)) as usize;
        out_of_range += !(0.0..=1.0).contains(&v) as usize;
        let s = spec.norm().of(&x);
        let closed = match spec.kernel() {
            Kernel::PolynomialTail { alpha } => 1.0 - (-s.powf(-alpha)).exp(),
            Kernel::Truncated { alpha, radius } => if s <= radius { 1.0 - (-s.powf(-alpha)).exp() } else { 0.0 },
            Kernel::Blob { radius } => (s <= radius) as u8 as f64,
        };
        worst = worst.max((v - closed).abs());
    }
    outcome(
        worst <= 1e-12 && exact_fail == 0 && asym == 0 && out_of_range == 0,
        format!("max |g - closed form| = {worst:.2e}, indicator mismatches {exact_fail}, asymmetric {asym}, out of range {out_of_range} (10^4 random inputs)"),
    )
}

fn c2() -> Outcome {
    let n = 10_000usize;
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, lambda) in [5.0f64, 50.0, 500.0].into_iter().enumerate() {
        let half = lambda.sqrt() / 2.0;
        let region = Region::cube(2, half).unwrap();
        let base = RngStream::root(2).substream("lambda", i as u64);
        let (counts, (left, right)): (Vec<f64>, (Vec<f64>, Vec<f64>)) = (0..n)
            .into_par_iter()
            .map(|r| {
                let cloud = sample_poisson(&region, 1.0, base.substream("replica", r as u64)).unwrap();
                let l = cloud.points().filter(|p| p[0] < 0.0).count() as f64;
                (cloud.len() as f64, (l, cloud.len() as f64 - l))
            })
            .unzip();
        let m = mean(&counts);
        let s2 = variance(&counts);
        let nf = n as f64;
        let mu4 = lambda + 3.0 * lambda * lambda;
        let var_s2 = mu4 / nf - lambda * lambda * (nf - 3.0) / (nf * (nf - 1.0));
        let z_mean = (m - lambda) / (lambda / nf).sqrt();
        let z_var = (s2 - lambda) / var_s2.sqrt();
        let corr = pearson(&left, &right);
        let fisher = corr.atanh() * (nf - 3.0).sqrt();
        let ok = z_mean.abs() <= 4.0 && z_var.abs() <= 4.0 && fisher.abs() <= 4.0;
        pass &= ok;
        parts.push(format!("rho*vol={lambda}: z_mean {z_mean:+.2}, z_var {z_var:+.2}, corr {corr:+.4} (z {fisher:+.2})"));
    }
    outcome(pass, parts.join("; "))
}

fn c3() -> Outcome {
    let spec = ConnectionSpec::polynomial_tail(2, 4.0).unwrap();
    let rho = 1.0;
    let pred = mean_degree_prediction(&spec, rho, Tolerance::absolute(1e-10)).unwrap();
    let closed = rho * 2.0 * std::f64::consts::PI.sqrt();
    let region = Region::cube(2, 25.0).unwrap();
    let degrees: Vec<f64> = (0..40u64)
        .into_par_iter()
        .map(|s| {
            let root = RngStream::root(3).substream("replica", s);
            let cloud = sample_poisson(&region, rho, root.substream("points", 0)).unwrap();
            let edges = sample_edges(&cloud, &spec, root.substream("edges", 0), &EdgeSampling::default()).unwrap();
            let g = WeightedGraph::from_cloud(&cloud, &edges).unwrap();
            bulk_degree_stats(&g, cloud.region(), 0.2).unwrap().mean
        })
        .collect();
    let m = mean(&degrees);
    let rel = (m - closed).abs() / closed;
    outcome(
        (pred.value - closed).abs() < 1e-7 && rel <= 0.02,
        format!("quadrature {:.9} vs 2*sqrt(pi) {closed:.9}; bulk mean degree {m:.4} ± {:.4} (rel. dev. {:.2}%)", pred.value, std_error(&degrees), 100.0 * rel),
    )
}

fn c4() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = random_graph(&mut r, 50);
        let (s, sinks) = random_terminals(&mut r, g.vertex_count());
        let it = effective_resistance(&g, s, &sinks, 1e-13).unwrap().value;
        let dense = effective_resistance_dense(&g, s, &sinks).unwrap().value;
        worst = worst.max((it - dense).abs());
    }

    let mut law_err: f64 = 0.0;
    for _ in 0..20 {
        // series
        let m = r.random_range(2..30);
        let cs: Vec<f64> = (0..m).map(|_| r.random_range(0.1..5.0)).collect();
        let edges: Vec<(usize, usize, f64)> = cs.iter().enumerate().map(|(i, &c)| (i, i + 1, c)).collect();
        let g = WeightedGraph::from_weighted_edges(m + 1, &edges).unwrap();
        let want: f64 = cs.iter().map(|c| 1.0 / c).sum();
        for got in [effective_resistance(&g, 0, &[m], 1e-14).unwrap().value, effective_resistance_dense(&g, 0, &[m]).unwrap().value] {
            law_err = law_err.max((got - want).abs() / want);
        }
        // parallel paths between 0 and 1
        let mut edges = Vec::new();
        let mut next = 2;
        let mut total = 0.0;
        for _ in 0..r.random_range(2..6) {
            let len = r.random_range(1..5);
            let mut prev = 0;
            let mut series = 0.0;
            for step in 0..len {
                let c = r.random_range(0.1..5.0);
                series += 1.0 / c;
                let to = if step + 1 == len { 1 } else { next };
                if to != 1 {
                    next += 1;
                }
                edges.push((prev, to, c));
                prev = to;
            }
            total += 1.0 / series;
        }
        let g = WeightedGraph::from_weighted_edges(next, &edges).unwrap();
        let want = 1.0 / total;
        for got in [effective_resistance(&g, 0, &[1], 1e-14).unwrap().value, effective_resistance_dense(&g, 0, &[1]).unwrap().value] {
            law_err = law_err.max((got - want).abs() / want);
        }
    }

    let mut violations = 0;
    for _ in 0..100 {
        let g = random_graph(&mut r, 40);
        let n = g.vertex_count();
        let (s, sinks) = random_terminals(&mut r, n);
        let before = effective_resistance_dense(&g, s, &sinks).unwrap().value;
        let mut edges: Vec<(usize, usize, f64)> = g.edges().collect();
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        if a != b {
            edges.push((a, b, r.random_range(0.1..5.0)));
        } else {
            edges[0].2 *= 2.0;
        }
        let h = WeightedGraph::from_weighted_edges(n, &edges).unwrap();
        let after = effective_resistance_dense(&h, s, &sinks).unwrap().value;
        let after_it = effective_resistance(&h, s, &sinks, 1e-13).unwrap().value;
        violations += (after > before * (1.0 + 1e-12) || after_it > before * (1.0 + 1e-9)) as usize;
    }
    outcome(
        worst <= 1e-8 && law_err <= 1e-10 && violations == 0,
        format!("max |CG - dense| = {worst:.2e} on 100 graphs; series/parallel rel. error {law_err:.1e}; Rayleigh violations {violations}/100"),
    )
}

fn c5() -> Outcome {
    let mut fixtures: Vec<(WeightedGraph, usize, Vec<usize>)> = Vec::new();
    let mut r = rng(5);
    while fixtures.len() < 10 {
        let g = random_graph(&mut r, 40);
        let (s, sinks) = random_terminals(&mut r, g.vertex_count());
        fixtures.push((g, s, sinks));
    }
    let spec = ConnectionSpec::polynomial_tail(2, 4.0).unwrap();
    let region = Region::cube(2, 3.0).unwrap();
    let mut seed = 0;
    while fixtures.len() < 20 {
        seed += 1;
        if let Some((g, _)) = palm_graph_in_giant(&spec, &region, 2.0, &EdgeSampling::default(), 100, RngStream::new(50, seed)).unwrap() {
            let sinks = outside_box(&g, 2.0);
            if !sinks.is_empty() {
                fixtures.push((g, 0, sinks));
            }
        }
    }
    let zs: Vec<f64> = fixtures
        .par_iter()
        .enumerate()
        .map(|(i, (g, s, sinks))| {
            let p = escape_probability(g, *s, sinks, 1e-13).unwrap();
            let (hits, n) = escape_frequency(g, *s, sinks, 100_000, RngStream::new(51, i as u64)).unwrap();
            let sigma = binomial_sigma(p, n);
            let diff = hits as f64 / n as f64 - p;
            if sigma > 0.0 { diff / sigma } else if diff.abs() < 1e-12 { 0.0 } else { f64::INFINITY }
        })
        .collect();
    let worst = zs.iter().fold(0.0f64, |a, z| a.max(z.abs()));
    outcome(worst <= 4.0, format!("20 fixtures x 10^5 walks, max |z| = {worst:.2}"))
}

fn c6() -> Outcome {
    let mut instances: Vec<(PointCloud, WeightedGraph)> = Vec::new();
    let mut r = rng(6);
    for _ in 0..25 {
        let n = r.random_range(10..=60);
        instances.push(random_planar(&mut r, n, n / 2, 2.5));
    }
    let spec = ConnectionSpec::polynomial_tail(2, 3.0).unwrap();
    let mut seed = 0;
    while instances.len() < 50 {
        seed += 1;
        let (cloud, g) = palm_sample(&spec, 3.0, 1.2, 600 + seed);
        if cloud.len() <= 60 {
            instances.push((cloud, g));
        }
    }
    let mut max_len: f64 = 0.0;
    let mut short_fail = 0;
    let mut chain_err: f64 = 0.0;
    let mut increases = 0;
    let mut checks = 0;
    let mut largest = 0;
    for (cloud, g) in &instances {
        let p = project_long_edges(g, cloud).unwrap();
        max_len = max_len.max(p.max_edge_length());
        largest = largest.max(p.graph().vertex_count());
        for (u, v, c) in g.edges() {
            let (a, b) = (cloud.point(u), cloud.point(v));
            if one_norm(a, b) <= 1.0 {
                short_fail += (p.graph().conductance(u, v).unwrap_or(0.0) < c) as usize;
            } else {
                let pair = PointCloud::from_points(cloud.region().clone(), &[a.to_vec(), b.to_vec()]).unwrap();
                let single = WeightedGraph::from_weighted_edges(2, &[(0, 1, c)]).unwrap().with_positions(2, pair.coords().to_vec()).unwrap();
                let q = project_long_edges(&single, &pair).unwrap();
                max_len = max_len.max(q.max_edge_length());
                let rq = effective_resistance_dense(q.graph(), 0, &[1]).unwrap().value;
                chain_err = chain_err.max((rq * c - 1.0).abs());
            }
        }
        let labels = connected_components(g);
        for t in (1..g.vertex_count()).filter(|&t| labels.label(t) == labels.label(0)).take(3) {
            let before = effective_resistance_dense(g, 0, &[t]).unwrap().value;
            let after = effective_resistance_dense(p.graph(), 0, &[t]).unwrap().value;
            increases += (after > before * (1.0 + 1e-10)) as usize;
            checks += 1;
        }
    }
    outcome(
        max_len <= 1.0 && short_fail == 0 && chain_err <= 1e-12 && increases == 0 && checks >= 50,
        format!(
            "50 instances (<= 60 vertices, projected up to {largest}): max segment {max_len:.6}, short-edge violations {short_fail}, long-edge chain |R c - 1| <= {chain_err:.1e}, R_eff increases {increases}/{checks}"
        ),
    )
}

fn c7() -> Outcome {
    let mut checked = 0;
    let mut worst_gap = f64::INFINITY;
    let mut violations = 0;
    let mut run = |p: &ProjectedGraph, radii: &[f64], sink_radius: f64| {
        let report = cutset_report(p, radii).unwrap();
        let sinks = outside_box(p.graph(), sink_radius);
        if sinks.is_empty() {
            return;
        }
        let r = effective_resistance_dense(p.graph(), 0, &sinks).unwrap().value;
        let nw = nash_williams_bound(&report);
        violations += (nw > r + 1e-8) as usize;
        if r.is_finite() {
            worst_gap = worst_gap.min(r - nw);
        }
        checked += 1;
    };

    // square lattice on [-4, 4]^2 with unit conductances
    let side = 9;
    let idx = |x: i64, y: i64| ((x + 4) * side + (y + 4)) as usize;
    let mut pts = vec![vec![0.0; 2]; (side * side) as usize];
    let mut edges = Vec::new();
    for x in -4..=4i64 {
        for y in -4..=4i64 {
            pts[idx(x, y)] = vec![x as f64, y as f64];
            if x < 4 {
                edges.push((idx(x, y), idx(x + 1, y), 1.0));
            }
            if y < 4 {
                edges.push((idx(x, y), idx(x, y + 1), 1.0));
            }
        }
    }
    // origin first
    let o = idx(0, 0);
    pts.swap(0, o);
    let relabel = |v: usize| if v == 0 { o } else if v == o { 0 } else { v };
    let edges: Vec<_> = edges.into_iter().map(|(a, b, c)| (relabel(a), relabel(b), c)).collect();
    let cloud = PointCloud::from_points(Region::cube(2, 4.0).unwrap(), &pts).unwrap();
    let g = WeightedGraph::from_weighted_edges(pts.len(), &edges).unwrap().with_positions(2, cloud.coords().to_vec()).unwrap();
    run(&project_long_edges(&g, &cloud).unwrap(), &[1.0, 3.0], 3.0);

    for (i, alpha) in [3.0, 3.5, 4.0, 5.0].into_iter().enumerate() {
        let spec = ConnectionSpec::polynomial_tail(2, alpha).unwrap();
        let mut seed = 0;
        let mut taken = 0;
        while taken < 8 {
            seed += 1;
            let (cloud, g) = palm_sample(&spec, 4.0, 1.0, 700 + 100 * i as u64 + seed);
            if cloud.len() > 100 {
                continue;
            }
            let p = project_long_edges(&g, &cloud).unwrap();
            if p.graph().vertex_count() > 500 {
                continue;
            }
            run(&p, &[1.0, 3.0], 3.0);
            taken += 1;
        }
    }
    outcome(
        violations == 0 && checked >= 30,
        format!("{checked} fixtures, violations {violations}, min (R_eff - sum 1/C) = {worst_gap:.3e}"),
    )
}

fn c8() -> Outcome {
    // one realization per radius in a window of half-width 1.5n
    let run = |alpha: f64, seed: u64| -> Vec<recurrence::RadiusQuantile> {
        let spec = ConnectionSpec::polynomial_tail(2, alpha).unwrap();
        [8.0, 16.0, 32.0, 64.0]
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let options = ScalingOptions::new(2.0, vec![n], 200, 1.5 * n);
                let report = cutset_scaling_experiment(&spec, &options, RngStream::root(seed).substream("radius", i as u64)).unwrap();
                report.quantiles[0].clone()
            })
            .collect()
    };
    let fmt = |q: &[recurrence::RadiusQuantile]| {
        q.iter().map(|q| format!("n={}: {:.3} [{:.3}, {:.3}]", q.n, q.normalized.estimate, q.normalized.lo, q.normalized.hi)).collect::<Vec<_>>().join(", ")
    };
    let q = &run(4.5, 8);
    let non_increasing = q.windows(2).all(|w| w[1].normalized.estimate <= w[0].normalized.hi);
    let c = &run(3.0, 80);
    let increasing = c.windows(2).all(|w| w[1].normalized.estimate > w[0].normalized.estimate)
        && c.last().unwrap().normalized.lo > c[0].normalized.hi;
    outcome(
        non_increasing && increasing,
        format!("window 1.5n; alpha=4.5 q0.9(C/(n ln n)): {}; alpha=3: {}", fmt(q), fmt(c)),
    )
}

fn c9() -> Outcome {
    let radii = vec![2.0, 4.0, 8.0, 16.0];
    let profile = |alpha: f64, seed: u64| {
        let spec = ConnectionSpec::polynomial_tail(2, alpha).unwrap();
        let options = ProfileOptions::new(2.0, radii.clone(), 200, 34.0);
        resistance_growth_profile(&spec, &options, RngStream::root(seed)).unwrap()
    };
    let recurrent = profile(4.5, 9);
    let means: Vec<f64> = recurrent.summaries.iter().map(|s| s.mean.estimate).collect();
    let logs: Vec<f64> = radii.iter().map(|n| n.ln()).collect();
    let fit = linear_fit(&logs, &means);
    let transient = profile(3.0, 90);
    let t: Vec<f64> = transient.summaries.iter().map(|s| s.mean.estimate).collect();
    let inc: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let decreasing = inc.windows(2).all(|w| w[1] < w[0]);
    outcome(
        fit.slope > 0.0 && fit.r_squared >= 0.9 && decreasing,
        format!(
            "window 34; alpha=4.5 mean R_eff {:?}: slope {:.4} per ln n, R^2 {:.4}; alpha=3 mean R_eff {:?}, increments {:?}",
            means.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(),
            fit.slope,
            fit.r_squared,
            t.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(),
            inc.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn c10() -> Outcome {
    let spec = ConnectionSpec::polynomial_tail(2, 3.0).unwrap();
    let region = Region::cube(2, 2.0).unwrap();
    let (eps, rho) = (0.125, 250.0);
    let cells = [(3usize, 1u64), (5, 2), (8, 3)];
    let mut pooled: BTreeMap<(usize, u64), (u64, u64)> = BTreeMap::new();
    let mut replicas = 0u64;
    while replicas < 64 && cells.iter().any(|c| pooled.get(c).map_or(0, |x| x.1) < 1000) {
        let batch: Vec<Vec<(usize, BTreeMap<u64, (u64, u64)>)>> = (replicas..replicas + 4)
            .into_par_iter()
            .map(|r| {
                let root = RngStream::root(10).substream("replica", r);
                let cloud = sample_poisson(&region, rho, root.substream("points", 0)).unwrap();
                let edges = sample_edges(&cloud, &spec, root.substream("edges", 0), &EdgeSampling::default()).unwrap();
                [3usize, 5, 8]
                    .iter()
                    .map(|&beta| (beta, bond_frequencies(&coarse_graph(&cloud, &edges, eps, beta, 3).unwrap(), |b| b.k)))
                    .collect()
            })
            .collect();
        for per_beta in batch {
            for (beta, freq) in per_beta {
                for (k, (o, t)) in freq {
                    let e = pooled.entry((beta, k)).or_default();
                    e.0 += o;
                    e.1 += t;
                }
            }
        }
        replicas += 4;
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (beta, k) in cells {
        let (o, t) = pooled.get(&(beta, k)).copied().unwrap_or((0, 0));
        let bound = lemma_tr2_bound(beta, k as f64, 3.0);
        let f = o as f64 / t.max(1) as f64;
        let ok = t >= 1000 && f >= bound - 4.0 * binomial_sigma(bound, t);
        pass &= ok;
        parts.push(format!("(beta={beta}, k={k}): {o}/{t} = {f:.5} vs bound {bound:.5}"));
    }
    outcome(pass, format!("eps={eps}, rho={rho}, {replicas} replicas; {}", parts.join("; ")))
}

fn c11() -> Outcome {
    let spec = ConnectionSpec::polynomial_tail(2, 4.0).unwrap();
    let region = Region::cube(2, 1.0).unwrap();
    let (eps, beta) = (0.1, 5);
    let rhos = [50.0, 100.0, 150.0, 200.0, 300.0, 400.0];
    let mut freq = Vec::new();
    for (i, &rho) in rhos.iter().enumerate() {
        let (good, sites) = (0..20u64)
            .into_par_iter()
            .map(|r| {
                let root = RngStream::root(11).substream("rho", i as u64).substream("replica", r);
                let cloud = sample_poisson(&region, rho, root.substream("points", 0)).unwrap();
                let edges = sample_edges(&cloud, &spec, root.substream("edges", 0), &EdgeSampling::default()).unwrap();
                let c = coarse_graph(&cloud, &edges, eps, beta, 1).unwrap();
                (c.good_count() as u64, c.sites.len() as u64)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let p = good as f64 / sites as f64;
        freq.push((p, binomial_sigma(p, sites)));
    }
    let monotone = freq.windows(2).all(|w| w[1].0 >= w[0].0 - 4.0 * (w[0].1.powi(2) + w[1].1.powi(2)).sqrt());
    let top = freq.last().unwrap().0;
    outcome(
        monotone && top > 0.9,
        format!(
            "eps={eps}, beta={beta}, alpha=4: P(good) {}",
            rhos.iter().zip(&freq).map(|(r, (p, s))| format!("rho={r}: {p:.4}±{s:.4}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c12() -> Outcome {
    // bond frequencies of the lattice model
    let mut worst: f64 = 0.0;
    let mut distances = 0;
    let line = LatticeParams { k_max: Some(10), ..LatticeParams::new(1, 200, 0.5, 0.7, 2.5) };
    for (params, seed, replicas) in [(LatticeParams::new(2, 10, 1.0, 1.0, 3.0), 12u64, 20u64), (line, 13, 100)] {
        let configs: Vec<LatticeConfig> =
            (0..replicas).into_par_iter().map(|r| sample_lrp(&params, RngStream::root(seed).substream("replica", r)).unwrap()).collect();
        let mut pooled: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
        for c in &configs {
            for (k, (o, n)) in c.bond_frequencies() {
                let e = pooled.entry(k).or_default();
                e.0 += o;
                e.1 += n;
            }
        }
        for (k, (o, n)) in pooled {
            let p = params.bond_probability(k);
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            let z = if sd > 0.0 { (o as f64 - n as f64 * p) / sd } else { 0.0 };
            worst = worst.max(z.abs());
            distances += 1;
        }
    }
    let freq_ok = worst <= 4.0;

    // domination sanity on matched lattices: calibrate (lambda, mu) on one
    // set of coarse configurations, test on fresh ones, then compare clusters
    let spec = ConnectionSpec::polynomial_tail(2, 3.0).unwrap();
    let (eps, beta, rho, side, alpha) = (0.1, 3usize, 150.0, 8usize, 3.0);
    let region = Region::cube(2, (2 * side + 1) as f64 * eps).unwrap();
    let coarse = |label: &str, count: u64| -> Vec<CoarseConfig> {
        (0..count)
            .into_par_iter()
            .map(|r| {
                let root = RngStream::root(14).substream(label, r);
                let cloud = sample_poisson(&region, rho, root.substream("points", 0)).unwrap();
                let edges = sample_edges(&cloud, &spec, root.substream("edges", 0), &EdgeSampling::default()).unwrap();
                coarse_graph(&cloud, &edges, eps, beta, 3).unwrap()
            })
            .collect()
    };
    let calibration = coarse("calibration", 10);
    let sites: u64 = calibration.iter().map(|c| c.sites.len() as u64).sum();
    let good: u64 = calibration.iter().map(|c| c.good_count() as u64).sum();
    let mu_hat = wilson(good, sites, 6.0).lo;
    let mut per_distance: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for c in &calibration {
        for (k, (o, t)) in bond_frequencies(c, |b| b.lattice_distance) {
            let e = per_distance.entry(k).or_default();
            e.0 += o;
            e.1 += t;
        }
    }
    let lambda_hat = per_distance
        .iter()
        .map(|(&k, &(o, t))| -(k as f64).powf(alpha) * (1.0 - wilson(o, t, 6.0).lo).ln())
        .fold(f64::INFINITY, f64::min);
    let k_max = *per_distance.keys().max().unwrap();
    let test = coarse("test", 10);
    let report = domination_report(&test, DominationMode::LongRange { lambda: lambda_hat, mu: mu_hat }, 2.0).unwrap();
    let coarse_largest: Vec<f64> = test.iter().map(|c| coarse_cluster_stats(c).unwrap().largest_fraction).collect();
    let matched = LatticeParams { k_max: Some(k_max), ..LatticeParams::new(2, side, lambda_hat, mu_hat, alpha) };
    let lattice_largest: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|r| lattice_cluster_stats(&sample_lrp(&matched, RngStream::root(15).substream("replica", r)).unwrap()).largest_fraction_all)
        .collect();
    let (cm, lm) = (mean(&coarse_largest), mean(&lattice_largest));
    let se = (std_error(&coarse_largest).powi(2) + std_error(&lattice_largest).powi(2)).sqrt();
    let dominated = lm <= cm + 4.0 * se;
    let sites_match = test[0].sites.len() == (2 * side + 1).pow(2);
    outcome(
        freq_ok && lambda_hat > 0.0 && report.all_pass() && dominated && sites_match,
        format!(
            "lrp bond counts: max |z| = {worst:.2} over {distances} distances; calibrated lambda={lambda_hat:.3}, mu={mu_hat:.4}, k_max={k_max}; \
             domination report {} ({} comparisons); largest/all sites: lattice {lm:.4} vs coarse {cm:.4}",
            if report.all_pass() { "passes" } else { "fails" },
            report.comparisons.len()
        ),
    )
}

fn c13() -> Outcome {
    let tol = Tolerance::absolute(1e-7);
    let unit = Region::hypercube(2, 0.0, 1.0).unwrap();
    let hr1 = integrate_connection(&ConnectionSpec::polynomial_tail(2, 4.0).unwrap(), &unit, 4.0, tol).unwrap();
    let hr1_shrink = hr1.shrink_factors();
    let rr2 = integrate_opposite_quadrants(&ConnectionSpec::polynomial_tail(2, 6.0).unwrap(), 1.0, 8.0, Tolerance::absolute(1e-10)).unwrap();
    let rr2_shrink = rr2.shrink_factors();
    let mut blob_err: f64 = 0.0;
    for (spec, exact) in [
        (ConnectionSpec::blob(2, 1.0).unwrap(), 7.0 / 6.0),
        (ConnectionSpec::blob(2, 1.0).unwrap().with_norm(Norm::Two), 13.0 / 6.0),
    ] {
        let rep = integrate_connection(&spec, &unit, 4.0, tol).unwrap();
        for v in rep.values {
            blob_err = blob_err.max((v - exact).abs());
        }
    }
    outcome(
        hr1_shrink.iter().all(|&f| f >= 2.0) && rr2_shrink.iter().all(|&f| f >= 2.0) && blob_err <= 1e-6,
        format!(
            "box-to-complement alpha=4 at T=4,8,16: {:?}, shrink {:?}; opposite quadrants alpha=6 at T=8,16,32: shrink {:?}; blob vs exact geometry max error {blob_err:.1e}",
            hr1.values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>(),
            hr1_shrink.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            rr2_shrink.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn c14() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, &[(&str, &str)]); 9] = [
        ("sample", &[("rho", "1.5"), ("half-width", "6"), ("palm", "true")]),
        ("percolate", &[("replicas", "4"), ("half-width", "5")]),
        ("walk", &[("replicas", "3"), ("rho", "2"), ("half-width", "5"), ("horizon", "200")]),
        ("resistance-profile", &[("replicas", "3"), ("rho", "2"), ("half-width", "5"), ("radii", "1,2,4")]),
        ("cutsets", &[("replicas", "5"), ("half-width", "9")]),
        ("renormalize", &[("replicas", "2"), ("rho", "200"), ("half-width", "1"), ("alpha", "3")]),
        ("lrp", &[("replicas", "3"), ("side", "6")]),
        ("integrals", &[]),
        ("threshold", &[("replicas", "10"), ("half-width", "4")]),
    ];
    let mut mismatched = Vec::new();
    let mut artifacts = 0;
    for (command, pairs) in runs {
        let first = dir.path().join(command).join("first");
        let mut overrides: Vec<(String, String)> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        overrides.push(("out".into(), first.display().to_string()));
        let cfg = rcm_cli::Config::resolve(command, &[], &overrides).unwrap();
        let run = rcm_cli::run(&cfg).unwrap();
        artifacts += run.hashes.len();
        let again = rcm_cli::replay(&first.join(rcm_cli::MANIFEST), Some(&dir.path().join(command).join("again"))).unwrap();
        if !again.mismatches.is_empty() || !same_files(&first, &again.run.out_dir, &run.hashes) {
            mismatched.push(command);
        }
    }
    outcome(mismatched.is_empty(), format!("9 subcommands, {artifacts} artifacts replayed from manifests; mismatches {mismatched:?}"))
}

fn same_files(a: &Path, b: &Path, hashes: &[(String, String)]) -> bool {
    hashes.iter().all(|(name, _)| std::fs::read(a.join(name)).ok() == std::fs::read(b.join(name)).ok())
}

use rand::Rng;
use rcm_core::recurrence::cutset_report;
use rcm_core::walk::outside_box;
use rcm_core::*;

fn random_planar(n: usize, extra: usize, half: f64, seed: u64) -> (PointCloud, WeightedGraph) {
    let mut rng = RngStream::root(seed).rng();
    let region = Region::cube(2, half).unwrap();
    let mut pts = vec![vec![0.0, 0.0]];
    while pts.len() < n {
        pts.push(vec![rng.random_range(-half..half), rng.random_range(-half..half)]);
    }
    let cloud = PointCloud::from_points(region, &pts).unwrap();
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let graph = WeightedGraph::from_pairs(n, &pairs).unwrap().with_positions(2, cloud.coords().to_vec()).unwrap();
    (cloud, graph)
}

#[test]
fn projection_never_increases_resistance() {
    for seed in 0..30 {
        let (cloud, g) = random_planar(50, 30, 2.5, seed);
        let p = project_long_edges(&g, &cloud).unwrap();
        assert!(p.max_edge_length() <= 1.0);
        for (u, v, c) in g.edges() {
            let len: f64 = cloud.point(u).iter().zip(cloud.point(v)).map(|(a, b)| (a - b).abs()).sum();
            if len <= 1.0 {
                assert!(p.graph().conductance(u, v).unwrap() >= c);
            }
        }
        for t in [1, 17, 49] {
            let before = effective_resistance_dense(&g, 0, &[t]).unwrap().value;
            let after = effective_resistance_dense(p.graph(), 0, &[t]).unwrap().value;
            assert!(after <= before * (1.0 + 1e-10), "seed {seed}: {after} > {before}");
        }
    }
}

#[test]
fn nash_williams_below_resistance_on_sampled_fixtures() {
    let spec = ConnectionSpec::polynomial_tail(2, 4.0).unwrap();
    let region = Region::cube(2, 6.0).unwrap();
    let mut checked = 0;
    for seed in 0..20 {
        let cloud = palm_condition(&sample_poisson(&region, 1.0, RngStream::new(seed, 0)).unwrap()).unwrap();
        let edges = sample_edges(&cloud, &spec, RngStream::new(seed, 1), &EdgeSampling::default()).unwrap();
        let g = WeightedGraph::from_cloud(&cloud, &edges).unwrap();
        let p = project_long_edges(&g, &cloud).unwrap();
        let report = cutset_report(&p, &[1.0, 3.0, 5.0]).unwrap();
        let sinks = outside_box(p.graph(), 5.0);
        let r = effective_resistance(p.graph(), 0, &sinks, 1e-12).unwrap().value;
        assert!(report.nash_williams_sum <= r + 1e-8, "{} > {r}", report.nash_williams_sum);
        if r.is_finite() {
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn rayleigh_monotonicity_under_edge_addition() {
    let mut rng = RngStream::root(77).rng();
    for seed in 0..50 {
        let (_, g) = random_planar(30, 10, 3.0, 500 + seed);
        let mut edges: Vec<(usize, usize, f64)> = g.edges().collect();
        let before = effective_resistance(&g, 0, &[29], 1e-12).unwrap().value;
        let (a, b) = (rng.random_range(0..30), rng.random_range(0..30));
        if a == b {
            continue;
        }
        edges.push((a, b, rng.random_range(0.1..3.0)));
        let h = WeightedGraph::from_weighted_edges(30, &edges).unwrap();
        let after = effective_resistance(&h, 0, &[29], 1e-12).unwrap().value;
        assert!(after <= before + 1e-10);
    }
}

#[test]
fn lattice_export_round_trips_through_walks() {
    let c = sample_lrp(&LatticeParams::new(2, 5, 1.0, 1.0, 3.0), RngStream::root(8)).unwrap();
    let g = lrp::lattice_graph(&c).unwrap();
    let labels = connected_components(&g);
    let l = labels.largest_label().unwrap();
    let target = (0..g.vertex_count()).rev().find(|&v| labels.label(v) == l && v != l).unwrap();
    let r = effective_resistance(&g, l, &[target], 1e-10).unwrap();
    let d = effective_resistance_dense(&g, l, &[target]).unwrap();
    assert!(r.value.is_finite());
    assert!((r.value - d.value).abs() < 1e-8);
}

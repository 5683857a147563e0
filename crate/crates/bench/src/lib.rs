//! Fixtures shared by the benchmarks.

use rcm_core::connection::EdgeSampling;
use rcm_core::*;

/// One realization on the cube of half-width `half`, seeded by `seed`.
pub fn realization(spec: &ConnectionSpec, half: f64, rho: f64, seed: u64) -> (PointCloud, EdgeList) {
    let region = Region::cube(spec.dim(), half).expect("region");
    let root = RngStream::root(seed);
    let cloud = sample_poisson(&region, rho, root.substream("points", 0)).expect("points");
    let edges = sample_edges(&cloud, spec, root.substream("edges", 0), &EdgeSampling::default()).expect("edges");
    (cloud, edges)
}

/// Palm graph with the origin in the largest cluster.
pub fn palm_graph(spec: &ConnectionSpec, half: f64, rho: f64, seed: u64) -> (PointCloud, WeightedGraph) {
    let region = Region::cube(spec.dim(), half).expect("region");
    for attempt in 0..100 {
        let root = RngStream::new(seed, attempt);
        let cloud = palm_condition(&sample_poisson(&region, rho, root.substream("points", 0)).expect("points")).expect("palm");
        let edges = sample_edges(&cloud, spec, root.substream("edges", 0), &EdgeSampling::default()).expect("edges");
        let g = WeightedGraph::from_cloud(&cloud, &edges).expect("graph");
        let labels = connected_components(&g);
        if g.degree(0) > 0 && labels.label(0) == labels.largest_label().expect("nonempty") {
            return (cloud, g);
        }
    }
    panic!("origin never joined the largest cluster");
}

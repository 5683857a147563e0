//! Weighted graphs, clusters and degree statistics.

mod components;
mod stats;
mod threshold;
mod weighted;

pub use components::{connected_components, largest_cluster_fraction, ClusterLabels, UnionFind};
pub use stats::{bulk_degree_stats, degree_stats, DegreeStats};
pub use threshold::{estimate_percolation_threshold, ThresholdEstimate, ThresholdSearch};
pub use weighted::WeightedGraph;

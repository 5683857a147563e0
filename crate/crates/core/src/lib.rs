//! Random connection model on Poisson points: sampling, clusters, random
//! walks, effective resistance, cut-set scaling and coarse-graining.
//!
//! Everything random is driven by an explicit [`RngStream`], so any result
//! is a pure function of its inputs.

pub mod connection;
pub mod error;
pub mod graph;
pub mod lrp;
pub mod pointprocess;
pub mod quadrature;
pub mod recurrence;
pub mod renormalization;
pub mod snapshot;
pub mod stats;
pub mod stream;
pub mod walk;

pub use connection::{
    eval_connection, integrate_connection, mean_degree_prediction, sample_edges, ConnectionSpec, EdgeList, EdgeSampling,
    Kernel, Norm, SamplingMethod,
};
pub use error::{Error, Result};
pub use graph::{
    connected_components, degree_stats, estimate_percolation_threshold, largest_cluster_fraction, ClusterLabels,
    DegreeStats, WeightedGraph,
};
pub use lrp::{lattice_cluster_stats, sample_lrp, LatticeConfig, LatticeParams};
pub use pointprocess::{palm_condition, sample_poisson, Boundary, PointCloud, Region};
pub use quadrature::{Estimate, Tolerance};
pub use recurrence::{cutset, cutset_scaling_experiment, nash_williams_bound, project_long_edges, CutsetReport, ProjectedGraph};
pub use renormalization::{
    coarse_graph, domination_report, good_box, lemma_tr2_bound, partition_boxes, BoxGrid, CoarseConfig, DominationMode,
};
pub use stream::RngStream;
pub use walk::{
    effective_resistance, effective_resistance_dense, escape_probability, resistance_growth_profile, simulate_walk,
    ResistanceResult, WalkStats,
};

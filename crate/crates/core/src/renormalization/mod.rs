//! Coarse-graining into ε-boxes and the induced site-bond configuration.

mod boxes;
mod coarse;

pub(crate) use coarse::half_ball;

pub use boxes::{good_box, partition_boxes, BoxGrid};
pub use coarse::{
    bond_frequencies, box_distance, coarse_cluster_stats, coarse_config, coarse_graph, domination_report,
    lemma_tr2_bound, CoarseBond, CoarseClusterStats, CoarseConfig, Comparison, DominationMode, DominationReport,
};

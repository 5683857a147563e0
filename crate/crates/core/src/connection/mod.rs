//! Connection kernels, the independent edge field and kernel integrals.

mod edges;
mod integrate;
mod kernel;

pub use edges::{
    sample_edges, EdgeList, EdgeProvenance, EdgeSampling, SamplingMethod, DEFAULT_PAIR_BUDGET,
};
pub use integrate::{
    integrate_connection, integrate_kernel, integrate_opposite_quadrants, integrate_pair,
    mean_degree_prediction, DegreePrediction, TruncationReport,
};
pub use kernel::{eval_connection, ConnectionSpec, Kernel, Norm};

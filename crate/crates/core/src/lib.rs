//! Estimate the dimension of the space underlying a random geometric graph
//! from its adjacency structure alone.
//!
//! Two i.i.d. uniform points of the unit ball in `R^d` lie within distance
//! one of each other with probability `w_d`, a constant that decreases
//! strictly in `d`. Each vertex neighborhood of a random geometric graph is,
//! after rescaling, a sample of such points, so the local triangle density
//! of the graph estimates `w_d`, and inverting `d -> w_d` estimates `d`.
//!
//! Module map:
//!
//! * [`specfun`]: log-gamma, regularized incomplete beta, unit-ball volume.
//! * [`wd`]: the constant `w_d` and its inversion.
//! * [`pointcloud`]: densities, sampling and metrics.
//! * [`geograph`]: graph construction, counting kernels and edge-list I/O.
//! * [`estimators`]: the four statistics and the end-to-end estimator.
//! * [`harness`]: seeded Monte Carlo experiments.

pub mod error;
pub mod estimators;
pub mod geograph;
pub mod harness;
pub mod pointcloud;
pub mod rng;
pub mod specfun;
pub mod wd;

pub use error::{Error, Result};
pub use estimators::{estimate_dimension, EstimatorOutcome, Failure, Method};
pub use geograph::{build_rgg, read_edge_list, write_edge_list, Graph, VertexStats};
pub use harness::{run_experiment, ExperimentConfig, RadiusRule, TrialRecord};
pub use pointcloud::{distance, sample_points, DensityKind, DensitySpec, Metric, PointCloud};
pub use wd::{dim_from_stat, wd, DimensionEstimate, DEFAULT_DIMENSION_CAP};

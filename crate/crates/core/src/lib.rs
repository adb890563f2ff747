//! Metropolis-Hastings walks for undirected s-t connectivity.
//!
//! The crate provides a port-labelled graph type, the Metropolis-Hastings
//! walk `RW(G_f)` for a node potential `f`, the virtual split graph that caps
//! node degrees, two one-sided-error connectivity solvers built on these
//! walks, and a set of estimators and exact small-graph oracles for the
//! walks' hitting, cover and return statistics.
//!
//! Simulation runs in `f64`. The exact side ([`matrix`], [`stats::fit_scaling_exponent`])
//! is generic over [`Scalar`]; the aliases below fix the common choices.

pub mod connectivity;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod potential;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod split;
pub mod stats;
pub mod union_find;
pub mod validate;
pub mod walk;

pub use connectivity::bfs_connected;
pub use error::{Error, Result};
pub use generators::GraphSpec;
pub use graph::{ConnectivityQuery, Graph, NodeId};
pub use potential::Potential;
pub use scalar::Scalar;
pub use solver::{
    solve_logspace, test_connectivity, Answer, LandmarkConfig, SolveResult, SolverKind,
};
pub use split::{SplitNode, SplitPort, SplitView};
pub use stats::EstimatorReport;
pub use union_find::DisjointSet;
pub use walk::{Kernel, TraceOptions, WalkTrace};

/// Exact rational scalar.
pub type Rational = num_rational::Rational64;

/// Transition kernel in double precision.
pub type TransitionMatrix = matrix::DenseMatrix<f64>;
/// Transition kernel in single precision.
pub type TransitionMatrix32 = matrix::DenseMatrix<f32>;
/// Transition kernel with exact rational entries.
pub type ExactTransitionMatrix = matrix::DenseMatrix<Rational>;

pub type ScalingFit = stats::ScalingFit<f64>;

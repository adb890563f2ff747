use thiserror::Error;

use crate::graph::NodeId;

/// Errors raised by graph construction, walk simulation and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },

    #[error("port {port} out of range at node {node} of degree {degree}")]
    PortOutOfRange {
        node: NodeId,
        port: usize,
        degree: usize,
    },

    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(NodeId, NodeId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {n} nodes, above the dense-matrix cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("invalid copy index {copy} for node {node} ({copies} copies)")]
    InvalidSplitNode {
        node: NodeId,
        copy: usize,
        copies: usize,
    },

    #[error("split node ({node}, {copy}) has degree 0")]
    IsolatedSplitNode { node: NodeId, copy: usize },

    #[error("element not registered in the disjoint-set structure")]
    UnregisteredElement,

    #[error("nodes {0} and {1} lie in different components")]
    DifferentComponents(NodeId, NodeId),

    #[error("graph must be connected")]
    NotConnected,

    #[error("malformed edge list, line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed generator spec {spec:?}: {message}")]
    GeneratorSpec { spec: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Immutable port-labelled undirected graph.
//!
//! Adjacency is stored in CSR form: the neighbours of `v` occupy
//! `neighbors[offsets[v]..offsets[v + 1]]`, sorted ascending, and the port of
//! a neighbour is its position in that slice. A parallel array holds, for each
//! arc `(v, port)`, the port under which `v` appears at the other endpoint, so
//! that [`Graph::traverse_edge`] is a pair of array reads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Distinguished pair of nodes for an s-t connectivity query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConnectivityQuery {
    pub source: NodeId,
    pub target: NodeId,
}

impl ConnectivityQuery {
    pub fn new(source: NodeId, target: NodeId) -> Self {
        Self { source, target }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        g.check_node(self.source)?;
        g.check_node(self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    reverse_ports: Vec<usize>,
    max_degree: usize,
}

impl Graph {
    /// Builds a simple graph on `n` nodes from an undirected edge list.
    ///
    /// Edges may be given in either orientation; self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one node".into(),
            ));
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            degree[u] += 1;
            degree[v] += 1;
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0; offsets[n]];
        for &(u, v) in edges {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        for v in 0..n {
            let adj = &mut neighbors[offsets[v]..offsets[v + 1]];
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(v.min(w[0]), v.max(w[0])));
            }
        }

        // Reverse ports: walking v's sorted list in order of v visits each
        // neighbour u exactly once, and u's list is also sorted, so the arcs
        // (u -> v) are encountered for increasing v. A per-node cursor over
        // u's list therefore finds PORT_u(v) without searching.
        let mut reverse_ports = vec![0; neighbors.len()];
        let mut scan = offsets[..n].to_vec();
        for v in 0..n {
            for idx in offsets[v]..offsets[v + 1] {
                let u = neighbors[idx];
                while neighbors[scan[u]] != v {
                    scan[u] += 1;
                }
                reverse_ports[idx] = scan[u] - offsets[u];
                scan[u] += 1;
            }
        }

        let max_degree = degree.iter().copied().max().unwrap_or(0);
        Ok(Self {
            offsets,
            neighbors,
            reverse_ports,
            max_degree,
        })
    }

    /// Graph on `n` nodes without edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, &[])
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Average degree `2m / n`.
    pub fn average_degree(&self) -> f64 {
        self.neighbors.len() as f64 / self.node_count() as f64
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: v,
                n: self.node_count(),
            })
        }
    }

    /// Degree of `v`, rejecting out-of-range ids.
    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.deg(v))
    }

    /// Unchecked degree for hot loops.
    #[inline]
    pub fn deg(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// `PORT_v(u)`, or `None` when `u` is not adjacent to `v`.
    pub fn port_of(&self, v: NodeId, u: NodeId) -> Option<usize> {
        self.neighbors(v).binary_search(&u).ok()
    }

    /// Follows port `port` out of `v`, returning the neighbour `u` and the
    /// port of `v` at `u`.
    pub fn traverse_edge(&self, v: NodeId, port: usize) -> Result<(NodeId, usize)> {
        self.check_node(v)?;
        let degree = self.deg(v);
        if port >= degree {
            return Err(Error::PortOutOfRange {
                node: v,
                port,
                degree,
            });
        }
        Ok(self.traverse(v, port))
    }

    #[inline]
    pub fn traverse(&self, v: NodeId, port: usize) -> (NodeId, usize) {
        let idx = self.offsets[v] + port;
        (self.neighbors[idx], self.reverse_ports[idx])
    }

    /// Global index of arc `(v, port)`, in `0..2m`.
    #[inline]
    pub fn arc_index(&self, v: NodeId, port: usize) -> usize {
        self.offsets[v] + port
    }

    pub fn arc_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Checks the structural invariants: simplicity, symmetry, port
    /// bijectivity, cached maximum degree and the handshake identity.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.node_count();
        let mut degree_sum = 0;
        let mut max_degree = 0;
        for v in 0..n {
            let adj = self.neighbors(v);
            degree_sum += adj.len();
            max_degree = max_degree.max(adj.len());
            for (port, &u) in adj.iter().enumerate() {
                if u >= n {
                    return Err(format!("neighbour {u} of {v} out of range"));
                }
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if port > 0 && adj[port - 1] >= u {
                    return Err(format!("adjacency of {v} not strictly sorted"));
                }
                let (w, inport) = self.traverse(v, port);
                if w != u {
                    return Err(format!("port {port} of {v} does not lead to {u}"));
                }
                match self.neighbors(u).get(inport) {
                    Some(&back) if back == v => {}
                    _ => return Err(format!("arc {v}->{u} has no matching reverse port")),
                }
                if self.port_of(u, v) != Some(inport) {
                    return Err(format!("reverse port of {v}->{u} is not PORT_u(v)"));
                }
            }
        }
        if max_degree != self.max_degree {
            return Err(format!(
                "cached max degree {} != {max_degree}",
                self.max_degree
            ));
        }
        if degree_sum % 2 != 0 || degree_sum / 2 != self.edge_count() {
            return Err("degree sum is not twice the edge count".into());
        }
        Ok(())
    }
}

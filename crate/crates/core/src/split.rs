//! The split graph `G*`, simulated on top of a base graph.
//!
//! Each base node `v` becomes a chain of `max(1, ⌈deg(v)/D⌉)` copies. Copy
//! `(v, i)` owns the contiguous base ports `[iD, min((i+1)D, deg(v)))` and is
//! linked to its neighbours in the chain through the `prev`/`next` ports, so
//! every split node has degree at most `D + 2`. Nothing is materialised: all
//! queries are answered from the base graph in O(1).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplitNode {
    pub node: NodeId,
    pub copy: usize,
}

impl SplitNode {
    pub const fn new(node: NodeId, copy: usize) -> Self {
        Self { node, copy }
    }
}

/// A port of a split node: a base port of `v`, or one of the chain links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitPort {
    Outer(usize),
    Prev,
    Next,
}

impl SplitPort {
    /// Integer label: outer ports keep their base number, `prev` and `next`
    /// map to `deg(v)` and `deg(v) + 1`.
    pub fn code(self, base_degree: usize) -> usize {
        match self {
            SplitPort::Outer(p) => p,
            SplitPort::Prev => base_degree,
            SplitPort::Next => base_degree + 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SplitView<'g> {
    g: &'g Graph,
    d: usize,
    n_star: usize,
}

impl<'g> SplitView<'g> {
    pub fn new(g: &'g Graph, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter(
                "split parameter D must be >= 1".into(),
            ));
        }
        let n_star = (0..g.node_count()).map(|v| copies(g.deg(v), d)).sum();
        Ok(Self { g, d, n_star })
    }

    pub fn base(&self) -> &'g Graph {
        self.g
    }

    pub fn split_parameter(&self) -> usize {
        self.d
    }

    /// `n* = Σ_v max(1, ⌈deg(v)/D⌉)`.
    pub fn node_count(&self) -> usize {
        self.n_star
    }

    /// `Δ* = D + 2`, the degree cap of the split graph.
    pub fn degree_cap(&self) -> usize {
        self.d + 2
    }

    #[inline]
    pub fn copies(&self, v: NodeId) -> usize {
        copies(self.g.deg(v), self.d)
    }

    pub fn check(&self, x: SplitNode) -> Result<()> {
        self.g.check_node(x.node)?;
        let copies = self.copies(x.node);
        if x.copy >= copies {
            return Err(Error::InvalidSplitNode {
                node: x.node,
                copy: x.copy,
                copies,
            });
        }
        Ok(())
    }

    /// Base ports `[left, right)` owned by `x`.
    #[inline]
    fn outer_range(&self, x: SplitNode) -> (usize, usize) {
        let deg = self.g.deg(x.node);
        let left = (x.copy * self.d).min(deg);
        let right = ((x.copy + 1) * self.d).min(deg);
        (left, right)
    }

    #[inline]
    fn chain(&self, x: SplitNode) -> (bool, bool) {
        (x.copy > 0, x.copy + 1 < self.copies(x.node))
    }

    #[inline]
    fn degree_unchecked(&self, x: SplitNode) -> usize {
        let (left, right) = self.outer_range(x);
        let (prev, next) = self.chain(x);
        right - left + usize::from(prev) + usize::from(next)
    }

    /// Degree of `x` in `G*`: its outer ports plus the chain links present.
    pub fn degree(&self, x: SplitNode) -> Result<usize> {
        self.check(x)?;
        Ok(self.degree_unchecked(x))
    }

    #[inline]
    fn random_port_unchecked<R: Rng + ?Sized>(
        &self,
        x: SplitNode,
        deg_star: usize,
        rng: &mut R,
    ) -> SplitPort {
        let (left, right) = self.outer_range(x);
        let outer = right - left;
        if rng.gen_range(0..deg_star) < outer {
            return SplitPort::Outer(left + rng.gen_range(0..outer));
        }
        match self.chain(x) {
            (true, true) => {
                if rng.gen::<bool>() {
                    SplitPort::Prev
                } else {
                    SplitPort::Next
                }
            }
            (true, false) => SplitPort::Prev,
            (false, true) => SplitPort::Next,
            (false, false) => unreachable!("degree accounts for a chain link"),
        }
    }

    /// A port of `x` chosen uniformly among its `deg*(x)` ports: first decide
    /// outer vs chain in proportion to their counts, then pick within.
    pub fn random_port<R: Rng + ?Sized>(&self, x: SplitNode, rng: &mut R) -> Result<SplitPort> {
        let deg_star = self.degree(x)?;
        if deg_star == 0 {
            return Err(Error::IsolatedSplitNode {
                node: x.node,
                copy: x.copy,
            });
        }
        Ok(self.random_port_unchecked(x, deg_star, rng))
    }

    /// Endpoint of port `port` at `x`.
    #[inline]
    pub fn follow(&self, x: SplitNode, port: SplitPort) -> SplitNode {
        match port {
            SplitPort::Prev => SplitNode::new(x.node, x.copy - 1),
            SplitPort::Next => SplitNode::new(x.node, x.copy + 1),
            SplitPort::Outer(p) => {
                let (u, inport) = self.g.traverse(x.node, p);
                SplitNode::new(u, inport / self.d)
            }
        }
    }

    /// One step of the unit-potential Metropolis walk on `G*`, no validation.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&self, x: SplitNode, rng: &mut R) -> SplitNode {
        let deg_x = self.degree_unchecked(x);
        if deg_x == 0 {
            return x;
        }
        let port = self.random_port_unchecked(x, deg_x, rng);
        let y = self.follow(x, port);
        let deg_y = self.degree_unchecked(y);
        if deg_y <= deg_x || rng.gen_range(0..deg_y) < deg_x {
            y
        } else {
            x
        }
    }

    /// One step of `RW(G*_1)` from `x`. Degree-0 split nodes absorb.
    pub fn next_state<R: Rng + ?Sized>(&self, x: SplitNode, rng: &mut R) -> Result<SplitNode> {
        self.check(x)?;
        Ok(self.step(x, rng))
    }

    /// All split nodes in `(v, copy)` order.
    pub fn nodes(&self) -> impl Iterator<Item = SplitNode> + '_ {
        (0..self.g.node_count())
            .flat_map(move |v| (0..self.copies(v)).map(move |i| SplitNode::new(v, i)))
    }

    /// Builds `G*` explicitly. Split node ids follow [`SplitView::nodes`].
    pub fn materialize(&self, cap: usize) -> Result<MaterializedSplit> {
        if self.n_star > cap {
            return Err(Error::CapExceeded {
                n: self.n_star,
                cap,
            });
        }
        let n = self.g.node_count();
        let mut first_id = Vec::with_capacity(n + 1);
        first_id.push(0);
        for v in 0..n {
            first_id.push(first_id[v] + self.copies(v));
        }
        let id = |x: SplitNode| first_id[x.node] + x.copy;
        let mut edges = Vec::new();
        for v in 0..n {
            for p in 0..self.g.deg(v) {
                let (u, inport) = self.g.traverse(v, p);
                if v < u {
                    edges.push((
                        id(SplitNode::new(v, p / self.d)),
                        id(SplitNode::new(u, inport / self.d)),
                    ));
                }
            }
            for i in 1..self.copies(v) {
                edges.push((id(SplitNode::new(v, i - 1)), id(SplitNode::new(v, i))));
            }
        }
        let graph = Graph::from_edges(self.n_star, &edges)?;
        Ok(MaterializedSplit { graph, first_id })
    }
}

#[inline]
fn copies(deg: usize, d: usize) -> usize {
    deg.div_ceil(d).max(1)
}

pub const DEFAULT_MATERIALIZE_CAP: usize = 1 << 20;

/// Explicit `G*` together with the split-node numbering.
#[derive(Debug, Clone)]
pub struct MaterializedSplit {
    pub graph: Graph,
    first_id: Vec<usize>,
}

impl MaterializedSplit {
    pub fn id_of(&self, x: SplitNode) -> usize {
        self.first_id[x.node] + x.copy
    }

    pub fn node_of(&self, id: usize) -> SplitNode {
        let v = self.first_id.partition_point(|&f| f <= id) - 1;
        SplitNode::new(v, id - self.first_id[v])
    }
}

//! Graph families used as test instances and benchmark inputs.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rustc_hash::FxHashSet;

use crate::connectivity::is_connected;
use crate::error::{Error, Result};
use crate::graph::{ConnectivityQuery, Graph, NodeId};
use crate::rng;

pub fn path(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges)
}

pub fn star(leaves: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// Glitter star with `l` arms: node 0 is the hub, nodes `1..=l` are the
/// degree-2 middles and node `l + i` is the leaf hanging off middle `i`.
pub fn glitter_star(l: usize) -> Result<Graph> {
    if l == 0 {
        return Err(Error::InvalidParameter("glitter star needs l >= 1".into()));
    }
    let mut edges = Vec::with_capacity(2 * l);
    for i in 1..=l {
        edges.push((0, i));
        edges.push((i, l + i));
    }
    Graph::from_edges(2 * l + 1, &edges)
}

/// Clique on nodes `0..clique` with a path of `tail` further nodes attached
/// to node `clique - 1`.
pub fn lollipop(clique: usize, tail: usize) -> Result<Graph> {
    if clique < 2 {
        return Err(Error::InvalidParameter(
            "lollipop clique needs >= 2 nodes".into(),
        ));
    }
    let n = clique + tail;
    let mut edges: Vec<_> = (0..clique)
        .flat_map(|u| (u + 1..clique).map(move |v| (u, v)))
        .collect();
    edges.extend((clique..n).map(|v| (v - 1, v)));
    Graph::from_edges(n, &edges)
}

fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Inverse of the lexicographic rank of pair `(u, v)`, `u < v`.
fn unrank_pair(n: usize, mut k: usize) -> (NodeId, NodeId) {
    let mut u = 0;
    while k >= n - 1 - u {
        k -= n - 1 - u;
        u += 1;
    }
    (u, u + 1 + k)
}

/// `m` distinct edges drawn uniformly from all `n(n-1)/2` pairs.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let total = max_edges(n);
    if m > total {
        return Err(Error::InvalidParameter(format!(
            "{m} edges infeasible on {n} nodes (max {total})"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut ranks = index::sample(&mut rng, total, m).into_vec();
    ranks.sort_unstable();
    let edges: Vec<_> = ranks.into_iter().map(|k| unrank_pair(n, k)).collect();
    Graph::from_edges(n, &edges)
}

/// Connected graph with `m` edges: a random recursive spanning tree over a
/// shuffled node order, plus `m - (n - 1)` further uniform edges.
pub fn random_connected_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let total = max_edges(n);
    if n == 0 || m + 1 < n || m > total {
        return Err(Error::InvalidParameter(format!(
            "connected graph with {n} nodes needs {} <= m <= {total}, got {m}",
            n.saturating_sub(1)
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = FxHashSet::default();
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
        present.insert((a, b));
        edges.push((a, b));
    }
    if m - edges.len() > total / 2 {
        // Dense: enumerate the remaining pairs and subsample.
        let mut rest: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|e| !present.contains(e))
            .collect();
        rest.shuffle(&mut rng);
        edges.extend(rest.into_iter().take(m - (n - 1)));
    } else {
        while edges.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v {
                continue;
            }
            let e = (u.min(v), u.max(v));
            if present.insert(e) {
                edges.push(e);
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Two disjoint copies of a connected graph `h`; the query pairs node 0 of
/// the first copy with node 0 of the second.
pub fn disconnected_pair(h: &Graph) -> Result<(Graph, ConnectivityQuery)> {
    if !is_connected(h) {
        return Err(Error::NotConnected);
    }
    let n = h.node_count();
    let edges: Vec<_> = h
        .edges()
        .chain(h.edges().map(|(u, v)| (u + n, v + n)))
        .collect();
    Ok((
        Graph::from_edges(2 * n, &edges)?,
        ConnectivityQuery::new(0, n),
    ))
}

/// Textual generator description, `family:param[:param...]`.
///
/// | spec                         | graph                                   |
/// |------------------------------|-----------------------------------------|
/// | `path:N`, `cycle:N`          | path / cycle on N nodes                 |
/// | `complete:N`, `star:L`       | K_N / star with L leaves                |
/// | `glitter:L`                  | glitter star with L arms                |
/// | `lollipop:K:T`               | K-clique with a T-node tail             |
/// | `random:N:M:SEED`            | uniform simple graph with M edges       |
/// | `connected:N:M:SEED`         | connected random graph with M edges     |
/// | `disconnected-pair:SPEC`     | two copies of SPEC, query across them   |
///
/// Seeds may be written `7` or `seed7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Star(usize),
    Glitter(usize),
    Lollipop { clique: usize, tail: usize },
    Random { n: usize, m: usize, seed: u64 },
    Connected { n: usize, m: usize, seed: u64 },
    DisconnectedPair(Box<GraphSpec>),
}

impl GraphSpec {
    /// Builds the graph, plus the canonical query for families that define one.
    pub fn build(&self) -> Result<(Graph, Option<ConnectivityQuery>)> {
        let g = match self {
            GraphSpec::Path(n) => path(*n)?,
            GraphSpec::Cycle(n) => cycle(*n)?,
            GraphSpec::Complete(n) => complete(*n)?,
            GraphSpec::Star(l) => star(*l)?,
            GraphSpec::Glitter(l) => glitter_star(*l)?,
            GraphSpec::Lollipop { clique, tail } => lollipop(*clique, *tail)?,
            GraphSpec::Random { n, m, seed } => random_graph(*n, *m, *seed)?,
            GraphSpec::Connected { n, m, seed } => random_connected_graph(*n, *m, *seed)?,
            GraphSpec::DisconnectedPair(inner) => {
                let (h, _) = inner.build()?;
                let (g, q) = disconnected_pair(&h)?;
                return Ok((g, Some(q)));
            }
        };
        Ok((g, None))
    }
}

fn spec_err(spec: &str, message: impl Into<String>) -> Error {
    Error::GeneratorSpec {
        spec: spec.to_string(),
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(spec: &str, token: Option<&str>, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| spec_err(spec, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| spec_err(spec, format!("bad {what} {token:?}")))
}

fn parse_seed(spec: &str, token: Option<&str>) -> Result<u64> {
    let token = token.map(|t| t.strip_prefix("seed").unwrap_or(t));
    parse_num(spec, token, "seed")
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        if family == "disconnected-pair" {
            return Ok(GraphSpec::DisconnectedPair(Box::new(rest.parse()?)));
        }
        let mut params = rest.split(':').filter(|t| !t.is_empty());
        let spec = match family {
            "path" => GraphSpec::Path(parse_num(s, params.next(), "node count")?),
            "cycle" => GraphSpec::Cycle(parse_num(s, params.next(), "node count")?),
            "complete" => GraphSpec::Complete(parse_num(s, params.next(), "node count")?),
            "star" => GraphSpec::Star(parse_num(s, params.next(), "leaf count")?),
            "glitter" => GraphSpec::Glitter(parse_num(s, params.next(), "arm count")?),
            "lollipop" => GraphSpec::Lollipop {
                clique: parse_num(s, params.next(), "clique size")?,
                tail: parse_num(s, params.next(), "tail length")?,
            },
            "random" | "connected" => {
                let n = parse_num(s, params.next(), "node count")?;
                let m = parse_num(s, params.next(), "edge count")?;
                let seed = parse_seed(s, params.next())?;
                if family == "random" {
                    GraphSpec::Random { n, m, seed }
                } else {
                    GraphSpec::Connected { n, m, seed }
                }
            }
            _ => return Err(spec_err(s, format!("unknown family {family:?}"))),
        };
        if params.next().is_some() {
            return Err(spec_err(s, "too many parameters"));
        }
        Ok(spec)
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Star(l) => write!(f, "star:{l}"),
            GraphSpec::Glitter(l) => write!(f, "glitter:{l}"),
            GraphSpec::Lollipop { clique, tail } => write!(f, "lollipop:{clique}:{tail}"),
            GraphSpec::Random { n, m, seed } => write!(f, "random:{n}:{m}:{seed}"),
            GraphSpec::Connected { n, m, seed } => write!(f, "connected:{n}:{m}:{seed}"),
            GraphSpec::DisconnectedPair(inner) => write!(f, "disconnected-pair:{inner}"),
        }
    }
}

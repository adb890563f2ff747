//! Invariant suites shared by the test-suite and the `validate` command.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::connectivity::{bfs_connected, component_labels};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::{ConnectivityQuery, Graph};
use crate::matrix::{
    detailed_balance_residual, potential_distribution, stationarity_residual, transition_matrix,
    DenseMatrix,
};
use crate::potential::Potential;
use crate::rng;
use crate::split::SplitView;
use crate::stats::{measure_return_counts, return_count_bound};
use crate::union_find::DisjointSet;
use crate::walk::{self, Kernel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Graph,
    Kernel,
    Split,
    ReturnRate,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(Suite::Graph),
            "kernel" => Ok(Suite::Kernel),
            "split" => Ok(Suite::Split),
            "return-rate" => Ok(Suite::ReturnRate),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidParameter(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Small,
    Medium,
    Large,
}

impl Budget {
    fn scale(self) -> usize {
        match self {
            Budget::Small => 1,
            Budget::Medium => 4,
            Budget::Large => 16,
        }
    }
}

impl FromStr for Budget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Budget::Small),
            "medium" => Ok(Budget::Medium),
            "large" => Ok(Budget::Large),
            _ => Err(Error::InvalidParameter(format!("unknown budget {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}/{}: {}", self.suite, self.name, self.detail)
    }
}

fn outcome(
    suite: &'static str,
    name: impl Into<String>,
    failure: Option<String>,
    ok: String,
) -> CheckOutcome {
    CheckOutcome {
        suite,
        name: name.into(),
        passed: failure.is_none(),
        detail: failure.unwrap_or(ok),
    }
}

/// Small random graphs with a mix of densities, some disconnected.
pub fn fuzz_graphs(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut r = rng::seeded(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(2..=max_n);
            let max_m = n * (n - 1) / 2;
            let m = r.gen_range(0..=max_m.min(3 * n));
            generators::random_graph(n, m, r.gen()).expect("feasible edge count")
        })
        .collect()
}

/// Connected counterpart of [`fuzz_graphs`].
pub fn fuzz_connected_graphs(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut r = rng::seeded(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(min_n.max(2)..=max_n);
            let max_m = n * (n - 1) / 2;
            let m = r.gen_range(n - 1..=max_m.min(3 * n).max(n - 1));
            generators::random_connected_graph(n, m, r.gen()).expect("feasible edge count")
        })
        .collect()
}

/// Largest absolute z-score of observed counts against exact probabilities.
/// Cells with probability 0 that were observed give `f64::INFINITY`.
pub fn max_binomial_z(counts: &[u64], probs: &[f64], samples: u64) -> f64 {
    let n = samples as f64;
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let var = n * p * (1.0 - p);
            let dev = (c as f64 - n * p).abs();
            if var <= 0.0 {
                if dev < 0.5 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                dev / var.sqrt()
            }
        })
        .fold(0.0, f64::max)
}

/// One-step frequencies of `next_state` from every node vs. the exact rows.
pub fn kernel_frequency_z(g: &Graph, f: &Potential, samples: u64, seed: u64) -> Result<f64> {
    let p = transition_matrix::<f64>(g, f)?;
    let n = g.node_count();
    let mut worst: f64 = 0.0;
    for v in 0..n {
        let mut r = rng::stream(seed, v as u64);
        let mut counts = vec![0u64; n];
        for _ in 0..samples {
            counts[walk::step(g, f, v, &mut r).to] += 1;
        }
        worst = worst.max(max_binomial_z(&counts, p.row(v), samples));
    }
    Ok(worst)
}

/// One-step frequencies of the virtual split walk vs. the unit kernel of the
/// materialised split graph.
pub fn split_kernel_z(g: &Graph, d: usize, samples: u64, seed: u64) -> Result<f64> {
    let sv = SplitView::new(g, d)?;
    let m = sv.materialize(4096)?;
    let p: DenseMatrix<f64> = transition_matrix(&m.graph, &Potential::Unit)?;
    let n_star = sv.node_count();
    let mut worst: f64 = 0.0;
    for x in sv.nodes() {
        let id = m.id_of(x);
        let mut r = rng::stream(seed, id as u64);
        let mut counts = vec![0u64; n_star];
        for _ in 0..samples {
            counts[m.id_of(sv.step(x, &mut r))] += 1;
        }
        worst = worst.max(max_binomial_z(&counts, p.row(id), samples));
    }
    Ok(worst)
}

fn graph_suite(budget: Budget, seed: u64) -> Vec<CheckOutcome> {
    let mut graphs = fuzz_graphs(100 * budget.scale(), 40, seed);
    for l in [1, 3, 10] {
        graphs.push(generators::glitter_star(l).unwrap());
    }
    graphs.push(generators::lollipop(6, 5).unwrap());
    graphs.push(generators::complete(9).unwrap());

    let mut structural = None;
    let mut involution = None;
    let mut oracle = None;
    for (k, g) in graphs.iter().enumerate() {
        if let Err(e) = g.validate() {
            structural.get_or_insert(format!("graph {k}: {e}"));
        }
        for v in 0..g.node_count() {
            for port in 0..g.deg(v) {
                let (u, back) = g.traverse(v, port);
                if g.traverse(u, back) != (v, port) {
                    involution.get_or_insert(format!("graph {k}: arc ({v},{port})"));
                }
            }
        }
        let mut ds = DisjointSet::new();
        for v in 0..g.node_count() {
            ds.set(v);
        }
        for (u, v) in g.edges() {
            ds.union(&u, &v).unwrap();
        }
        let n = g.node_count();
        for s in 0..n.min(6) {
            for t in 0..n {
                let q = ConnectivityQuery::new(s, t);
                if bfs_connected(g, &q).unwrap() != ds.same(&s, &t).unwrap() {
                    oracle.get_or_insert(format!("graph {k}: query ({s},{t})"));
                }
            }
        }
    }
    let count = graphs.len();
    vec![
        outcome(
            "graph",
            "structure",
            structural,
            format!("{count} graphs valid"),
        ),
        outcome(
            "graph",
            "traverse-involution",
            involution,
            "all arcs".into(),
        ),
        outcome(
            "graph",
            "bfs-vs-union-find",
            oracle,
            "all queries agree".into(),
        ),
    ]
}

fn kernel_suite(budget: Budget, seed: u64) -> Vec<CheckOutcome> {
    let graphs = fuzz_graphs(20 * budget.scale(), 12, seed);
    let shipped = [Potential::Unit, Potential::Unbiased, Potential::FineTuned];
    let mut rows = None;
    let mut balance = None;
    let mut uniform = None;
    for (k, g) in graphs.iter().enumerate() {
        for f in &shipped {
            let p = transition_matrix::<f64>(g, f).unwrap();
            if p.row_sums().iter().any(|s| (s - 1.0).abs() > 1e-12) {
                rows.get_or_insert(format!("graph {k}, {f}: row sum off"));
            }
            let pi = potential_distribution::<f64>(g, f);
            let res = detailed_balance_residual(&p, &pi);
            if res > 1e-12 {
                balance.get_or_insert(format!("graph {k}, {f}: residual {res:e}"));
            }
            if matches!(f, Potential::Unit) {
                let res =
                    stationarity_residual(&p, &vec![1.0 / g.node_count() as f64; g.node_count()]);
                if res > 1e-12 {
                    uniform.get_or_insert(format!("graph {k}: residual {res:e}"));
                }
            }
        }
    }
    let samples = 50_000 * budget.scale() as u64;
    let mut worst: f64 = 0.0;
    for (k, g) in graphs.iter().take(4).enumerate() {
        for f in &shipped {
            worst = worst.max(kernel_frequency_z(g, f, samples, seed ^ k as u64).unwrap());
        }
    }
    let freq = (worst > 4.0).then(|| format!("max |z| = {worst:.2} > 4"));
    vec![
        outcome("kernel", "row-stochastic", rows, "all rows sum to 1".into()),
        outcome(
            "kernel",
            "detailed-balance",
            balance,
            "π ∝ f reversible".into(),
        ),
        outcome(
            "kernel",
            "uniform-stationary",
            uniform,
            "πP = π for unit potential".into(),
        ),
        outcome(
            "kernel",
            "sampler-vs-matrix",
            freq,
            format!("max |z| = {worst:.2} over {samples} draws per row"),
        ),
    ]
}

fn split_suite(budget: Budget, seed: u64) -> Vec<CheckOutcome> {
    let graphs = fuzz_graphs(40 * budget.scale(), 30, seed);
    let mut cap = None;
    let mut bound = None;
    let mut conn = None;
    for (k, g) in graphs.iter().enumerate() {
        let mut ds: Vec<usize> = vec![1, 2, 3];
        ds.push(g.max_degree().max(1));
        for d in ds {
            let sv = SplitView::new(g, d).unwrap();
            if sv.nodes().any(|x| sv.degree(x).unwrap() > d + 2) {
                cap.get_or_insert(format!("graph {k}, D={d}"));
            }
            let lhs = sv.node_count() as f64;
            let rhs = g.node_count() as f64 + 2.0 * g.edge_count() as f64 / d as f64;
            // n* < n + 2m/D, checked in integers: D n* < D n + 2m. Isolated
            // nodes keep one copy, so edgeless graphs give n* = n exactly.
            let holds = if g.edge_count() == 0 {
                sv.node_count() == g.node_count()
            } else {
                d * sv.node_count() < d * g.node_count() + 2 * g.edge_count()
            };
            if !holds {
                bound.get_or_insert(format!("graph {k}, D={d}: {lhs} >= {rhs}"));
            }
            let m = sv.materialize(1 << 16).unwrap();
            let base = component_labels(g);
            let split = component_labels(&m.graph);
            for x in sv.nodes() {
                for y in sv.nodes() {
                    let same_split = split[m.id_of(x)] == split[m.id_of(y)];
                    if same_split != (base[x.node] == base[y.node]) {
                        conn.get_or_insert(format!("graph {k}, D={d}: {x:?} vs {y:?}"));
                    }
                }
            }
        }
    }
    let samples = 100_000 * budget.scale() as u64;
    let mut worst: f64 = 0.0;
    for (k, g) in fuzz_graphs(3 * budget.scale(), 8, seed ^ 0x5eed)
        .iter()
        .enumerate()
    {
        for d in [1, 2] {
            worst = worst.max(split_kernel_z(g, d, samples, seed ^ k as u64).unwrap());
        }
    }
    let freq = (worst > 4.0).then(|| format!("max |z| = {worst:.2} > 4"));
    vec![
        outcome("split", "degree-cap", cap, "deg* <= D + 2".into()),
        outcome("split", "node-count-bound", bound, "n* < n + 2m/D".into()),
        outcome("split", "connectivity", conn, "components preserved".into()),
        outcome(
            "split",
            "virtual-vs-materialized",
            freq,
            format!("max |z| = {worst:.2} over {samples} draws per state"),
        ),
    ]
}

/// One cell of the return-rate sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ReturnRateCell {
    pub n: usize,
    pub max_degree: usize,
    pub node: usize,
    pub t: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub bound: f64,
}

impl ReturnRateCell {
    pub fn holds(&self) -> bool {
        self.estimate + 3.0 * self.std_error < self.bound
    }
}

/// Random `(graph, node, t)` cells with `Δ² <= t < 6n²` on connected graphs.
pub fn return_rate_sweep(
    cells: usize,
    trials: usize,
    max_n: usize,
    seed: u64,
) -> Vec<ReturnRateCell> {
    let mut r = rng::seeded(seed);
    let mut out = Vec::with_capacity(cells);
    let kernel = Kernel::unit();
    while out.len() < cells {
        let g = fuzz_connected_graphs(1, 4, max_n, r.gen()).pop().unwrap();
        let n = g.node_count() as u64;
        let delta = g.max_degree() as u64;
        let lo = (delta * delta).max(1);
        let hi = 6 * n * n;
        if lo >= hi {
            continue;
        }
        let t = r.gen_range(lo..hi);
        let node = r.gen_range(0..g.node_count());
        let rep = measure_return_counts(&g, &kernel, node, t, trials, r.gen()).unwrap();
        out.push(ReturnRateCell {
            n: g.node_count(),
            max_degree: g.max_degree(),
            node,
            t,
            estimate: rep.estimate,
            std_error: rep.se(),
            bound: return_count_bound(t, g.max_degree()),
        });
    }
    out
}

fn return_rate_suite(budget: Budget, seed: u64) -> Vec<CheckOutcome> {
    let cells = return_rate_sweep(10 * budget.scale(), 500, 20, seed);
    let bad = cells.iter().find(|c| !c.holds()).map(|c| {
        format!(
            "n={} Δ={} t={}: {:.2} + 3·{:.2} >= {:.2}",
            c.n, c.max_degree, c.t, c.estimate, c.std_error, c.bound
        )
    });
    vec![outcome(
        "return-rate",
        "returns-below-5sqrt(t)+2Δ",
        bad,
        format!("{} cells", cells.len()),
    )]
}

pub fn run_suite(suite: Suite, budget: Budget, seed: u64) -> Vec<CheckOutcome> {
    match suite {
        Suite::Graph => graph_suite(budget, seed),
        Suite::Kernel => kernel_suite(budget, seed),
        Suite::Split => split_suite(budget, seed),
        Suite::ReturnRate => return_rate_suite(budget, seed),
        Suite::All => [Suite::Graph, Suite::Kernel, Suite::Split, Suite::ReturnRate]
            .into_iter()
            .flat_map(|s| run_suite(s, budget, seed))
            .collect(),
    }
}

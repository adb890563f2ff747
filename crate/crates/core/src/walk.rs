//! Metropolis-Hastings walk simulation.
//!
//! Time conventions: a trace of `t` steps occupies positions at times
//! `0, 1, ..., t`. `N_v(t)` counts times in `[0, t)` at which the walk sits at
//! `v`, and the first hit `T_v` is the least time `>= 1` at which it does.

use std::io::Write;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::potential::Potential;

/// Outcome of a single transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub to: NodeId,
    /// Global arc index when the walk moved along an edge.
    pub arc: Option<usize>,
}

/// One step of `RW(G_f)` from `v` without validation. Isolated nodes absorb.
#[inline]
pub fn step<R: Rng + ?Sized>(g: &Graph, f: &Potential, v: NodeId, rng: &mut R) -> Step {
    let deg_v = g.deg(v);
    if deg_v == 0 {
        return Step { to: v, arc: None };
    }
    let port = rng.gen_range(0..deg_v);
    let (u, _) = g.traverse(v, port);
    let deg_u = g.deg(u);
    let accept = match f {
        // Integer Bernoulli(deg_v / deg_u), exact.
        Potential::Unit => deg_u <= deg_v || rng.gen_range(0..deg_u) < deg_v,
        _ => {
            let p = f.acceptance(g, v, u);
            p >= 1.0 || rng.gen::<f64>() < p
        }
    };
    if accept {
        Step {
            to: u,
            arc: Some(g.arc_index(v, port)),
        }
    } else {
        Step { to: v, arc: None }
    }
}

/// Samples the next state of the walk `RW(G_f)` from `v`.
pub fn next_state<R: Rng + ?Sized>(
    g: &Graph,
    f: &Potential,
    v: NodeId,
    rng: &mut R,
) -> Result<NodeId> {
    g.check_node(v)?;
    Ok(step(g, f, v, rng).to)
}

/// A stepping rule: either a fixed Metropolis kernel or the hybrid walk
/// alternating unbiased and unit-potential phases of doubling length.
#[derive(Debug, Clone)]
pub enum Kernel {
    Metropolis(Potential),
    Hybrid,
}

impl Kernel {
    pub fn name(&self) -> String {
        match self {
            Kernel::Metropolis(f) => f.name(),
            Kernel::Hybrid => "hybrid".into(),
        }
    }

    pub fn unit() -> Self {
        Kernel::Metropolis(Potential::Unit)
    }
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "hybrid" {
            Ok(Kernel::Hybrid)
        } else {
            s.parse().map(Kernel::Metropolis)
        }
    }
}

impl From<Potential> for Kernel {
    fn from(f: Potential) -> Self {
        Kernel::Metropolis(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseKind {
    /// `RW(G)`, the unbiased random walk.
    Unbiased,
    /// `RW(G_1)`, the unit-potential Metropolis walk.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Phase {
    pub kind: PhaseKind,
    pub len: u64,
}

/// Phase `k` of the hybrid walk: kind alternates starting with `RW(G)`,
/// lengths run 1, 1, 2, 2, 4, 4, ...
fn hybrid_phase(k: u32) -> Phase {
    Phase {
        kind: if k.is_multiple_of(2) {
            PhaseKind::Unbiased
        } else {
            PhaseKind::Unit
        },
        len: 1u64 << (k / 2).min(62),
    }
}

/// The phases of a hybrid walk with `budget` steps; the last phase is
/// truncated to fit.
pub fn hybrid_schedule(budget: u64) -> Vec<Phase> {
    let mut out = Vec::new();
    let mut left = budget;
    let mut k = 0;
    while left > 0 {
        let mut phase = hybrid_phase(k);
        phase.len = phase.len.min(left);
        left -= phase.len;
        out.push(phase);
        k += 1;
    }
    out
}

/// Stateful walker over any [`Kernel`].
#[derive(Debug, Clone)]
pub struct Walker<'a> {
    g: &'a Graph,
    kernel: &'a Kernel,
    position: NodeId,
    time: u64,
    phase: u32,
    phase_left: u64,
}

impl<'a> Walker<'a> {
    pub fn new(g: &'a Graph, kernel: &'a Kernel, start: NodeId) -> Result<Self> {
        g.check_node(start)?;
        Ok(Self {
            g,
            kernel,
            position: start,
            time: 0,
            phase: 0,
            phase_left: 1,
        })
    }

    #[inline]
    pub fn position(&self) -> NodeId {
        self.position
    }

    #[inline]
    pub fn time(&self) -> u64 {
        self.time
    }

    #[inline]
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Step {
        let s = match self.kernel {
            Kernel::Metropolis(f) => step(self.g, f, self.position, rng),
            Kernel::Hybrid => {
                if self.phase_left == 0 {
                    self.phase += 1;
                    self.phase_left = hybrid_phase(self.phase).len;
                }
                self.phase_left -= 1;
                let f = match hybrid_phase(self.phase).kind {
                    PhaseKind::Unbiased => &Potential::Unbiased,
                    PhaseKind::Unit => &Potential::Unit,
                };
                step(self.g, f, self.position, rng)
            }
        };
        self.position = s.to;
        self.time += 1;
        s
    }
}

/// Which statistics a walk run records.
#[derive(Debug, Clone, Default)]
pub struct TraceOptions {
    pub count_visits: bool,
    pub count_arcs: bool,
    pub tracked: Vec<NodeId>,
}

impl TraceOptions {
    pub fn full() -> Self {
        Self {
            count_visits: true,
            count_arcs: true,
            tracked: Vec::new(),
        }
    }

    pub fn tracking(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        Self {
            tracked: nodes.into_iter().collect(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkTrace {
    pub start: NodeId,
    pub steps_taken: u64,
    pub final_node: NodeId,
    /// Occupancy at times `0..=steps_taken`; sums to `steps_taken + 1`.
    pub occupancy: Option<Vec<u64>>,
    /// `(node, T_node)` for each tracked node, `None` if never hit.
    pub first_hits: Vec<(NodeId, Option<u64>)>,
    /// Traversals per arc index during `[0, steps_taken)`.
    pub arc_counts: Option<Vec<u64>>,
}

impl WalkTrace {
    /// `N_v(t)`: visits at times in `[0, t)`.
    pub fn visits(&self, v: NodeId) -> Option<u64> {
        self.occupancy
            .as_ref()
            .map(|occ| occ[v] - u64::from(self.final_node == v))
    }

    pub fn first_hit(&self, v: NodeId) -> Option<u64> {
        self.first_hits
            .iter()
            .find(|(x, _)| *x == v)
            .and_then(|(_, t)| *t)
    }

    /// CSV `node,visits` rows with `N_v(t)` per node.
    pub fn write_visits_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "visits"])?;
        if let Some(occ) = &self.occupancy {
            for v in 0..occ.len() {
                w.write_record([v.to_string(), self.visits(v).unwrap().to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// CSV `node,first_hit` rows; never-hit nodes have an empty time.
    pub fn write_hits_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "first_hit"])?;
        for (v, t) in &self.first_hits {
            w.write_record([v.to_string(), t.map(|t| t.to_string()).unwrap_or_default()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn run_kernel<R: Rng + ?Sized>(
    g: &Graph,
    kernel: &Kernel,
    start: NodeId,
    steps: u64,
    opts: &TraceOptions,
    rng: &mut R,
) -> Result<WalkTrace> {
    for &v in &opts.tracked {
        g.check_node(v)?;
    }
    let mut walker = Walker::new(g, kernel, start)?;
    let mut occupancy = opts.count_visits.then(|| vec![0u64; g.node_count()]);
    let mut arc_counts = opts.count_arcs.then(|| vec![0u64; g.arc_count()]);
    let mut first_hits: Vec<(NodeId, Option<u64>)> =
        opts.tracked.iter().map(|&v| (v, None)).collect();

    if let Some(occ) = occupancy.as_mut() {
        occ[start] += 1;
    }
    for _ in 0..steps {
        let s = walker.step(rng);
        if let (Some(arcs), Some(a)) = (arc_counts.as_mut(), s.arc) {
            arcs[a] += 1;
        }
        if let Some(occ) = occupancy.as_mut() {
            occ[s.to] += 1;
        }
        for (v, hit) in first_hits.iter_mut() {
            if hit.is_none() && *v == s.to {
                *hit = Some(walker.time());
            }
        }
    }
    Ok(WalkTrace {
        start,
        steps_taken: steps,
        final_node: walker.position(),
        occupancy,
        first_hits,
        arc_counts,
    })
}

/// Runs `t` steps of `RW(G_f)` from `start`.
pub fn run_walk<R: Rng + ?Sized>(
    g: &Graph,
    f: &Potential,
    start: NodeId,
    t: u64,
    opts: &TraceOptions,
    rng: &mut R,
) -> Result<WalkTrace> {
    run_kernel(g, &Kernel::Metropolis(f.clone()), start, t, opts, rng)
}

/// Runs the hybrid walk for `budget` steps, following [`hybrid_schedule`].
pub fn run_hybrid_walk<R: Rng + ?Sized>(
    g: &Graph,
    start: NodeId,
    budget: u64,
    opts: &TraceOptions,
    rng: &mut R,
) -> Result<WalkTrace> {
    if budget < 2 {
        return Err(Error::InvalidParameter(format!(
            "hybrid walk budget must be >= 2, got {budget}"
        )));
    }
    run_kernel(g, &Kernel::Hybrid, start, budget, opts, rng)
}

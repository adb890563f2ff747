//! Randomized solvers for undirected s-t connectivity.
//!
//! Both solvers have one-sided error: `Connected` is only ever reported when
//! a walk has actually linked `s` to `t`.
//!
//! * [`solve_logspace`] runs a single unit-potential walk from `s`.
//! * [`test_connectivity`] releases short unit-potential walks on the split
//!   graph `G*` from `p` uniformly sampled landmarks plus `(s,0)` and
//!   `(t,0)`, merging landmark classes in a disjoint-set structure whenever a
//!   walk started at one landmark stands on another.
//!
//! Walk lengths use base-2 logarithms for the landmark solver and the
//! natural logarithm for the single-walk bound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ConnectivityQuery, Graph};
use crate::potential::Potential;
use crate::rng::{self, WalkRng};
use crate::split::{SplitNode, SplitView};
use crate::union_find::DisjointSet;
use crate::walk;

pub const DEFAULT_GAMMA: f64 = 60.0;
pub const DEFAULT_BETA: f64 = 72.0;
/// Multiplier of `n² ln n` in the single-walk length.
pub const LOGSPACE_FACTOR: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Connected,
    ProbablyNotConnected,
}

impl Answer {
    pub fn is_connected(self) -> bool {
        self == Answer::Connected
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Landmark,
    Logspace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkConfig {
    /// Number of sampled landmarks `p`.
    pub landmarks: usize,
    pub gamma: f64,
    pub beta: f64,
    /// Uniform multiplier on the round count and the walk length.
    pub c_scale: f64,
    pub seed: u64,
    /// Fixed split parameter `D`; `None` uses `⌈√(m/p)⌉`.
    pub split_override: Option<usize>,
    /// Stop as soon as `(s,0)` and `(t,0)` share a class. The answer cannot
    /// change afterwards, so this only affects `steps_executed`.
    pub stop_when_merged: bool,
}

impl LandmarkConfig {
    pub fn new(landmarks: usize, seed: u64) -> Self {
        Self {
            landmarks,
            gamma: DEFAULT_GAMMA,
            beta: DEFAULT_BETA,
            c_scale: 1.0,
            seed,
            split_override: None,
            stop_when_merged: true,
        }
    }

    pub fn with_c_scale(mut self, c_scale: f64) -> Self {
        self.c_scale = c_scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.landmarks == 0 {
            return Err(Error::InvalidParameter(
                "landmark count p must be >= 1".into(),
            ));
        }
        for (name, x) in [
            ("gamma", self.gamma),
            ("beta", self.beta),
            ("c_scale", self.c_scale),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {x}"
                )));
            }
        }
        if self.split_override == Some(0) {
            return Err(Error::InvalidParameter(
                "split parameter D must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub solver: SolverKind,
    pub answer: Answer,
    pub steps_executed: u64,
    /// Upper bound on `steps_executed` implied by the configuration.
    pub step_budget: u64,
    /// Distinct landmarks in the disjoint-set structure (including s and t).
    pub landmarks_used: usize,
    pub merged_class_count: usize,
    pub seed: u64,
    /// Sampled landmark count `p` (landmark solver only).
    pub p: Option<usize>,
    pub split_parameter: Option<usize>,
    pub split_node_count: Option<usize>,
    pub walk_length: u64,
    pub rounds: u64,
    /// Working-memory proxy `S`: one split-node id of `⌈log₂ n*⌉` bits per landmark.
    pub space_bits: u64,
}

fn log2_ceil_bits(x: usize) -> u64 {
    (usize::BITS - x.max(2).saturating_sub(1).leading_zeros()) as u64
}

/// Walk length for the single-walk solver: `⌈24 n² ln n · c_scale⌉`.
pub fn logspace_walk_length(n: usize, c_scale: f64) -> u64 {
    let n = n as f64;
    (LOGSPACE_FACTOR * n * n * n.ln() * c_scale).ceil().max(0.0) as u64
}

/// Runs one unit-potential walk from `s`; `Connected` iff it reaches `t`.
pub fn solve_logspace(
    g: &Graph,
    q: &ConnectivityQuery,
    c_scale: f64,
    seed: u64,
) -> Result<SolveResult> {
    q.validate(g)?;
    if !(c_scale.is_finite() && c_scale > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "c_scale must be positive, got {c_scale}"
        )));
    }
    let budget = logspace_walk_length(g.node_count(), c_scale);
    let mut result = SolveResult {
        solver: SolverKind::Logspace,
        answer: Answer::ProbablyNotConnected,
        steps_executed: 0,
        step_budget: budget,
        landmarks_used: if q.source == q.target { 1 } else { 2 },
        merged_class_count: if q.source == q.target { 1 } else { 2 },
        seed,
        p: None,
        split_parameter: None,
        split_node_count: None,
        walk_length: budget,
        rounds: 1,
        space_bits: 2 * log2_ceil_bits(g.node_count()) + 64,
    };
    if q.source == q.target {
        result.answer = Answer::Connected;
        return Ok(result);
    }
    let mut rng = rng::seeded(seed);
    let mut v = q.source;
    if g.deg(v) == 0 {
        result.steps_executed = budget;
        return Ok(result);
    }
    for step in 1..=budget {
        v = walk::step(g, &Potential::Unit, v, &mut rng).to;
        if v == q.target {
            result.answer = Answer::Connected;
            result.steps_executed = step;
            result.merged_class_count = 1;
            return Ok(result);
        }
    }
    result.steps_executed = budget;
    Ok(result)
}

/// `D = max(1, ⌈√(m/p)⌉)`, computed exactly in integers.
pub fn compute_split_parameter(m: usize, p: usize) -> usize {
    assert!(p >= 1, "p must be positive");
    let mut d = ((m as f64 / p as f64).sqrt().ceil() as usize).max(1);
    while d > 1 && (d - 1) * (d - 1) * p >= m {
        d -= 1;
    }
    while d * d * p < m {
        d += 1;
    }
    d
}

/// `⌈ ⌈max{γ (n*/p) log₂ n*, D+2}⌉² · c_scale ⌉`, at least 1.
pub fn compute_walk_length(sv: &SplitView<'_>, cfg: &LandmarkConfig) -> u64 {
    let n_star = sv.node_count() as f64;
    let np = (cfg.gamma * n_star / cfg.landmarks as f64 * n_star.log2())
        .max(sv.degree_cap() as f64)
        .ceil();
    (np * np * cfg.c_scale).ceil().clamp(1.0, u64::MAX as f64) as u64
}

/// `⌈β log₂ n* · c_scale⌉`, at least 1.
pub fn compute_rounds(sv: &SplitView<'_>, cfg: &LandmarkConfig) -> u64 {
    (cfg.beta * (sv.node_count() as f64).log2() * cfg.c_scale)
        .ceil()
        .max(1.0) as u64
}

/// Draws `p` ranks uniformly from `1..=n*` (with repetition) and maps them to
/// split nodes by enumerating `V*` in `(v, copy)` order. The result is sorted
/// by rank and keeps repeated draws.
pub fn sample_landmarks<R: Rng + ?Sized>(
    sv: &SplitView<'_>,
    p: usize,
    rng: &mut R,
) -> Vec<SplitNode> {
    let n_star = sv.node_count();
    let mut ranks: Vec<usize> = (0..p).map(|_| rng.gen_range(1..=n_star)).collect();
    ranks.sort_unstable();
    let mut out = Vec::with_capacity(p);
    let mut next = ranks.iter().peekable();
    for (i, x) in sv.nodes().enumerate() {
        let rank = i + 1;
        while next.next_if(|&&r| r == rank).is_some() {
            out.push(x);
        }
        if next.peek().is_none() {
            break;
        }
    }
    out
}

/// Landmark solver state: the split view, the landmark classes and the
/// derived walk schedule.
#[derive(Debug, Clone)]
pub struct LandmarkState<'g> {
    pub view: SplitView<'g>,
    pub classes: DisjointSet<SplitNode>,
    pub sampled: Vec<SplitNode>,
    pub walk_length: u64,
    pub rounds: u64,
    source: usize,
    target: usize,
}

impl<'g> LandmarkState<'g> {
    /// Chooses `D`, samples the landmarks and registers every landmark as a
    /// singleton class. `(s,0)` and `(t,0)` come first; repeated landmarks
    /// share one element.
    pub fn new(
        g: &'g Graph,
        q: &ConnectivityQuery,
        cfg: &LandmarkConfig,
        rng: &mut WalkRng,
    ) -> Result<Self> {
        q.validate(g)?;
        cfg.validate()?;
        let d = cfg
            .split_override
            .unwrap_or_else(|| compute_split_parameter(g.edge_count(), cfg.landmarks));
        let view = SplitView::new(g, d)?;
        let sampled = sample_landmarks(&view, cfg.landmarks, rng);
        let mut classes = DisjointSet::new();
        let source = classes.set(SplitNode::new(q.source, 0));
        let target = classes.set(SplitNode::new(q.target, 0));
        for &l in &sampled {
            classes.set(l);
        }
        Ok(Self {
            walk_length: compute_walk_length(&view, cfg),
            rounds: compute_rounds(&view, cfg),
            view,
            classes,
            sampled,
            source,
            target,
        })
    }

    pub fn merged(&mut self) -> bool {
        self.classes.find_index(self.source) == self.classes.find_index(self.target)
    }

    /// `landmarks × rounds × walk_length`, saturating.
    pub fn step_budget(&self) -> u64 {
        (self.classes.len() as u64)
            .saturating_mul(self.rounds)
            .saturating_mul(self.walk_length)
    }

    /// One walk of `walk_length` steps from landmark `li`, merging classes on
    /// every landmark it stands on. Returns the steps taken; stops early only
    /// if `stop_when_merged` is set and s and t become merged.
    fn walk_from(&mut self, li: usize, stop_when_merged: bool, rng: &mut WalkRng) -> u64 {
        let start = *self.classes.element(li);
        if self.view.degree(start).unwrap_or(0) == 0 {
            // An isolated split node never moves and only ever sees itself.
            return self.walk_length;
        }
        let mut x = start;
        for step in 1..=self.walk_length {
            x = self.view.step(x, rng);
            if let Some(j) = self.classes.index_of(&x) {
                let a = self.classes.find_index(j);
                let b = self.classes.find_index(li);
                if a != b {
                    self.classes.union_roots(a, b);
                    if stop_when_merged && self.merged() {
                        return step;
                    }
                }
            }
        }
        self.walk_length
    }

    /// Runs all rounds. Returns the number of walk steps executed.
    pub fn run(&mut self, stop_when_merged: bool, rng: &mut WalkRng) -> u64 {
        let mut steps = 0u64;
        if stop_when_merged && self.merged() {
            return 0;
        }
        for _ in 0..self.rounds {
            for li in 0..self.classes.len() {
                steps += self.walk_from(li, stop_when_merged, rng);
                if stop_when_merged && self.merged() {
                    return steps;
                }
            }
        }
        steps
    }
}

/// The landmark algorithm on the split graph.
pub fn test_connectivity(
    g: &Graph,
    q: &ConnectivityQuery,
    cfg: &LandmarkConfig,
) -> Result<SolveResult> {
    let mut rng = rng::seeded(cfg.seed);
    let mut state = LandmarkState::new(g, q, cfg, &mut rng)?;
    let steps = state.run(cfg.stop_when_merged, &mut rng);
    let answer = if state.merged() {
        Answer::Connected
    } else {
        Answer::ProbablyNotConnected
    };
    let n_star = state.view.node_count();
    Ok(SolveResult {
        solver: SolverKind::Landmark,
        answer,
        steps_executed: steps,
        step_budget: state.step_budget(),
        landmarks_used: state.classes.len(),
        merged_class_count: state.classes.class_count(),
        seed: cfg.seed,
        p: Some(cfg.landmarks),
        split_parameter: Some(state.view.split_parameter()),
        split_node_count: Some(n_star),
        walk_length: state.walk_length,
        rounds: state.rounds,
        space_bits: state.classes.len() as u64 * log2_ceil_bits(n_star),
    })
}

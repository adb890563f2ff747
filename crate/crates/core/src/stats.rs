//! Monte-Carlo estimators for cover, hitting, commute and return statistics.
//!
//! Trial `k` of an estimator seeded with `seed` always draws from
//! [`rng::stream`]`(seed, k)`, so reports are identical whatever the thread
//! count. Trials that reach their step cap are kept at the cap value and
//! counted in [`EstimatorReport::censored`].

use std::io::Write;

use num_traits::Float;
use rayon::prelude::*;
use serde::Serialize;

use crate::connectivity::component_of;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng;
use crate::walk::{Kernel, Walker};

pub use crate::matrix::exact_expected_visits;

/// Per-trial hard cap of `100 n²` steps for hitting-time estimators.
pub fn default_step_cap(g: &Graph) -> u64 {
    100 * (g.node_count() as u64).pow(2)
}

/// `5 √t + 2Δ`: bound on the expected number of returns to the start node.
pub fn return_count_bound(t: u64, max_degree: usize) -> f64 {
    5.0 * (t as f64).sqrt() + 2.0 * max_degree as f64
}

/// `(|A| + 1)(6|A| + 2Δ)`: bound on the expected exit time from a node set `A`.
pub fn exit_time_bound(set_size: usize, max_degree: usize) -> f64 {
    (set_size as f64 + 1.0) * (6.0 * set_size as f64 + 2.0 * max_degree as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorReport {
    pub quantity: String,
    pub estimate: f64,
    pub trials: usize,
    /// Standard error of the mean; absent with fewer than two trials.
    pub std_error: Option<f64>,
    pub samples: Vec<f64>,
    pub censored: usize,
    pub graph: String,
    pub kernel: String,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl EstimatorReport {
    fn from_samples(
        quantity: &str,
        g: &Graph,
        kernel: &Kernel,
        seed: u64,
        samples: Vec<f64>,
        censored: usize,
    ) -> Self {
        let (estimate, std_error) = mean_and_se(&samples);
        Self {
            quantity: quantity.into(),
            estimate,
            trials: samples.len(),
            std_error,
            samples,
            censored,
            graph: format!("n={},m={}", g.node_count(), g.edge_count()),
            kernel: kernel.name(),
            seed,
            notes: Vec::new(),
        }
    }

    pub fn is_censored(&self) -> bool {
        self.censored > 0
    }

    /// Standard error, or 0 when it is not defined.
    pub fn se(&self) -> f64 {
        self.std_error.unwrap_or(0.0)
    }

    pub fn with_graph(mut self, descriptor: impl Into<String>) -> Self {
        self.graph = descriptor.into();
        self
    }

    /// CSV with one `trial` row per sample followed by a `summary` row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "row",
            "quantity",
            "graph",
            "kernel",
            "seed",
            "trial",
            "value",
            "trials",
            "std_error",
            "censored",
        ])?;
        let seed = self.seed.to_string();
        for (k, x) in self.samples.iter().enumerate() {
            w.write_record([
                "trial",
                &self.quantity,
                &self.graph,
                &self.kernel,
                &seed,
                &k.to_string(),
                &x.to_string(),
                "",
                "",
                "",
            ])?;
        }
        w.write_record([
            "summary",
            &self.quantity,
            &self.graph,
            &self.kernel,
            &seed,
            "",
            &self.estimate.to_string(),
            &self.trials.to_string(),
            &self.std_error.map(|s| s.to_string()).unwrap_or_default(),
            &self.censored.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

pub fn mean_and_se(samples: &[f64]) -> (f64, Option<f64>) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, None);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, None);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Some((var / n as f64).sqrt()))
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        Err(Error::InvalidParameter("need at least one trial".into()))
    } else {
        Ok(())
    }
}

/// Runs `trials` independent closures in parallel, in trial order.
fn run_trials<F>(trials: usize, seed: u64, f: F) -> Vec<(f64, bool)>
where
    F: Fn(&mut rng::WalkRng) -> (f64, bool) + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|k| f(&mut rng::stream(seed, k)))
        .collect()
}

fn split_censored(results: Vec<(f64, bool)>) -> (Vec<f64>, usize) {
    let censored = results.iter().filter(|r| r.1).count();
    (results.into_iter().map(|r| r.0).collect(), censored)
}

/// Steps until every node of `start`'s component has been visited.
pub fn cover_trial(
    g: &Graph,
    kernel: &Kernel,
    start: NodeId,
    component_size: usize,
    step_cap: u64,
    rng: &mut rng::WalkRng,
) -> (u64, bool) {
    let mut seen = vec![false; g.node_count()];
    seen[start] = true;
    let mut remaining = component_size - 1;
    let mut w = Walker::new(g, kernel, start).expect("start validated");
    while remaining > 0 {
        if w.time() >= step_cap {
            return (step_cap, true);
        }
        let v = w.step(rng).to;
        if !seen[v] {
            seen[v] = true;
            remaining -= 1;
        }
    }
    (w.time(), false)
}

/// Mean number of steps for a walk from `start` to visit its whole component.
pub fn estimate_cover_time(
    g: &Graph,
    kernel: &Kernel,
    start: NodeId,
    trials: usize,
    step_cap: u64,
    seed: u64,
) -> Result<EstimatorReport> {
    g.check_node(start)?;
    check_trials(trials)?;
    let size = component_of(g, start).len();
    let results = run_trials(trials, seed, |r| {
        let (t, c) = cover_trial(g, kernel, start, size, step_cap, r);
        (t as f64, c)
    });
    let (samples, censored) = split_censored(results);
    let mut report =
        EstimatorReport::from_samples("cover_time", g, kernel, seed, samples, censored);
    if censored > 0 {
        report
            .notes
            .push(format!("{censored} trials censored at {step_cap} steps"));
    }
    Ok(report)
}

/// First time `>= 1` the walk from `from` stands on `to`, capped.
pub fn hitting_trial(
    g: &Graph,
    kernel: &Kernel,
    from: NodeId,
    to: NodeId,
    step_cap: u64,
    rng: &mut rng::WalkRng,
) -> (u64, bool) {
    let mut w = Walker::new(g, kernel, from).expect("start validated");
    loop {
        if w.time() >= step_cap {
            return (step_cap, true);
        }
        if w.step(rng).to == to {
            return (w.time(), false);
        }
    }
}

/// Mean of `T_to` for walks started at `from`.
pub fn estimate_hitting_time(
    g: &Graph,
    kernel: &Kernel,
    from: NodeId,
    to: NodeId,
    trials: usize,
    step_cap: u64,
    seed: u64,
) -> Result<EstimatorReport> {
    g.check_node(from)?;
    g.check_node(to)?;
    check_trials(trials)?;
    if !component_of(g, from).contains(&to) {
        return Err(Error::DifferentComponents(from, to));
    }
    let results = run_trials(trials, seed, |r| {
        let (t, c) = hitting_trial(g, kernel, from, to, step_cap, r);
        (t as f64, c)
    });
    let (samples, censored) = split_censored(results);
    let quantity = if from == to {
        "return_time"
    } else {
        "hitting_time"
    };
    Ok(EstimatorReport::from_samples(
        quantity, g, kernel, seed, samples, censored,
    ))
}

/// Commute time `E_u T_v + E_v T_u`, each trial pairing one walk per
/// direction. For `u == v` this is the mean return time `E_v T_v`.
pub fn estimate_commute_time(
    g: &Graph,
    kernel: &Kernel,
    u: NodeId,
    v: NodeId,
    trials: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    g.check_node(u)?;
    g.check_node(v)?;
    check_trials(trials)?;
    if !component_of(g, u).contains(&v) {
        return Err(Error::DifferentComponents(u, v));
    }
    let cap = default_step_cap(g);
    if u == v {
        return estimate_hitting_time(g, kernel, u, v, trials, cap, seed);
    }
    let results: Vec<(f64, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let (a, ca) = hitting_trial(g, kernel, u, v, cap, &mut rng::stream(seed, 2 * k));
            let (b, cb) = hitting_trial(g, kernel, v, u, cap, &mut rng::stream(seed, 2 * k + 1));
            ((a + b) as f64, ca || cb)
        })
        .collect();
    let (samples, censored) = split_censored(results);
    Ok(EstimatorReport::from_samples(
        "commute_time",
        g,
        kernel,
        seed,
        samples,
        censored,
    ))
}

/// Empirical `E_i N_i(t)`: visits to `i` at times `[0, t)` of a walk from `i`.
pub fn measure_return_counts(
    g: &Graph,
    kernel: &Kernel,
    i: NodeId,
    t: u64,
    trials: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    g.check_node(i)?;
    check_trials(trials)?;
    let results = run_trials(trials, seed, |r| {
        let mut w = Walker::new(g, kernel, i).expect("start validated");
        let mut visits = u64::from(t > 0);
        for _ in 1..t {
            if w.step(r).to == i {
                visits += 1;
            }
        }
        (visits as f64, false)
    });
    let (samples, _) = split_censored(results);
    let mut report = EstimatorReport::from_samples("return_count", g, kernel, seed, samples, 0);
    let n = g.node_count() as u64;
    if t == 0 || t >= 6 * n * n {
        report
            .notes
            .push(format!("t = {t} outside 0 < t < 6n² = {}", 6 * n * n));
    }
    Ok(report)
}

/// Empirical `E_i T_{V∖A}` for `i ∈ A`.
pub fn estimate_exit_time(
    g: &Graph,
    kernel: &Kernel,
    i: NodeId,
    set: &[NodeId],
    trials: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    g.check_node(i)?;
    check_trials(trials)?;
    let mut inside = vec![false; g.node_count()];
    for &v in set {
        g.check_node(v)?;
        inside[v] = true;
    }
    if !inside[i] {
        return Err(Error::InvalidParameter(format!("start {i} not in the set")));
    }
    let cap = default_step_cap(g);
    let results = run_trials(trials, seed, |r| {
        let mut w = Walker::new(g, kernel, i).expect("start validated");
        loop {
            if w.time() >= cap {
                return (cap as f64, true);
            }
            if !inside[w.step(r).to] {
                return (w.time() as f64, false);
            }
        }
    });
    let (samples, censored) = split_censored(results);
    Ok(EstimatorReport::from_samples(
        "exit_time",
        g,
        kernel,
        seed,
        samples,
        censored,
    ))
}

/// Least-squares line through `(ln size, ln estimate)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit<T> {
    pub exponent: T,
    pub intercept: T,
    pub r_squared: T,
}

pub fn fit_scaling_exponent<T: Float>(sizes: &[usize], estimates: &[T]) -> Result<ScalingFit<T>> {
    if sizes.len() != estimates.len() {
        return Err(Error::InvalidParameter(
            "sizes and estimates differ in length".into(),
        ));
    }
    if sizes.len() < 3 {
        return Err(Error::InvalidParameter(
            "need at least 3 points to fit".into(),
        ));
    }
    if sizes.contains(&0) || estimates.iter().any(|&e| e.is_nan() || e <= T::zero()) {
        return Err(Error::InvalidParameter(
            "sizes and estimates must be positive".into(),
        ));
    }
    let k = T::from(sizes.len()).unwrap();
    let xs: Vec<T> = sizes.iter().map(|&s| T::from(s).unwrap().ln()).collect();
    let ys: Vec<T> = estimates.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().fold(T::zero(), |a, &b| a + b) / k;
    let my = ys.iter().fold(T::zero(), |a, &b| a + b) / k;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
        syy = syy + (y - my) * (y - my);
    }
    if sxx == T::zero() {
        return Err(Error::InvalidParameter(
            "sizes must not all be equal".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == T::zero() {
        T::one()
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(ScalingFit {
        exponent: slope,
        intercept,
        r_squared,
    })
}

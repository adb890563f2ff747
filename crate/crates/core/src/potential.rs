//! Node potentials and the Metropolis-Hastings arc weights they induce.
//!
//! For a potential `f`, the arc `v -> u` carries weight
//! `min{f(v)/deg(v), f(u)/deg(u)}` and node `v` keeps the remainder
//! `f(v) - sum_u w(v -> u)` as a self-loop. Weights are symmetric, so the
//! walk is reversible with stationary distribution proportional to `f`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

type PotentialFn = dyn Fn(&Graph, NodeId) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum Potential {
    /// `f = 1`: uniform stationary distribution.
    Unit,
    /// `f(v) = deg(v) / d` with `d = 2m/n`: the simple random walk.
    Unbiased,
    /// `f(v) = deg(v) / d + 1`.
    FineTuned,
    Custom {
        name: String,
        f: Arc<PotentialFn>,
    },
}

impl Potential {
    pub fn custom<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Graph, NodeId) -> f64 + Send + Sync + 'static,
    {
        Potential::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Potential::Unit => "unit".into(),
            Potential::Unbiased => "unbiased".into(),
            Potential::FineTuned => "finetuned".into(),
            Potential::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    /// `f(v)` in scalar type `T`.
    ///
    /// The degree-based potentials use `max(deg(v), 1)` so that isolated
    /// nodes keep a positive potential; a graph without edges uses `d = 1`.
    pub fn value<T: Scalar>(&self, g: &Graph, v: NodeId) -> T {
        let degree_term = || {
            let m2 = 2 * g.edge_count();
            if m2 == 0 {
                T::one()
            } else {
                T::from_count(g.deg(v).max(1) * g.node_count()) / T::from_count(m2)
            }
        };
        match self {
            Potential::Unit => T::one(),
            Potential::Unbiased => degree_term(),
            Potential::FineTuned => degree_term() + T::one(),
            Potential::Custom { f, .. } => {
                T::from_f64(f(g, v)).expect("custom potential representable in scalar type")
            }
        }
    }

    #[inline]
    pub fn value_f64(&self, g: &Graph, v: NodeId) -> f64 {
        match self {
            Potential::Unit => 1.0,
            Potential::Custom { f, .. } => f(g, v),
            _ => self.value::<f64>(g, v),
        }
    }

    /// Rejects custom potentials that are not finite and strictly positive.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if let Potential::Custom { name, f } = self {
            for v in 0..g.node_count() {
                let x = f(g, v);
                if !(x.is_finite() && x > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "potential {name} has f({v}) = {x}, must be positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `w_f(e_vu)` for adjacent `v`, `u`.
    pub fn arc_weight<T: Scalar>(&self, g: &Graph, v: NodeId, u: NodeId) -> T {
        let wv = self.value::<T>(g, v) / T::from_count(g.deg(v));
        let wu = self.value::<T>(g, u) / T::from_count(g.deg(u));
        T::min_of(wv, wu)
    }

    /// `w_f(e_vv)`: the potential left over after all outgoing arcs.
    pub fn self_loop_weight<T: Scalar>(&self, g: &Graph, v: NodeId) -> T {
        g.neighbors(v)
            .iter()
            .fold(self.value::<T>(g, v), |acc, &u| {
                acc - self.arc_weight::<T>(g, v, u)
            })
    }

    /// `min{deg(v) f(u) / (deg(u) f(v)), 1}`, the chance of accepting a
    /// uniform proposal `u` from `v`.
    #[inline]
    pub fn acceptance(&self, g: &Graph, v: NodeId, u: NodeId) -> f64 {
        let ratio =
            (g.deg(v) as f64 * self.value_f64(g, u)) / (g.deg(u) as f64 * self.value_f64(g, v));
        ratio.min(1.0)
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Potential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Potential::Unit),
            "unbiased" => Ok(Potential::Unbiased),
            "finetuned" | "fine-tuned" => Ok(Potential::FineTuned),
            _ => Err(Error::InvalidParameter(format!("unknown potential {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;
    use proptest::prelude::*;

    use super::*;
    use crate::generators;

    fn shipped() -> [Potential; 3] {
        [Potential::Unit, Potential::Unbiased, Potential::FineTuned]
    }

    #[test]
    fn unit_weights_on_glitter_star() {
        let g = generators::glitter_star(2).unwrap();
        // middle 1 (deg 2) - leaf 3 (deg 1): min{1/2, 1} = 1/2
        let w: Rational64 = Potential::Unit.arc_weight(&g, 3, 1);
        assert_eq!(w, Rational64::new(1, 2));
        let loop_leaf: Rational64 = Potential::Unit.self_loop_weight(&g, 3);
        assert_eq!(loop_leaf, Rational64::new(1, 2));
        // hub (deg 2) - middle (deg 2): 1/2, so the middle has no self-loop
        let loop_mid: Rational64 = Potential::Unit.self_loop_weight(&g, 1);
        assert_eq!(loop_mid, Rational64::new(0, 1));
    }

    #[test]
    fn unbiased_weights_are_uniform() {
        let g = generators::lollipop(4, 3).unwrap();
        let d = Rational64::new(2 * g.edge_count() as i64, g.node_count() as i64);
        for v in 0..g.node_count() {
            for &u in g.neighbors(v) {
                let w: Rational64 = Potential::Unbiased.arc_weight(&g, v, u);
                assert_eq!(w, d.recip());
            }
            let l: Rational64 = Potential::Unbiased.self_loop_weight(&g, v);
            assert_eq!(l, Rational64::new(0, 1));
        }
    }

    #[test]
    fn acceptance_forced_by_degree_ratio() {
        // v has degree 2, u has degree 4
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        assert_eq!(g.deg(0), 2);
        assert_eq!(g.deg(1), 4);
        assert_eq!(Potential::Unit.acceptance(&g, 0, 1), 0.5);
        assert_eq!(Potential::Unit.acceptance(&g, 1, 0), 1.0);
        assert_eq!(Potential::Unbiased.acceptance(&g, 0, 1), 1.0);
    }

    #[test]
    fn custom_validation() {
        let g = generators::path(3).unwrap();
        assert!(Potential::custom("ok", |_, v| 1.0 + v as f64)
            .validate(&g)
            .is_ok());
        assert!(Potential::custom("bad", |_, v| v as f64)
            .validate(&g)
            .is_err());
        assert_eq!(
            "finetuned".parse::<Potential>().unwrap().name(),
            "finetuned"
        );
        assert!("lazy".parse::<Potential>().is_err());
    }

    proptest! {
        #[test]
        fn weights_symmetric_and_loops_nonnegative(
            n in 2usize..24, density in 0.0f64..1.0, seed in any::<u64>()
        ) {
            let m = ((n * (n - 1) / 2) as f64 * density) as usize;
            let g = generators::random_graph(n, m, seed).unwrap();
            for f in shipped() {
                for v in 0..n {
                    for &u in g.neighbors(v) {
                        let a: Rational64 = f.arc_weight(&g, v, u);
                        let b: Rational64 = f.arc_weight(&g, u, v);
                        prop_assert_eq!(a, b);
                    }
                    let l: Rational64 = f.self_loop_weight(&g, v);
                    prop_assert!(l >= Rational64::new(0, 1));
                }
            }
        }
    }
}

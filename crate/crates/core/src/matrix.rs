//! Exact transition kernels for small-graph oracles.
//!
//! Everything here is generic over [`Scalar`], so the same identities can be
//! checked in floating point or in exact rational arithmetic.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::potential::Potential;
use crate::scalar::Scalar;

pub const DEFAULT_MATRIX_CAP: usize = 2000;
pub const MAX_VISIT_HORIZON: u64 = 100_000;

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row(i).iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    /// Row vector times matrix, `x P`.
    pub fn left_mul(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut out = vec![T::zero(); self.n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(self.row(i)) {
                *o = o.clone() + xi.clone() * p.clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            let row = other.left_mul(self.row(i));
            out.data[i * self.n..(i + 1) * self.n].clone_from_slice(&row);
        }
        out
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// `P[v][u] = w_f(e_vu) / f(v)` for `u` in `Γ(v) ∪ {v}`, with the default cap.
pub fn transition_matrix<T: Scalar>(g: &Graph, f: &Potential) -> Result<DenseMatrix<T>> {
    transition_matrix_capped(g, f, DEFAULT_MATRIX_CAP)
}

pub fn transition_matrix_capped<T: Scalar>(
    g: &Graph,
    f: &Potential,
    cap: usize,
) -> Result<DenseMatrix<T>> {
    let n = g.node_count();
    check_cap(n, cap)?;
    f.validate(g)?;
    let mut p = DenseMatrix::zeros(n);
    for v in 0..n {
        let fv = f.value::<T>(g, v);
        for &u in g.neighbors(v) {
            p[(v, u)] = f.arc_weight::<T>(g, v, u) / fv.clone();
        }
        p[(v, v)] = f.self_loop_weight::<T>(g, v) / fv;
    }
    Ok(p)
}

/// `π ∝ f`, normalised over all nodes.
pub fn potential_distribution<T: Scalar>(g: &Graph, f: &Potential) -> Vec<T> {
    let values: Vec<T> = (0..g.node_count()).map(|v| f.value::<T>(g, v)).collect();
    let total = values.iter().cloned().fold(T::zero(), |a, b| a + b);
    values.into_iter().map(|x| x / total.clone()).collect()
}

/// `max_v |(πP)_v - π_v|`.
pub fn stationarity_residual<T: Scalar>(p: &DenseMatrix<T>, pi: &[T]) -> T {
    p.left_mul(pi)
        .into_iter()
        .zip(pi)
        .map(|(a, b)| (a - b.clone()).magnitude())
        .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
}

/// `max_{v,u} |π_v P[v][u] - π_u P[u][v]|`.
pub fn detailed_balance_residual<T: Scalar>(p: &DenseMatrix<T>, pi: &[T]) -> T {
    let n = p.dim();
    let mut worst = T::zero();
    for v in 0..n {
        for u in v + 1..n {
            let d =
                (pi[v].clone() * p[(v, u)].clone() - pi[u].clone() * p[(u, v)].clone()).magnitude();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Kernel in sparse form: one self-loop probability per node and one
/// probability per arc, aligned with the graph's arc indices.
#[derive(Debug, Clone)]
pub struct SparseKernel<'g, T> {
    g: &'g Graph,
    stay: Vec<T>,
    arc: Vec<T>,
}

impl<'g, T: Scalar> SparseKernel<'g, T> {
    pub fn new(g: &'g Graph, f: &Potential) -> Result<Self> {
        f.validate(g)?;
        let n = g.node_count();
        let mut stay = Vec::with_capacity(n);
        let mut arc = Vec::with_capacity(g.arc_count());
        for v in 0..n {
            let fv = f.value::<T>(g, v);
            for &u in g.neighbors(v) {
                arc.push(f.arc_weight::<T>(g, v, u) / fv.clone());
            }
            stay.push(f.self_loop_weight::<T>(g, v) / fv);
        }
        Ok(Self { g, stay, arc })
    }

    /// Distribution after one step from distribution `x`.
    pub fn advance(&self, x: &[T]) -> Vec<T> {
        let g = self.g;
        let mut out: Vec<T> = x
            .iter()
            .zip(&self.stay)
            .map(|(a, s)| a.clone() * s.clone())
            .collect();
        for (v, xv) in x.iter().enumerate() {
            if xv.is_zero() {
                continue;
            }
            for (port, &u) in g.neighbors(v).iter().enumerate() {
                let p = self.arc[g.arc_index(v, port)].clone();
                out[u] = out[u].clone() + xv.clone() * p;
            }
        }
        out
    }

    /// Expected occupancy vector `Σ_{τ<t} α P^τ` from initial distribution `α`.
    pub fn expected_visits_from(&self, alpha: &[T], t: u64) -> Vec<T> {
        let mut acc = vec![T::zero(); alpha.len()];
        let mut x = alpha.to_vec();
        for tau in 0..t {
            for (a, xi) in acc.iter_mut().zip(&x) {
                *a = a.clone() + xi.clone();
            }
            if tau + 1 < t {
                x = self.advance(&x);
            }
        }
        acc
    }
}

fn check_visit_caps(g: &Graph, t: u64) -> Result<()> {
    check_cap(g.node_count(), DEFAULT_MATRIX_CAP)?;
    if t > MAX_VISIT_HORIZON {
        return Err(Error::InvalidParameter(format!(
            "horizon {t} above cap {MAX_VISIT_HORIZON}"
        )));
    }
    Ok(())
}

fn point_mass<T: Scalar>(n: usize, i: NodeId) -> Vec<T> {
    let mut x = vec![T::zero(); n];
    x[i] = T::one();
    x
}

/// `E_i N_j(t) = Σ_{τ=0}^{t-1} (δ_i P^τ)_j`.
pub fn exact_expected_visits<T: Scalar>(
    g: &Graph,
    f: &Potential,
    i: NodeId,
    j: NodeId,
    t: u64,
) -> Result<T> {
    g.check_node(i)?;
    g.check_node(j)?;
    check_visit_caps(g, t)?;
    let kernel = SparseKernel::<T>::new(g, f)?;
    Ok(kernel.expected_visits_from(&point_mass(g.node_count(), i), t)[j].clone())
}

/// Table of `E_i N_j(t)` for all pairs; row `i` is the start node.
pub fn expected_visits_table<T: Scalar>(
    g: &Graph,
    f: &Potential,
    t: u64,
) -> Result<DenseMatrix<T>> {
    check_visit_caps(g, t)?;
    let n = g.node_count();
    let kernel = SparseKernel::<T>::new(g, f)?;
    let mut table = DenseMatrix::zeros(n);
    for i in 0..n {
        let row = kernel.expected_visits_from(&point_mass(n, i), t);
        table.data[i * n..(i + 1) * n].clone_from_slice(&row);
    }
    Ok(table)
}

/// `E_α N_j(t)` for every `j`, starting from distribution `α`.
pub fn expected_visits_from_distribution<T: Scalar>(
    g: &Graph,
    f: &Potential,
    alpha: &[T],
    t: u64,
) -> Result<Vec<T>> {
    check_visit_caps(g, t)?;
    if alpha.len() != g.node_count() {
        return Err(Error::InvalidParameter("distribution length != n".into()));
    }
    Ok(SparseKernel::<T>::new(g, f)?.expected_visits_from(alpha, t))
}

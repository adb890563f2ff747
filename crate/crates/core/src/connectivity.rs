//! Deterministic connectivity oracle.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::{ConnectivityQuery, Graph, NodeId};

/// Breadth-first search from the source; true iff the target is reached.
pub fn bfs_connected(g: &Graph, q: &ConnectivityQuery) -> Result<bool> {
    q.validate(g)?;
    if q.source == q.target {
        return Ok(true);
    }
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::from([q.source]);
    seen[q.source] = true;
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if u == q.target {
                return Ok(true);
            }
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    Ok(false)
}

/// Component label per node, labels numbered in order of first appearance.
pub fn component_labels(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for root in 0..n {
        if label[root] != usize::MAX {
            continue;
        }
        label[root] = next;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if label[u] == usize::MAX {
                    label[u] = next;
                    queue.push_back(u);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn component_count(g: &Graph) -> usize {
    component_labels(g).into_iter().max().map_or(0, |m| m + 1)
}

/// Nodes of the component containing `v`, in BFS order.
pub fn component_of(g: &Graph, v: NodeId) -> Vec<NodeId> {
    let mut seen = vec![false; g.node_count()];
    let mut order = vec![v];
    seen[v] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &u in g.neighbors(x) {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
    }
    order
}

/// Nodes within hop distance `radius` of `v`.
pub fn ball(g: &Graph, v: NodeId, radius: usize) -> Vec<NodeId> {
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[v] = 0;
    let mut order = vec![v];
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        if dist[x] == radius {
            continue;
        }
        for &u in g.neighbors(x) {
            if dist[u] == usize::MAX {
                dist[u] = dist[x] + 1;
                order.push(u);
            }
        }
    }
    order
}

pub fn is_connected(g: &Graph) -> bool {
    component_of(g, 0).len() == g.node_count()
}

//! The virtual split graph against an explicitly materialised copy.

use ustcon_core::connectivity::bfs_connected;
use ustcon_core::generators;
use ustcon_core::rng;
use ustcon_core::split::DEFAULT_MATERIALIZE_CAP;
use ustcon_core::validate::{fuzz_graphs, split_kernel_z};
use ustcon_core::{ConnectivityQuery, SplitNode, SplitPort, SplitView};

/// Pearson statistic of `counts` against the uniform distribution.
fn chi_squared_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

fn port_histogram(sv: &SplitView<'_>, x: SplitNode, draws: u64, seed: u64) -> Vec<u64> {
    let deg = sv.base().deg(x.node);
    let mut counts = vec![0u64; deg + 2];
    let mut r = rng::seeded(seed);
    for _ in 0..draws {
        counts[sv.random_port(x, &mut r).unwrap().code(deg)] += 1;
    }
    counts
}

#[test]
fn split_degrees_for_a_degree_seven_hub() {
    let g = generators::star(7).unwrap();
    let sv = SplitView::new(&g, 3).unwrap();
    assert_eq!(sv.copies(0), 3);
    assert_eq!(sv.degree(SplitNode::new(0, 0)).unwrap(), 4);
    assert_eq!(sv.degree(SplitNode::new(0, 1)).unwrap(), 5);
    assert_eq!(sv.degree(SplitNode::new(0, 2)).unwrap(), 2);
    assert!(sv.degree(SplitNode::new(0, 3)).is_err());
    // Leaves have a single copy with no chain links.
    assert_eq!(sv.degree(SplitNode::new(4, 0)).unwrap(), 1);
}

#[test]
fn first_copy_ports_are_uniform() {
    let g = generators::star(7).unwrap();
    let sv = SplitView::new(&g, 3).unwrap();
    let counts = port_histogram(&sv, SplitNode::new(0, 0), 1_000_000, 1);
    let next = SplitPort::Next.code(7);
    let present = [counts[0], counts[1], counts[2], counts[next]];
    assert_eq!(present.iter().sum::<u64>(), 1_000_000);
    // df = 3, critical value at the 0.001 level.
    assert!(chi_squared_uniform(&present) < 16.27, "{counts:?}");
}

#[test]
fn last_copy_ports_are_uniform() {
    let g = generators::star(7).unwrap();
    let sv = SplitView::new(&g, 3).unwrap();
    let counts = port_histogram(&sv, SplitNode::new(0, 2), 1_000_000, 2);
    let present = [counts[6], counts[SplitPort::Prev.code(7)]];
    assert_eq!(present.iter().sum::<u64>(), 1_000_000);
    // df = 1, critical value at the 0.001 level.
    assert!(chi_squared_uniform(&present) < 10.83, "{counts:?}");
}

#[test]
fn single_copy_ports_cover_the_base_range() {
    let g = generators::complete(5).unwrap();
    let sv = SplitView::new(&g, 4).unwrap();
    let counts = port_histogram(&sv, SplitNode::new(2, 0), 400_000, 3);
    assert_eq!(counts[4..], [0, 0]);
    assert!(chi_squared_uniform(&counts[..4]) < 16.27, "{counts:?}");
}

#[test]
fn isolated_copy_has_no_port() {
    let g = generators::random_graph(3, 0, 0).unwrap();
    let sv = SplitView::new(&g, 2).unwrap();
    let x = SplitNode::new(1, 0);
    assert_eq!(sv.degree(x).unwrap(), 0);
    assert!(sv.random_port(x, &mut rng::seeded(0)).is_err());
    assert_eq!(sv.next_state(x, &mut rng::seeded(0)).unwrap(), x);
}

#[test]
fn outer_port_lands_on_the_owning_copy() {
    let g = generators::star(12).unwrap();
    let sv = SplitView::new(&g, 3).unwrap();
    // Leaf 10 is the hub's port 9, which copy ⌊9/3⌋ = 3 owns.
    assert_eq!(g.traverse_edge(10, 0).unwrap(), (0, 9));
    assert_eq!(
        sv.follow(SplitNode::new(10, 0), SplitPort::Outer(0)),
        SplitNode::new(0, 3)
    );
}

#[test]
fn materialized_sizes() {
    let tri = generators::cycle(3).unwrap();
    let m = SplitView::new(&tri, 1)
        .unwrap()
        .materialize(DEFAULT_MATERIALIZE_CAP)
        .unwrap();
    assert_eq!(m.graph.node_count(), 6);

    let k4 = generators::complete(4).unwrap();
    let sv = SplitView::new(&k4, 2).unwrap();
    assert_eq!(sv.node_count(), 8);
    let m = sv.materialize(DEFAULT_MATERIALIZE_CAP).unwrap();
    assert_eq!(m.graph.node_count(), 8);
    assert!(m.graph.max_degree() <= 4);

    assert!(sv.materialize(7).is_err());
}

#[test]
fn large_split_parameter_reproduces_the_base_graph() {
    for g in fuzz_graphs(40, 20, 6) {
        let sv = SplitView::new(&g, g.max_degree().max(1)).unwrap();
        let m = sv.materialize(DEFAULT_MATERIALIZE_CAP).unwrap();
        assert_eq!(m.graph, g);
    }
}

#[test]
fn node_count_and_degree_bounds_on_fuzzed_graphs() {
    for g in fuzz_graphs(300, 30, 9) {
        let (n, m) = (g.node_count(), g.edge_count());
        for d in [1, 2, 3, g.max_degree().max(1)] {
            let sv = SplitView::new(&g, d).unwrap();
            // n* < n + 2m/D over integers. Isolated nodes keep one copy, so
            // an edgeless graph meets the bound with equality.
            if m == 0 {
                assert_eq!(sv.node_count(), n);
            } else {
                assert!(sv.node_count() * d < n * d + 2 * m);
            }
            for x in sv.nodes() {
                assert!(sv.degree(x).unwrap() <= d + 2);
            }
            let mat = sv.materialize(DEFAULT_MATERIALIZE_CAP).unwrap();
            assert_eq!(mat.graph.node_count(), sv.node_count());
            for x in sv.nodes() {
                assert_eq!(
                    mat.graph.degree(mat.id_of(x)).unwrap(),
                    sv.degree(x).unwrap()
                );
                assert_eq!(mat.node_of(mat.id_of(x)), x);
            }
        }
    }
}

#[test]
fn splitting_preserves_connectivity() {
    for g in fuzz_graphs(200, 25, 10) {
        let n = g.node_count();
        for d in [1, 2, 3] {
            let sv = SplitView::new(&g, d).unwrap();
            let mat = sv.materialize(DEFAULT_MATERIALIZE_CAP).unwrap();
            for t in 0..n {
                let base = bfs_connected(&g, &ConnectivityQuery::new(0, t)).unwrap();
                let q = ConnectivityQuery::new(
                    mat.id_of(SplitNode::new(0, 0)),
                    mat.id_of(SplitNode::new(t, sv.copies(t) - 1)),
                );
                assert_eq!(bfs_connected(&mat.graph, &q).unwrap(), base);
            }
        }
    }
}

#[test]
fn glitter_star_virtual_kernel_matches_materialized() {
    let g = generators::glitter_star(2).unwrap();
    let z = split_kernel_z(&g, 1, 1_000_000, 4).unwrap();
    assert!(z <= 4.0, "z = {z}");
}

#[test]
fn virtual_kernel_matches_materialized_on_small_graphs() {
    for (k, g) in fuzz_graphs(4, 8, 21).iter().enumerate() {
        for d in [1, 2] {
            let z = split_kernel_z(g, d, 200_000, k as u64).unwrap();
            assert!(z <= 4.0, "graph {k}, D = {d}: z = {z}");
        }
    }
}

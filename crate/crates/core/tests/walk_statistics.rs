//! Statistical checks of the walk engine and estimators against exact oracles.

use ustcon_core::connectivity::ball;
use ustcon_core::generators;
use ustcon_core::matrix::{
    detailed_balance_residual, expected_visits_from_distribution, expected_visits_table,
    potential_distribution, transition_matrix,
};
use ustcon_core::rng;
use ustcon_core::stats::{
    estimate_commute_time, estimate_cover_time, estimate_exit_time, estimate_hitting_time,
    exact_expected_visits, exit_time_bound, measure_return_counts,
};
use ustcon_core::validate::{
    fuzz_connected_graphs, fuzz_graphs, kernel_frequency_z, max_binomial_z,
};
use ustcon_core::walk::{self, Kernel, TraceOptions};
use ustcon_core::{Graph, Potential, Rational};

type NodeFn<'a> = Box<dyn Fn(usize) -> f64 + 'a>;

fn shipped() -> [Potential; 3] {
    [Potential::Unit, Potential::Unbiased, Potential::FineTuned]
}

/// Exact one-step row of `RW(G_f)` written straight from the weight formula.
fn brute_row(g: &Graph, f: impl Fn(usize) -> f64, v: usize) -> Vec<f64> {
    let mut row = vec![0.0; g.node_count()];
    let fv = f(v);
    let mut out = 0.0;
    for &u in g.neighbors(v) {
        let w = (fv / g.deg(v) as f64).min(f(u) / g.deg(u) as f64);
        row[u] = w / fv;
        out += w;
    }
    row[v] = (fv - out) / fv;
    row
}

#[test]
fn glitter_star_center_step_matches_weight_formula() {
    let g = generators::glitter_star(2).unwrap();
    let row = brute_row(&g, |_| 1.0, 0);
    assert_eq!(row, vec![0.0, 0.5, 0.5, 0.0, 0.0]);
    let exact = transition_matrix::<f64>(&g, &Potential::Unit).unwrap();
    assert_eq!(exact.row(0), &row[..]);

    let draws = 1_000_000u64;
    let mut r = rng::seeded(17);
    let mut counts = vec![0u64; 5];
    for _ in 0..draws {
        counts[walk::next_state(&g, &Potential::Unit, 0, &mut r).unwrap()] += 1;
    }
    assert!(max_binomial_z(&counts, &row, draws) <= 3.0, "{counts:?}");
}

#[test]
fn brute_rows_match_matrix_for_all_potentials() {
    for g in fuzz_graphs(30, 15, 5) {
        let d = g.average_degree();
        let potentials: [(Potential, NodeFn); 3] = [
            (Potential::Unit, Box::new(|_| 1.0)),
            (
                Potential::Unbiased,
                Box::new(|v| {
                    if d == 0.0 {
                        1.0
                    } else {
                        g.deg(v).max(1) as f64 / d
                    }
                }),
            ),
            (
                Potential::FineTuned,
                Box::new(|v| {
                    if d == 0.0 {
                        2.0
                    } else {
                        g.deg(v).max(1) as f64 / d + 1.0
                    }
                }),
            ),
        ];
        for (f, fun) in &potentials {
            let p = transition_matrix::<f64>(&g, f).unwrap();
            for v in 0..g.node_count() {
                let brute = brute_row(&g, fun, v);
                for (a, b) in p.row(v).iter().zip(&brute) {
                    assert!((a - b).abs() < 1e-12, "{f} at {v}");
                }
            }
        }
    }
}

#[test]
fn sampler_matches_kernel_within_4_sigma() {
    for (k, g) in fuzz_graphs(3, 12, 77).iter().enumerate() {
        for f in shipped() {
            let z = kernel_frequency_z(g, &f, 1_000_000, 100 + k as u64).unwrap();
            assert!(z <= 4.0, "graph {k}, {f}: z = {z}");
        }
    }
}

#[test]
fn detailed_balance_on_fuzzed_graphs() {
    for g in fuzz_graphs(50, 25, 8) {
        for f in shipped() {
            let p = transition_matrix::<f64>(&g, &f).unwrap();
            let pi = potential_distribution::<f64>(&g, &f);
            assert!(detailed_balance_residual(&p, &pi) < 1e-12);
            for s in p.row_sums() {
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn single_edge_hitting_time_is_one() {
    // First-step analysis on P_2: both endpoints have degree 1, so the unit
    // walk accepts every proposal and E_0 T_1 = 1.
    let g = generators::path(2).unwrap();
    let r = estimate_hitting_time(&g, &Kernel::unit(), 0, 1, 100_000, 100, 3).unwrap();
    assert_eq!(r.estimate, 1.0);
    assert_eq!(r.censored, 0);
    let com = estimate_commute_time(&g, &Kernel::unit(), 0, 1, 1000, 4).unwrap();
    assert_eq!(com.estimate, 2.0);
    let cover = estimate_cover_time(&g, &Kernel::unit(), 0, 1000, 100, 5).unwrap();
    assert_eq!(cover.estimate, 1.0);
    let tr = walk::run_walk(
        &g,
        &Potential::Unit,
        0,
        10,
        &TraceOptions::tracking([1]),
        &mut rng::seeded(1),
    )
    .unwrap();
    assert_eq!(tr.first_hit(1), Some(1));
}

#[test]
fn glitter_star_covered_within_single_walk_length() {
    let g = generators::glitter_star(50).unwrap();
    let n = g.node_count() as f64;
    let length = (24.0 * n * n * n.ln()).ceil() as u64;
    let leaf = 51;
    let r = estimate_cover_time(&g, &Kernel::unit(), leaf, 200, length, 5).unwrap();
    let covered = 200 - r.censored;
    assert!(covered as f64 >= 200.0 * (1.0 - 1.0 / n), "{covered}/200");
}

#[test]
fn hybrid_equals_unit_on_regular_graphs() {
    for g in [
        generators::cycle(24).unwrap(),
        generators::complete(12).unwrap(),
    ] {
        let cap = 10_000_000;
        let a = estimate_cover_time(&g, &Kernel::unit(), 0, 2000, cap, 1).unwrap();
        let b = estimate_cover_time(&g, &Kernel::Hybrid, 0, 2000, cap, 2).unwrap();
        let se = (a.se().powi(2) + b.se().powi(2)).sqrt();
        assert!(
            (a.estimate - b.estimate).abs() <= 4.0 * se,
            "{} vs {}",
            a.estimate,
            b.estimate
        );
    }
}

#[test]
fn hybrid_tracks_the_faster_walk_on_glitter_stars() {
    // Constant factor 4 relative to the measured faster pure walk.
    for l in [25, 50, 100] {
        let g = generators::glitter_star(l).unwrap();
        let cap = 1_000_000_000;
        let start = l + 1;
        let unit = estimate_cover_time(&g, &Kernel::unit(), start, 100, cap, 10).unwrap();
        let rw = estimate_cover_time(
            &g,
            &Kernel::Metropolis(Potential::Unbiased),
            start,
            100,
            cap,
            11,
        )
        .unwrap();
        let hybrid = estimate_cover_time(&g, &Kernel::Hybrid, start, 100, cap, 12).unwrap();
        let best = unit.estimate.min(rw.estimate);
        assert!(
            hybrid.estimate <= 4.0 * best,
            "l={l}: hybrid {} vs unit {} / rw {}",
            hybrid.estimate,
            unit.estimate,
            rw.estimate
        );
    }
}

#[test]
fn expected_visit_identities() {
    let g = fuzz_connected_graphs(1, 6, 6, 4).pop().unwrap();
    let n = g.node_count();
    assert_eq!(
        exact_expected_visits::<f64>(&g, &Potential::Unit, 2, 2, 1).unwrap(),
        1.0
    );
    let table = expected_visits_table::<f64>(&g, &Potential::Unit, 40).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert!((table[(i, j)] - table[(j, i)]).abs() <= 1e-9);
        }
    }
    // Σ_i π(i) E_i N_j(t) = t/n, both through the table and from π directly.
    let pi = vec![1.0 / n as f64; n];
    let from_pi = expected_visits_from_distribution(&g, &Potential::Unit, &pi, 40).unwrap();
    for j in 0..n {
        let col: f64 = (0..n).map(|i| pi[i] * table[(i, j)]).sum();
        assert!((col - 40.0 / n as f64).abs() < 1e-9);
        assert!((from_pi[j] - 40.0 / n as f64).abs() < 1e-9);
    }
}

#[test]
fn stationary_visit_rate_is_exact_in_rationals() {
    let g = generators::lollipop(4, 3).unwrap();
    let n = g.node_count() as i64;
    let pi = vec![Rational::new(1, n); n as usize];
    let visits = expected_visits_from_distribution(&g, &Potential::Unit, &pi, 9).unwrap();
    for x in visits {
        assert_eq!(x, Rational::new(9, n));
    }
}

#[test]
fn return_time_follows_kac() {
    // The unit walk is uniform at stationarity, so E_v T_v = n.
    let tri = generators::cycle(3).unwrap();
    let r = estimate_commute_time(&tri, &Kernel::unit(), 1, 1, 100_000, 1).unwrap();
    assert_eq!(r.quantity, "return_time");
    assert!((r.estimate - 3.0).abs() <= 4.0 * r.se(), "{}", r.estimate);

    let g = generators::lollipop(4, 3).unwrap();
    for v in [0, 3, 6] {
        let r =
            estimate_hitting_time(&g, &Kernel::unit(), v, v, 50_000, 1_000_000, v as u64).unwrap();
        assert!(
            (r.estimate - 7.0).abs() <= 4.0 * r.se(),
            "node {v}: {}",
            r.estimate
        );
    }
}

#[test]
fn monte_carlo_visits_match_exact_oracle() {
    // K_n for n <= 8 at t = n², plus random cells on fuzzed graphs.
    for n in [4, 6, 8] {
        let g = generators::complete(n).unwrap();
        let t = (n * n) as u64;
        let exact: f64 = exact_expected_visits(&g, &Potential::Unit, 0, 0, t).unwrap();
        let mc = measure_return_counts(&g, &Kernel::unit(), 0, t, 20_000, n as u64).unwrap();
        assert!(
            (mc.estimate - exact).abs() <= 4.0 * mc.se(),
            "K_{n}: {} vs {exact}",
            mc.estimate
        );
        // From the start, about t/n visits plus the extra start occupancy.
        assert!((exact - t as f64 / n as f64).abs() < 1.0);
    }
    for (k, g) in fuzz_connected_graphs(6, 4, 10, 31).iter().enumerate() {
        for f in shipped() {
            let t = 30;
            let exact: f64 = exact_expected_visits(g, &f, 0, 0, t).unwrap();
            let mc =
                measure_return_counts(g, &Kernel::Metropolis(f.clone()), 0, t, 20_000, k as u64)
                    .unwrap();
            assert!(
                (mc.estimate - exact).abs() <= 4.0 * mc.se(),
                "graph {k}, {f}: {} vs {exact}",
                mc.estimate
            );
        }
    }
}

#[test]
fn exit_time_from_balls_below_bound() {
    for (k, g) in fuzz_connected_graphs(12, 8, 30, 12).iter().enumerate() {
        for radius in [0, 1, 2] {
            let set = ball(g, 0, radius);
            if set.len() == g.node_count() {
                continue;
            }
            let r = estimate_exit_time(g, &Kernel::unit(), 0, &set, 2000, k as u64).unwrap();
            let bound = exit_time_bound(set.len(), g.max_degree());
            assert!(
                r.estimate + 3.0 * r.se() < bound,
                "graph {k}, radius {radius}: {} vs {bound}",
                r.estimate
            );
        }
    }
}

#[test]
fn fine_tuned_walk_is_not_slower_than_unit_on_glitter_star() {
    let g = generators::glitter_star(30).unwrap();
    let (u, v) = (31, 60);
    let ft =
        estimate_commute_time(&g, &Kernel::Metropolis(Potential::FineTuned), u, v, 400, 1).unwrap();
    let unit = estimate_commute_time(&g, &Kernel::unit(), u, v, 400, 2).unwrap();
    let rw =
        estimate_commute_time(&g, &Kernel::Metropolis(Potential::Unbiased), u, v, 400, 3).unwrap();
    let best = unit.estimate.min(rw.estimate);
    assert!(ft.estimate <= 3.0 * best, "{} vs {best}", ft.estimate);
}

mod common;

use common::*;
use proptest::prelude::*;
use strongcolor::coloring::{
    available_colors, greedy_bound, greedy_color, greedy_color_default, swap_colors, verify_strong,
};
use strongcolor::genlab::gen_random_2deg;
use strongcolor::oracle::{conflict_clique_lower_bound, exact_strong_index, OracleLimits};
use strongcolor::structure::{capacity, degeneracy, is_two_degenerate, n2_edges};
use strongcolor::{Coloring, Edge, Graph};

fn small_graph(max_n: u32, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |c| from_candidates(n, &c))
    })
}

fn colored(max_n: u32, max_m: usize, colors: u32) -> impl Strategy<Value = (Graph, Coloring)> {
    small_graph(max_n, max_m).prop_flat_map(move |g| {
        let m = g.edge_count();
        prop::collection::vec(1..=colors, m).prop_map(move |cs| {
            let c: Coloring = g.edges().zip(cs).collect();
            (g.clone(), c)
        })
    })
}

#[test]
fn named_indices_match_enumeration() {
    let cycle = |n: u32| graph(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>());
    let star = |n: u32| graph(&(1..=n).map(|i| (0, i)).collect::<Vec<_>>());
    let k23 = graph(&[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
    let p4 = graph(&[(0, 1), (1, 2), (2, 3)]);
    let cases = [(p4, 3), (cycle(5), 5), (cycle(6), 3), (cycle(7), 4), (star(4), 4), (k23, 6)];
    for (g, want) in cases {
        assert_eq!(brute_index(&g), want);
        let r = exact_strong_index(&g, OracleLimits::default()).unwrap();
        assert_eq!(r.index, want);
        assert!(brute_valid(&g, &r.witness));
    }
}

#[test]
fn exact_time_budget_reports_bounds() {
    use std::time::Duration;
    // Large enough that the search cannot finish in zero time.
    let g = graph(&(0..15).map(|i| (i, (i + 1) % 15)).collect::<Vec<_>>());
    let limits = OracleLimits {
        max_edges: 16,
        time_budget: Some(Duration::ZERO),
    };
    match exact_strong_index(&g, limits) {
        Ok(r) => assert_eq!(r.index, brute_index(&g)),
        Err(e) => assert!(e.to_string().contains("between")),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn verify_matches_definition((g, c) in colored(9, 20, 5)) {
        let ours = matches!(verify_strong(&g, &c), Ok(Ok(())));
        prop_assert_eq!(ours, brute_valid(&g, &c));
        if let Ok(Err(v)) = verify_strong(&g, &c) {
            prop_assert!(v.holds_in(&g));
            prop_assert_eq!(c.get(v.first), c.get(v.second));
        }
    }

    #[test]
    fn partial_colorings_are_rejected((g, c) in colored(8, 12, 3), drop in 0usize..12) {
        prop_assume!(g.edge_count() > 0);
        let mut c = c;
        let victim = g.edges().nth(drop % g.edge_count()).unwrap();
        c.unset(victim);
        prop_assert!(verify_strong(&g, &c).is_err());
    }

    #[test]
    fn n2_matches_definition(g in small_graph(9, 20)) {
        for e in g.edges() {
            prop_assert_eq!(n2_edges(&g, e).unwrap(), brute_n2(&g, e));
        }
    }

    #[test]
    fn greedy_is_valid_and_bounded(g in small_graph(10, 24), rot in 0usize..24) {
        let c = greedy_color_default(&g);
        prop_assert!(brute_valid(&g, &c));
        prop_assert!(c.max_color() as usize <= greedy_bound(g.max_degree()));
        let mut order: Vec<Edge> = g.edges().collect();
        if !order.is_empty() {
            let k = rot % order.len();
            order.rotate_left(k);
        }
        let c = greedy_color(&g, &order).unwrap();
        prop_assert!(brute_valid(&g, &c));
        prop_assert!(c.max_color() as usize <= greedy_bound(g.max_degree()));
    }

    #[test]
    fn available_colors_match_definition((g, c) in colored(8, 14, 6), pick in 0usize..14, palette in 1u32..9) {
        prop_assume!(g.edge_count() > 0);
        let target = g.edges().nth(pick % g.edge_count()).unwrap();
        let mut c = c;
        c.unset(target);
        let conflict = brute_n2(&g, target);
        let want: Vec<u32> = (1..=palette)
            .filter(|&x| conflict.iter().all(|&f| c.get(f) != Some(x)))
            .collect();
        prop_assert_eq!(available_colors(&g, &c, target, palette).unwrap(), want);
    }

    #[test]
    fn swap_is_an_involution((g, c) in colored(8, 14, 6), i in 0usize..14, j in 0usize..14) {
        prop_assume!(g.edge_count() > 0);
        let a = g.edges().nth(i % g.edge_count()).unwrap();
        let b = g.edges().nth(j % g.edge_count()).unwrap();
        let once = swap_colors(&c, a, b).unwrap();
        prop_assert_eq!(once.get(a), c.get(b));
        prop_assert_eq!(once.get(b), c.get(a));
        prop_assert_eq!(swap_colors(&once, a, b).unwrap(), c);
    }

    #[test]
    fn degeneracy_matches_peeling(g in small_graph(9, 22)) {
        let k = brute_degeneracy(&g);
        prop_assert_eq!(degeneracy(&g).k, k);
        prop_assert_eq!(is_two_degenerate(&g), k <= 2);
    }

    #[test]
    fn capacity_matches_definition(g in small_graph(10, 18)) {
        prop_assert_eq!(capacity(&g), brute_capacity(&g));
    }

    #[test]
    fn random_2deg_generator(n in 2usize..40, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let m = ((2 * n - 3) as f64 * frac) as usize;
        let g = gen_random_2deg(n, m, seed).unwrap();
        prop_assert_eq!(g.edge_count(), m);
        prop_assert_eq!(g.vertex_count(), n);
        prop_assert!(brute_degeneracy(&g) <= 2);
        prop_assert_eq!(pairs(&gen_random_2deg(n, m, seed).unwrap()), pairs(&g));
        prop_assert!(gen_random_2deg(n, 2 * n - 2, seed).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn exact_matches_enumeration(g in small_graph(8, 8)) {
        let r = exact_strong_index(&g, OracleLimits::default()).unwrap();
        prop_assert_eq!(r.index, brute_index(&g));
        prop_assert!(brute_valid(&g, &r.witness));
        let lb = conflict_clique_lower_bound(&g);
        prop_assert!(lb <= r.index);
        prop_assert!(r.index <= greedy_color_default(&g).max_color() as usize);
    }
}

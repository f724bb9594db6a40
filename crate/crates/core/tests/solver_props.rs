use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rpartite_core::bounds::{alpha_of, brouwer_threshold};
use rpartite_core::constructions::{c5_blowup, random_dense_clique_free, random_near_extremal};
use rpartite_core::exact::{
    is_r_partite, min_deletions_bruteforce, min_deletions_exact, min_deletions_parallel,
    SolveOptions, SolveStatus,
};
use rpartite_core::Graph;

/// Minimum internal edges over every `r^n` colouring, counted with an odometer.
fn oracle(g: &Graph, r: usize) -> u64 {
    let n = g.n();
    let edges = g.edges();
    let mut colour = vec![0usize; n];
    let mut best = u64::MAX;
    loop {
        let cost = edges
            .iter()
            .filter(|&&(u, v)| colour[u] == colour[v])
            .count() as u64;
        best = best.min(cost);
        let mut i = 0;
        while i < n && colour[i] == r - 1 {
            colour[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        colour[i] += 1;
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let len = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(e, _)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_matches_oracle(g in arb_graph(8), r in 1usize..=3) {
        let want = oracle(&g, r);
        let res = min_deletions_exact(&g, &SolveOptions::new(r)).unwrap();
        prop_assert_eq!(res.status, SolveStatus::Optimal);
        prop_assert_eq!(res.best_value, want);
        let p = res.best_partition.unwrap();
        prop_assert_eq!(p.internal_total() as u64, want);
        prop_assert_eq!(min_deletions_bruteforce(&g, r).unwrap().value, want);
    }

    #[test]
    fn variants_agree(g in arb_graph(10), r in 2usize..=3) {
        let base = min_deletions_exact(&g, &SolveOptions::new(r)).unwrap().best_value;
        let weak = SolveOptions { strong_bound: false, ..SolveOptions::new(r) };
        prop_assert_eq!(min_deletions_exact(&g, &weak).unwrap().best_value, base);
        let canon = min_deletions_exact(&g, &SolveOptions::new(r).canonical()).unwrap();
        prop_assert_eq!(canon.best_value, base);
        let par = min_deletions_parallel(&g, &SolveOptions::new(r), 3).unwrap();
        prop_assert_eq!(par.best_value, base);
        prop_assert_eq!(is_r_partite(&g, r), base == 0);
    }

    #[test]
    fn monotone_under_edge_deletion(g in arb_graph(9), r in 2usize..=3, drop in any::<prop::sample::Index>()) {
        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let e = edges[drop.index(edges.len())];
        let h = g.without_edges(&[e]);
        let dg = min_deletions_exact(&g, &SolveOptions::new(r)).unwrap().best_value;
        let dh = min_deletions_exact(&h, &SolveOptions::new(r)).unwrap().best_value;
        prop_assert!(dh <= dg && dg <= dh + 1);
    }

    #[test]
    fn monotone_in_r(g in arb_graph(9)) {
        let d: Vec<u64> = (1..=4)
            .map(|r| min_deletions_exact(&g, &SolveOptions::new(r)).unwrap().best_value)
            .collect();
        prop_assert!(d.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(d[0], g.m() as u64);
    }

    #[test]
    fn relabelling_invariant(g in arb_graph(9), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.permuted(&perm);
        for r in 2..=3 {
            prop_assert_eq!(
                min_deletions_exact(&g, &SolveOptions::new(r)).unwrap().best_value,
                min_deletions_exact(&h, &SolveOptions::new(r)).unwrap().best_value
            );
        }
    }
}

#[test]
fn canonical_partition_is_deterministic_and_least() {
    let g = c5_blowup([1, 2, 1, 2, 1]).unwrap();
    let a = min_deletions_exact(&g, &SolveOptions::new(2).canonical()).unwrap();
    let b = min_deletions_exact(&g, &SolveOptions::new(2).canonical()).unwrap();
    let brute = min_deletions_bruteforce(&g, 2).unwrap();
    assert_eq!(a.best_value, brute.value);
    let (pa, pb) = (a.best_partition.unwrap(), b.best_partition.unwrap());
    assert_eq!(pa.part_of(), pb.part_of());
    assert_eq!(pa.part_of(), brute.partition.part_of());
}

#[test]
fn furedi_bound_on_near_extremal_graphs() {
    for seed in 0..40u64 {
        for r in 2..=3 {
            let n = 9 + (seed as usize % 5);
            let t = seed % 7;
            let g = random_near_extremal(n, r, t, seed).unwrap();
            let (t_measured, _) = alpha_of(&g, r);
            assert_eq!(t_measured, t);
            let d = min_deletions_exact(&g, &SolveOptions::new(r))
                .unwrap()
                .best_value;
            assert!(d <= t, "n={n} r={r} t={t} seed={seed}: D={d}");
        }
    }
}

#[test]
fn brouwer_graphs_are_r_partite() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        for r in 2..=3 {
            for n in 2 * r + 1..=10 {
                let min = brouwer_threshold(n, r) as usize;
                let g = random_dense_clique_free(n, r, min, &mut rng).unwrap();
                assert!(g.is_clique_free(r + 1));
                assert_eq!(oracle(&g, r), 0, "n={n} r={r} edges={:?}", g.edges());
            }
        }
    }
}

#[test]
fn brouwer_threshold_is_tight_for_c5() {
    // At n = 2r + 1 = 5, C5 sits one edge below the threshold and is not bipartite.
    let g = Graph::cycle(5);
    assert_eq!(g.m() as i64, brouwer_threshold(5, 2) - 1);
    assert_eq!(oracle(&g, 2), 1);
}

#[test]
fn limits_report_status() {
    let g = c5_blowup([3, 3, 3, 3, 3]).unwrap();
    let res = min_deletions_exact(&g, &SolveOptions::new(2).with_node_limit(1)).unwrap();
    assert_eq!(res.status, SolveStatus::NodeLimit);
    assert!(res.best_value >= oracle(&Graph::cycle(5), 2) * 9);
}

use proptest::prelude::*;

use rpartite_core::bounds::{
    self, class_size_slack, f_max_grid, f_z, leading_constant, main_upper_bound,
    sharpness_edge_formula, sharpness_lower_bound,
};
use rpartite_core::constructions::sharpness_graph;
use rpartite_core::exact::{min_deletions_classwise, min_deletions_exact, SolveOptions};
use rpartite_core::rational::Rational;

/// `(r, n, a)` with every sharpness class size integral for `α = 3a²/n²`:
/// `|A| = a`, `|X| = r·2a²/n` and `|X_i| = n/r − 2a²/n ≥ a`.
fn integral_family(max_n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for r in 2..=4 {
        for n in (r..=max_n).step_by(r) {
            for a in 1..n {
                if 2 * a * a % n == 0 && n / r >= 2 * a * a / n + a {
                    out.push((r, n, a));
                }
            }
        }
    }
    out
}

#[test]
fn edge_formula_is_exact_on_integral_instances() {
    let family = integral_family(90);
    assert!(family.len() > 30);
    for (r, n, a) in family {
        let alpha = Rational::new(3 * (a * a) as i128, (n * n) as i128);
        let (g, spec) = sharpness_graph(n, r, 3.0 * (a * a) as f64 / (n * n) as f64).unwrap();
        assert!(!spec.rounding_applied, "r={r} n={n} a={a}");
        assert_eq!(spec.size("A"), Some(a));
        assert_eq!(spec.realized_n, n);
        let formula = bounds::exact::sharpness_edge_formula(n, r, alpha).unwrap();
        assert_eq!(
            formula,
            Rational::from_integer(g.m() as i128),
            "r={r} n={n} a={a}"
        );
        // The lower bound collapses to 2ra³/n.
        let lower = bounds::exact::sharpness_lower_bound(n, r, alpha).unwrap();
        assert_eq!(lower, Rational::new(2 * (r * a * a * a) as i128, n as i128));
    }
}

#[test]
fn classwise_attains_lower_bound_for_small_alpha() {
    // For α ≤ 1/(3r²), i.e. 3ar ≤ n, the natural class assignment deletes
    // exactly 2ra³/n edges. Larger α lets the construction be cut more cheaply.
    let mut checked = 0;
    for (r, n, a) in integral_family(90) {
        let alpha = 3.0 * (a * a) as f64 / (n * n) as f64;
        let (g, spec) = sharpness_graph(n, r, alpha).unwrap();
        let cw = min_deletions_classwise(&g, &spec.parts(), r).unwrap();
        let lower = (2 * r * a * a * a / n) as u64;
        if 3 * a * r <= n {
            assert_eq!(cw.deletions, lower, "r={r} n={n} a={a}");
            checked += 1;
        }
        if n <= 18 {
            let d = min_deletions_exact(&g, &SolveOptions::new(r))
                .unwrap()
                .best_value;
            assert!(d <= cw.deletions);
            if 3 * a * r <= n {
                assert_eq!(d, lower, "r={r} n={n} a={a}");
            }
        }
    }
    assert!(checked >= 10);
}

#[test]
fn fmax_grid_matches_closed_form() {
    for r in 2..=10 {
        let (max, argmax) = f_max_grid(r, 1e-4);
        assert!((max - leading_constant(r)).abs() <= 1e-8, "r={r}");
        assert!((argmax - 2.0 * r as f64 / 3.0).abs() <= 1e-4, "r={r}");
        assert_eq!(f_z(0.0, r), 0.0);
        assert_eq!(f_z(r as f64, r), 0.0);
    }
}

proptest! {
    #[test]
    fn upper_dominates_lower(n in 1usize..5000, r in 2usize..12, alpha in 0.0f64..0.25) {
        let up = main_upper_bound(n, r, alpha);
        let lo = sharpness_lower_bound(n, r, alpha);
        prop_assert!(up.is_finite() && lo.is_finite());
        prop_assert!(lo >= 0.0 && up >= lo);
    }

    #[test]
    fn lower_bound_scales(n in 1usize..2000, r in 2usize..12, alpha in 1e-6f64..0.1) {
        let lo = sharpness_lower_bound(n, r, alpha);
        let lo4 = sharpness_lower_bound(n, r, 4.0 * alpha);
        prop_assert!((lo4 - 8.0 * lo).abs() <= 1e-9 * lo4.max(1.0));
        let lo2n = sharpness_lower_bound(2 * n, r, alpha);
        prop_assert!((lo2n - 4.0 * lo).abs() <= 1e-9 * lo2n.max(1.0));
    }

    #[test]
    fn edge_formula_at_zero_is_turan_density(n in 1usize..1000, r in 2usize..12) {
        let want = (1.0 - 1.0 / r as f64) * (n * n) as f64 / 2.0;
        prop_assert!((sharpness_edge_formula(n, r, 0.0) - want).abs() <= 1e-9 * want.max(1.0));
    }

    #[test]
    fn class_slack_is_monotone(n in 1usize..1000, a in 0.0f64..0.1, b in 0.0f64..0.1) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(class_size_slack(n, lo) <= class_size_slack(n, hi));
    }
}

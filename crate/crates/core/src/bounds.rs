//! Closed-form evaluators for the stability bounds.
//!
//! Every evaluator works in `f64`. The identities that must hold exactly on
//! integral instances are also available over the rationals in [`exact`].

use serde::Serialize;

use crate::graph::{turan_number, Graph};
use crate::rational::Exact;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Leading constant `2r / (3√3)`, the maximum of `z·sqrt(1 − z/r)` on `[0, r]`.
pub fn leading_constant(r: usize) -> f64 {
    2.0 * r as f64 / (3.0 * SQRT3)
}

/// `(2r/(3√3) + 30 r³ α^{1/6}) α^{3/2} n²`.
pub fn main_upper_bound(n: usize, r: usize, alpha: f64) -> f64 {
    let (n, rf) = (n as f64, r as f64);
    (leading_constant(r) + 30.0 * rf.powi(3) * alpha.powf(1.0 / 6.0)) * alpha.powf(1.5) * n * n
}

/// `(2r/(3√3)) α^{3/2} n²`.
pub fn sharpness_lower_bound(n: usize, r: usize, alpha: f64) -> f64 {
    let n = n as f64;
    leading_constant(r) * alpha.powf(1.5) * n * n
}

/// Edge count of the sharpness construction:
/// `(1 − 1/r) n²/2 − α n² + (4r/(3√3)) α^{3/2} n² − (2r(r−3)/9) α² n²`.
pub fn sharpness_edge_formula(n: usize, r: usize, alpha: f64) -> f64 {
    let (n2, rf) = ((n * n) as f64, r as f64);
    (1.0 - 1.0 / rf) * n2 / 2.0 - alpha * n2 + 4.0 * rf / (3.0 * SQRT3) * alpha.powf(1.5) * n2
        - 2.0 * rf * (rf - 3.0) / 9.0 * alpha * alpha * n2
}

/// `C(α) = 20 r² α^{4/3} + (1 − (1 − d) k / r) α`.
pub fn c_alpha(r: usize, alpha: f64, d: f64, k: f64) -> f64 {
    let rf = r as f64;
    20.0 * rf * rf * alpha.powf(4.0 / 3.0) + (1.0 - (1.0 - d) * k / rf) * alpha
}

/// `ex(n, K_{r+1}) − ⌊n/r⌋ + 2`: at or above this many edges a
/// `K_{r+1}`-free graph is `r`-partite (for `n ≥ 2r + 1`).
pub fn brouwer_threshold(n: usize, r: usize) -> i64 {
    turan_number(n, r) as i64 - (n / r) as i64 + 2
}

/// Whether `n ≥ 2r + 1`, the range where [`brouwer_threshold`] is guaranteed.
pub fn brouwer_applies(n: usize, r: usize) -> bool {
    n > 2 * r
}

/// `t = max(0, ex(n, K_{r+1}) − e(G))` and `α = t / n²` (0 on the empty vertex set).
pub fn alpha_of(g: &Graph, r: usize) -> (u64, f64) {
    let t = turan_number(g.n(), r).saturating_sub(g.m() as u64);
    let n = g.n();
    let alpha = if n == 0 {
        0.0
    } else {
        t as f64 / (n * n) as f64
    };
    (t, alpha)
}

/// `f(z) = z sqrt(1 − z/r)`.
pub fn f_z(z: f64, r: usize) -> f64 {
    z * (1.0 - z / r as f64).max(0.0).sqrt()
}

/// Grid maximum of [`f_z`] over `[0, r]`: `(max value, argmax)`.
pub fn f_max_grid(r: usize, step: f64) -> (f64, f64) {
    let steps = (r as f64 / step).round() as u64;
    (0..=steps)
        .map(|i| {
            let z = (i as f64 * step).min(r as f64);
            (f_z(z, r), z)
        })
        .fold((f64::NEG_INFINITY, 0.0), |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        })
}

/// The hypotheses of the main stability bound: `n ≥ 3r²`,
/// `α ≤ 10⁻⁷ r⁻¹²` and `α ≥ 1/(2rn)`. Informational only.
pub fn regime_ok(n: usize, r: usize, alpha: f64) -> bool {
    let rf = r as f64;
    n > 0 && n >= 3 * r * r && alpha <= 1e-7 * rf.powi(-12) && alpha >= 1.0 / (2.0 * rf * n as f64)
}

/// `(5/2) sqrt(α) n`, the allowed deviation of a majorization class from `n/r`.
pub fn class_size_slack(n: usize, alpha: f64) -> f64 {
    2.5 * alpha.sqrt() * n as f64
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub r: usize,
    pub alpha: f64,
    pub t: u64,
    pub main_upper: f64,
    pub sharpness_lower: f64,
    pub sharpness_edges: f64,
    pub furedi_upper: u64,
    pub brouwer_threshold: i64,
    pub regime_ok: bool,
}

/// All evaluators at one `(n, r, α)`. `t` is `⌊α n²⌋`, computed exactly:
/// an integer edge count at least `ex − α n²` is at least `ex − ⌊α n²⌋`.
pub fn bound_report(n: usize, r: usize, alpha: Exact) -> BoundReport {
    let a = alpha.to_f64();
    let n2 = crate::rational::Rational::from_integer((n * n) as i128);
    let t = (alpha.value() * n2).floor().to_integer().max(0) as u64;
    BoundReport {
        n,
        r,
        alpha: a,
        t,
        main_upper: main_upper_bound(n, r, a),
        sharpness_lower: sharpness_lower_bound(n, r, a),
        sharpness_edges: sharpness_edge_formula(n, r, a),
        furedi_upper: t,
        brouwer_threshold: brouwer_threshold(n, r),
        regime_ok: regime_ok(n, r, a),
    }
}

/// Rational evaluation of the sharpness identities.
pub mod exact {
    use crate::rational::{exact_sqrt, Rational};

    fn int(v: usize) -> Rational {
        Rational::from_integer(v as i128)
    }

    /// Square of the sharpness lower bound: `(4r²/27) α³ n⁴`.
    pub fn sharpness_lower_bound_squared(n: usize, r: usize, alpha: Rational) -> Rational {
        let n2 = int(n * n);
        Rational::new(4 * (r * r) as i128, 27) * alpha * alpha * alpha * n2 * n2
    }

    /// The sharpness lower bound when it is rational.
    pub fn sharpness_lower_bound(n: usize, r: usize, alpha: Rational) -> Option<Rational> {
        exact_sqrt(sharpness_lower_bound_squared(n, r, alpha))
    }

    /// The sharpness edge formula when `sqrt(α/3)` is rational.
    pub fn sharpness_edge_formula(n: usize, r: usize, alpha: Rational) -> Option<Rational> {
        let root = exact_sqrt(alpha / Rational::from_integer(3))?;
        let (n2, ri) = (int(n * n), r as i128);
        // (4r/(3√3)) α^{3/2} = (4r/3) α sqrt(α/3)
        let middle = Rational::new(4 * ri, 3) * alpha * root * n2;
        let last = Rational::new(2 * ri * (ri - 3), 9) * alpha * alpha * n2;
        Some(
            (Rational::from_integer(1) - Rational::new(1, ri)) * n2 / 2 - alpha * n2 + middle
                - last,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn main_upper_examples() {
        assert_eq!(main_upper_bound(1000, 2, 0.0), 0.0);
        // Reference values from 40-digit arithmetic.
        assert!(rel_close(
            main_upper_bound(1000, 2, 1e-4),
            52.476_232_919_684_71,
            1e-12
        ));
        let v = main_upper_bound(18, 2, 1.0 / 12.0);
        assert!(rel_close(v, 1_242.291_381_957_598_4, 1e-12));
        assert!(v > (18 * 17 / 2) as f64);
    }

    #[test]
    fn sharpness_lower_examples() {
        assert!(rel_close(
            sharpness_lower_bound(18, 2, 1.0 / 12.0),
            6.0,
            1e-12
        ));
        assert!(rel_close(
            sharpness_lower_bound(81, 3, 1.0 / 27.0),
            54.0,
            1e-12
        ));
        assert_eq!(sharpness_lower_bound(81, 3, 0.0), 0.0);
    }

    #[test]
    fn sharpness_edge_examples() {
        assert!(rel_close(
            sharpness_edge_formula(18, 2, 1.0 / 12.0),
            67.0,
            1e-12
        ));
        assert!(rel_close(
            sharpness_edge_formula(81, 3, 1.0 / 27.0),
            2052.0,
            1e-12
        ));
        assert!(rel_close(
            sharpness_edge_formula(10, 4, 0.0),
            0.75 * 50.0,
            1e-12
        ));
    }

    #[test]
    fn exact_fixtures() {
        let a = Rational::new(1, 12);
        assert_eq!(
            exact::sharpness_lower_bound(18, 2, a),
            Some(Rational::from_integer(6))
        );
        assert_eq!(
            exact::sharpness_edge_formula(18, 2, a),
            Some(Rational::from_integer(67))
        );
        let a = Rational::new(1, 27);
        assert_eq!(
            exact::sharpness_lower_bound(81, 3, a),
            Some(Rational::from_integer(54))
        );
        assert_eq!(
            exact::sharpness_edge_formula(81, 3, a),
            Some(Rational::from_integer(2052))
        );
        assert_eq!(
            exact::sharpness_edge_formula(18, 2, Rational::new(1, 10)),
            None
        );
    }

    #[test]
    fn c_alpha_examples() {
        let (r, a) = (3, 1e-5);
        assert!(rel_close(
            c_alpha(r, a, 1.0, 7.0),
            20.0 * 9.0 * a.powf(4.0 / 3.0) + a,
            1e-12
        ));
        assert!(rel_close(c_alpha(2, 1e-6, 0.0, 0.0), 1.8e-6, 1e-12));
        let d = 0.25;
        let k = r as f64 / (1.0 - d);
        assert!(rel_close(
            c_alpha(r, a, d, k),
            20.0 * 9.0 * a.powf(4.0 / 3.0),
            1e-12
        ));
    }

    #[test]
    fn brouwer_examples() {
        assert_eq!(brouwer_threshold(9, 2), 18);
        assert_eq!(brouwer_threshold(12, 3), 46);
        assert_eq!(brouwer_threshold(5, 2), 6);
        assert!(brouwer_applies(5, 2));
        assert!(!brouwer_applies(4, 2));
    }

    #[test]
    fn alpha_of_examples() {
        let t = crate::graph::blow_up(&Graph::complete(3), &[3, 3, 3]).unwrap();
        assert_eq!(alpha_of(&t, 3), (0, 0.0));
        assert_eq!(alpha_of(&Graph::cycle(5), 2), (1, 1.0 / 25.0));
    }

    #[test]
    fn report_uses_floor_of_alpha_n2() {
        let rep = bound_report(18, 2, "1/12".parse().unwrap());
        assert_eq!(rep.t, 27);
        assert_eq!(rep.furedi_upper, rep.t);
        assert!(!rep.regime_ok);
        let rep = bound_report(10, 2, "1/7".parse().unwrap());
        assert_eq!(rep.t, 14);
    }

    #[test]
    fn regime_examples() {
        // α ≤ 10⁻⁷ r⁻¹² and α ≥ 1/(2rn) force n ≥ 2048·10⁷/2 for r = 2.
        assert!(!regime_ok(1000, 2, 1e-4));
        let a = 1e-7 / 4096.0;
        assert!(regime_ok(1 << 40, 2, a));
        assert!(!regime_ok(1000, 2, a));
    }

    #[test]
    fn main_upper_monotone_in_alpha() {
        let mut prev = 0.0;
        for i in 1..=1000 {
            let v = main_upper_bound(500, 3, i as f64 * 1e-6);
            assert!(v > prev);
            prev = v;
        }
    }
}

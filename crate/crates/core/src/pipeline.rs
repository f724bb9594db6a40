//! Stability partitioning of a `K_{r+1}`-free graph.
//!
//! The procedure runs in stages, each recorded in a [`PipelineTrace`]:
//!
//! 1. **Degree majorization.** Repeatedly take a maximum-degree vertex `x_i`
//!    of what is left, split off its non-neighbours as `V_i` and continue
//!    inside its neighbourhood. This yields `V_1, …, V_r` with at most `t`
//!    internal edges, where `t = ex(n, K_{r+1}) − e(G)`.
//! 2. **Big vertices.** `v ∈ V_i` is big when it misses at most
//!    `5 r α n` vertices outside `V_i`.
//! 3. **Anchor clique.** A transversal `K_r` on big vertices, `x_i ∈ Big_i`.
//! 4. **Common-neighbourhood classes.** `X_i` is the common neighbourhood of
//!    the anchors other than `x_i`; each `X_i` is independent, and the rest
//!    of the vertices form the exceptional set `X`.
//! 5. **Split.** `X̄` holds exceptional vertices with at least
//!    `(r−2)/r·n + 3 α^{1/3} n` neighbours in `∪ X_i`; `X̂ = X ∖ X̄`.
//! 6. **Assignment.** Each exceptional vertex joins the class `X_i` where it
//!    has the fewest neighbours.
//!
//! The refined partition is compared with the majorization partition and the
//! better one is returned, so the result never has more than `t` internal
//! edges on a `K_{r+1}`-free input.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::bounds::{alpha_of, class_size_slack, regime_ok};
use crate::error::PipelineError;
use crate::graph::{Graph, Partition};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineParams {
    /// Coefficient of `r α n` in the big-vertex slack.
    pub big_slack_mult: f64,
    /// Coefficient of `α^{1/3} n` in the `X̄` degree threshold.
    pub bar_threshold_mult: f64,
    pub alpha_override: Option<f64>,
    pub allow_fallback: bool,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            big_slack_mult: 5.0,
            bar_threshold_mult: 3.0,
            alpha_override: None,
            allow_fallback: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Majorization,
    BigSets,
    Anchors,
    Classes,
    Split,
    Assigned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Majorization {
    /// `V_1, …, V_r` (trailing parts may be empty) and the chosen `x_i`.
    Parts {
        parts: Vec<VertexSet>,
        pivots: Vec<usize>,
    },
    /// Sorted vertices of a `K_{r+1}` found when an `(r+1)`-th step was needed.
    Clique(Vec<usize>),
}

/// Lowest-index vertex of maximum degree inside `within`.
fn max_degree_vertex(g: &Graph, within: &VertexSet) -> Option<usize> {
    within
        .iter()
        .map(|v| (g.degree_into(v, within), v))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, v)| v)
}

pub fn degree_majorization(g: &Graph, r: usize) -> Majorization {
    let mut rest = g.vertex_set();
    let mut parts = Vec::with_capacity(r);
    let mut pivots = Vec::with_capacity(r);
    while let Some(x) = max_degree_vertex(g, &rest) {
        if pivots.len() == r {
            pivots.push(x);
            pivots.sort_unstable();
            return Majorization::Clique(pivots);
        }
        pivots.push(x);
        parts.push(rest.difference(g.neighbors(x)));
        rest.intersect_with(g.neighbors(x));
    }
    parts.resize(r, VertexSet::new(g.n()));
    Majorization::Parts { parts, pivots }
}

/// `Big_i = {v ∈ V_i : |N(v) ∩ V_i^c| ≥ |V_i^c| − big_slack_mult · r α n}`.
pub fn big_vertex_sets(
    g: &Graph,
    parts: &[VertexSet],
    alpha: f64,
    params: &PipelineParams,
) -> Vec<VertexSet> {
    let r = parts.len();
    let slack = params.big_slack_mult * r as f64 * alpha * g.n() as f64;
    parts
        .iter()
        .map(|part| {
            let outside = part.complement();
            let need = outside.len() as f64 - slack;
            let mut big = VertexSet::new(g.n());
            for v in part.iter() {
                if g.degree_into(v, &outside) as f64 >= need {
                    big.insert(v);
                }
            }
            big
        })
        .collect()
}

/// Lexicographically least `(x_1, …, x_r)` with `x_i ∈ Big_i` forming a clique.
pub fn find_anchor_clique(g: &Graph, bigs: &[VertexSet]) -> Option<Vec<usize>> {
    fn go(g: &Graph, bigs: &[VertexSet], common: &VertexSet, chosen: &mut Vec<usize>) -> bool {
        let i = chosen.len();
        if i == bigs.len() {
            return true;
        }
        for v in bigs[i].intersection(common).iter() {
            chosen.push(v);
            if go(g, bigs, &common.intersection(g.neighbors(v)), chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let universe = bigs.first().map_or(g.n(), |b| b.universe());
    let mut chosen = Vec::with_capacity(bigs.len());
    go(g, bigs, &VertexSet::full(universe), &mut chosen).then_some(chosen)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classes {
    pub x_parts: Vec<VertexSet>,
    pub exceptional: VertexSet,
}

/// `X_i = ∩_{j≠i} N(x_j)`; a vertex in several raw `X_i` stays in the least
/// index. Fails with a clique witness if some `X_i` spans an edge.
pub fn common_neighborhood_classes(g: &Graph, anchors: &[usize]) -> Result<Classes, PipelineError> {
    let r = anchors.len();
    let mut taken = VertexSet::new(g.n());
    let mut x_parts = Vec::with_capacity(r);
    for i in 0..r {
        let mut xi = VertexSet::full(g.n());
        for (j, &a) in anchors.iter().enumerate() {
            if j != i {
                xi.intersect_with(g.neighbors(a));
            }
        }
        xi.difference_with(&taken);
        taken.union_with(&xi);
        x_parts.push(xi);
    }
    for (i, xi) in x_parts.iter().enumerate() {
        for u in xi.iter() {
            if let Some(v) = g.neighbors(u).intersection(xi).first() {
                let mut witness: Vec<usize> = anchors
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &a)| a)
                    .chain([u, v])
                    .collect();
                witness.sort_unstable();
                return Err(PipelineError::ContainsClique {
                    size: r + 1,
                    witness,
                });
            }
        }
    }
    Ok(Classes {
        x_parts,
        exceptional: taken.complement(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Split {
    pub x_bar: VertexSet,
    pub x_hat: VertexSet,
    /// `|X̄| / |X|`, 0 when `X` is empty.
    pub d: f64,
    /// `|X| / (α n)`, 0 when `α = 0`.
    pub k: f64,
}

pub fn split_exceptional(
    g: &Graph,
    exceptional: &VertexSet,
    x_parts: &[VertexSet],
    alpha: f64,
    params: &PipelineParams,
) -> Split {
    let (n, r) = (g.n() as f64, x_parts.len() as f64);
    let threshold = (r - 2.0) / r * n + params.bar_threshold_mult * alpha.cbrt() * n;
    let mut union = VertexSet::new(g.n());
    for xi in x_parts {
        union.union_with(xi);
    }
    let mut x_bar = VertexSet::new(g.n());
    for v in exceptional.iter() {
        if g.degree_into(v, &union) as f64 >= threshold {
            x_bar.insert(v);
        }
    }
    let x_hat = exceptional.difference(&x_bar);
    let size = exceptional.len();
    let d = if size == 0 {
        0.0
    } else {
        x_bar.len() as f64 / size as f64
    };
    let k = if alpha == 0.0 || n == 0.0 {
        0.0
    } else {
        size as f64 / (alpha * n)
    };
    Split { x_bar, x_hat, d, k }
}

/// Sends every vertex of `X̄ ∪ X̂` to the class where it has the fewest
/// neighbours, ties to the least index.
pub fn assign_exceptional(
    g: &Graph,
    x_bar: &VertexSet,
    x_hat: &VertexSet,
    x_parts: &[VertexSet],
) -> BTreeMap<usize, usize> {
    x_bar
        .union(x_hat)
        .iter()
        .map(|u| {
            let target = x_parts
                .iter()
                .enumerate()
                .min_by_key(|&(i, xi)| (g.degree_into(u, xi), i))
                .map_or(0, |(i, _)| i);
            (u, target)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineTrace {
    pub t: u64,
    pub alpha: f64,
    pub parts: Vec<VertexSet>,
    pub big_sets: Vec<VertexSet>,
    pub anchors: Option<Vec<usize>>,
    pub x_classes: Vec<VertexSet>,
    pub exceptional: VertexSet,
    pub x_bar: VertexSet,
    pub x_hat: VertexSet,
    pub d: f64,
    pub k: f64,
    /// `||V_i| − n/r|` per majorization class.
    pub deviations: Vec<f64>,
    /// `(5/2) sqrt(α) n`, the reference the deviations are compared against.
    pub deviation_reference: f64,
    pub assignment: BTreeMap<usize, usize>,
    pub refined_deletions: Option<usize>,
    pub majorization_deletions: usize,
    pub regime_ok: bool,
    pub stage_reached: Stage,
    pub used_fallback: bool,
    pub deletions: usize,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub partition: Partition,
    pub deletions: usize,
    pub trace: PipelineTrace,
    pub used_fallback: bool,
    pub stage_reached: Stage,
}

pub fn run_pipeline(
    g: &Graph,
    r: usize,
    params: &PipelineParams,
) -> Result<PipelineResult, PipelineError> {
    if r == 0 {
        return Err(PipelineError::ZeroParts);
    }
    if let Some(witness) = g.clique_witness(r + 1) {
        return Err(PipelineError::ContainsClique {
            size: r + 1,
            witness,
        });
    }
    let n = g.n();
    let (t, measured) = alpha_of(g, r);
    let alpha = params.alpha_override.unwrap_or(measured);

    let parts = match degree_majorization(g, r) {
        Majorization::Parts { parts, .. } => parts,
        Majorization::Clique(witness) => {
            return Err(PipelineError::ContainsClique {
                size: r + 1,
                witness,
            })
        }
    };
    let majorization =
        Partition::from_parts(g, &parts).expect("majorization classes partition V(G)");
    let ideal = n as f64 / r as f64;
    let empty = VertexSet::new(n);
    let mut trace = PipelineTrace {
        t,
        alpha,
        deviations: parts
            .iter()
            .map(|p| (p.len() as f64 - ideal).abs())
            .collect(),
        deviation_reference: class_size_slack(n, alpha),
        parts,
        big_sets: Vec::new(),
        anchors: None,
        x_classes: Vec::new(),
        exceptional: empty.clone(),
        x_bar: empty.clone(),
        x_hat: empty,
        d: 0.0,
        k: 0.0,
        assignment: BTreeMap::new(),
        refined_deletions: None,
        majorization_deletions: majorization.internal_total(),
        regime_ok: regime_ok(n, r, alpha),
        stage_reached: Stage::Majorization,
        used_fallback: false,
        deletions: 0,
    };

    let refined = refine(g, alpha, params, &mut trace)?;
    let (partition, used_fallback) = match refined {
        Some(p)
            if !params.allow_fallback || p.internal_total() <= majorization.internal_total() =>
        {
            (p, false)
        }
        Some(_) => (majorization, true),
        None if params.allow_fallback => (majorization, true),
        None => return Err(PipelineError::StageFailed(trace.stage_reached)),
    };

    let deletions = partition.internal_total();
    trace.used_fallback = used_fallback;
    trace.deletions = deletions;
    Ok(PipelineResult {
        stage_reached: trace.stage_reached,
        partition,
        deletions,
        trace,
        used_fallback,
    })
}

/// Stages 2–6. Returns `None` where a stage cannot proceed.
fn refine(
    g: &Graph,
    alpha: f64,
    params: &PipelineParams,
    trace: &mut PipelineTrace,
) -> Result<Option<Partition>, PipelineError> {
    // Every threshold collapses at α = 0 and the majorization classes already
    // have no internal edges.
    if alpha <= 0.0 {
        return Ok(None);
    }
    trace.big_sets = big_vertex_sets(g, &trace.parts, alpha, params);
    trace.stage_reached = Stage::BigSets;
    if trace.big_sets.iter().any(VertexSet::is_empty) {
        return Ok(None);
    }

    let Some(anchors) = find_anchor_clique(g, &trace.big_sets) else {
        return Ok(None);
    };
    trace.anchors = Some(anchors.clone());
    trace.stage_reached = Stage::Anchors;

    let classes = common_neighborhood_classes(g, &anchors)?;
    trace.x_classes = classes.x_parts;
    trace.exceptional = classes.exceptional;
    trace.stage_reached = Stage::Classes;

    let split = split_exceptional(g, &trace.exceptional, &trace.x_classes, alpha, params);
    trace.x_bar = split.x_bar;
    trace.x_hat = split.x_hat;
    trace.d = split.d;
    trace.k = split.k;
    trace.stage_reached = Stage::Split;

    trace.assignment = assign_exceptional(g, &trace.x_bar, &trace.x_hat, &trace.x_classes);
    let mut part_of = vec![usize::MAX; g.n()];
    for (i, xi) in trace.x_classes.iter().enumerate() {
        for v in xi.iter() {
            part_of[v] = i;
        }
    }
    for (&v, &i) in &trace.assignment {
        part_of[v] = i;
    }
    let partition = Partition::new(g, trace.x_classes.len(), part_of)
        .expect("classes and assignment cover V(G)");
    trace.refined_deletions = Some(partition.internal_total());
    trace.stage_reached = Stage::Assigned;
    Ok(Some(partition))
}

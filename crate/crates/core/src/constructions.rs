//! Generators: Turán graphs, `C_5` blow-ups, the sharpness construction,
//! `K_{r-2} ⊗ C_5` blow-ups and seeded near-extremal instances.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::ConstructionError;
use crate::graph::{blocks, blow_up, join, turan_number, turan_part_sizes, Graph};

pub fn turan_graph(n: usize, r: usize) -> Graph {
    blow_up(&Graph::complete(r), &turan_part_sizes(n, r)).expect("Turán graph within capacity")
}

/// Parts of [`turan_graph`] in vertex order.
pub fn turan_parts(n: usize, r: usize) -> Vec<VertexSet> {
    blocks(&turan_part_sizes(n, r))
}

/// Blow-up of the cycle `0-1-2-3-4-0` with `sizes[i]` copies of vertex `i`.
pub fn c5_blowup(sizes: [usize; 5]) -> Result<Graph, ConstructionError> {
    Ok(blow_up(&Graph::cycle(5), &sizes)?)
}

/// Blow-up of `C_5 ⊗ K_{r-2}`: the five cycle classes come first, then the
/// `r − 2` join classes, each adjacent to everything outside itself.
pub fn conjecture_family(
    r: usize,
    cycle_sizes: [usize; 5],
    join_sizes: &[usize],
) -> Result<Graph, ConstructionError> {
    if r < 2 {
        return Err(ConstructionError::BadPartCount { got: r, min: 2 });
    }
    if join_sizes.len() != r - 2 {
        return Err(ConstructionError::SizeCount {
            expected: r - 2,
            got: join_sizes.len(),
        });
    }
    let base = join(&Graph::cycle(5), &Graph::complete(r - 2))?;
    let sizes: Vec<usize> = cycle_sizes.iter().chain(join_sizes).copied().collect();
    let g = blow_up(&base, &sizes)?;
    ensure_clique_free(&g, r + 1)?;
    Ok(g)
}

fn ensure_clique_free(g: &Graph, k: usize) -> Result<(), ConstructionError> {
    match g.clique_witness(k) {
        Some(witness) => Err(ConstructionError::NotCliqueFree { size: k, witness }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedSize {
    pub name: String,
    pub size: usize,
    /// Unrounded value of the size formula.
    pub exact: f64,
}

/// Part sizes of a sharpness construction and the parameters behind them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionSpec {
    pub n: usize,
    pub r: usize,
    pub alpha: f64,
    /// In formula order: `X, A, B, C, D, X_1, …, X_{r-2}`.
    pub sizes: Vec<NamedSize>,
    pub rounding_applied: bool,
    pub realized_n: usize,
    pub warnings: Vec<String>,
}

impl ConstructionSpec {
    pub fn size(&self, name: &str) -> Option<usize> {
        self.sizes.iter().find(|s| s.name == name).map(|s| s.size)
    }

    /// Sizes in vertex layout order: `A, X, B, C, D, X_1, …` (cyclic order first).
    pub fn layout_sizes(&self) -> Vec<usize> {
        let s = |i: usize| self.sizes[i].size;
        let mut out = vec![s(1), s(0), s(2), s(3), s(4)];
        out.extend(self.sizes[5..].iter().map(|x| x.size));
        out
    }

    /// The natural classes of the construction as vertex sets, in layout order.
    pub fn parts(&self) -> Vec<VertexSet> {
        blocks(&self.layout_sizes())
    }
}

/// Snaps values within `1e-9` of an integer, absorbing float noise in the size formulas.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Floors every size, then hands the remaining units one at a time to the
/// largest fractional parts (ties to later parts). Preserves the total `n`.
fn round_sizes(real: &[f64], n: usize) -> (Vec<usize>, bool) {
    let snapped: Vec<f64> = real.iter().map(|&x| snap(x)).collect();
    let mut sizes: Vec<usize> = snapped.iter().map(|x| x.floor() as usize).collect();
    let applied = snapped.iter().any(|x| x.fract() != 0.0);
    let floor_sum: usize = sizes.iter().sum();
    let remainder = n.saturating_sub(floor_sum);
    let mut order: Vec<usize> = (0..real.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (snapped[a].fract(), snapped[b].fract());
        fb.total_cmp(&fa).then(b.cmp(&a))
    });
    for &i in order.iter().take(remainder) {
        sizes[i] += 1;
    }
    (sizes, applied)
}

/// The sharpness construction: a `C_5` blow-up on classes `A, X, B, C, D`
/// (cyclic order) joined with `r − 2` independent classes `X_1, …, X_{r-2}`,
/// with `|X| = (2r/3)αn`, `|A| = |B| = sqrt(α/3) n`,
/// `|C| = |D| = (1 − (2r/3)α) n/r − sqrt(α/3) n` and `|X_i| = (1 − (2r/3)α) n/r`.
pub fn sharpness_graph(
    n: usize,
    r: usize,
    alpha: f64,
) -> Result<(Graph, ConstructionSpec), ConstructionError> {
    if r < 2 {
        return Err(ConstructionError::BadPartCount { got: r, min: 2 });
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(ConstructionError::BadAlpha(alpha));
    }
    let (nf, rf) = (n as f64, r as f64);
    let x = 2.0 * rf / 3.0 * alpha * nf;
    let a = (alpha / 3.0).sqrt() * nf;
    let xi = (1.0 - 2.0 * rf / 3.0 * alpha) / rf * nf;
    let c = xi - a;

    let mut names = vec![
        "X".to_string(),
        "A".into(),
        "B".into(),
        "C".into(),
        "D".into(),
    ];
    names.extend((1..=r - 2).map(|i| format!("X_{i}")));
    let mut real = vec![x, a, a, c, c];
    real.extend(std::iter::repeat_n(xi, r - 2));

    for (name, &v) in names.iter().zip(&real) {
        if snap(v) < 0.0 {
            return Err(ConstructionError::NegativeSize {
                part: name.clone(),
                size: v,
            });
        }
    }
    let (sizes, rounding_applied) = round_sizes(&real, n);

    let mut warnings = Vec::new();
    if alpha >= 1.0 / (4.0 * rf.powi(4)) {
        warnings.push(format!(
            "alpha {alpha} is at least 1/(4r^4); lower bound not guaranteed"
        ));
    }
    if n < r {
        warnings.push(format!("n = {n} is smaller than r = {r}"));
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    let spec = ConstructionSpec {
        n,
        r,
        alpha,
        sizes: names
            .into_iter()
            .zip(&sizes)
            .zip(&real)
            .map(|((name, &size), &exact)| NamedSize { name, size, exact })
            .collect(),
        rounding_applied,
        realized_n: sizes.iter().sum(),
        warnings,
    };
    let layout = spec.layout_sizes();
    let cycle = [layout[0], layout[1], layout[2], layout[3], layout[4]];
    let g = conjecture_family(r, cycle, &layout[5..])?;
    Ok((g, spec))
}

/// `T(n, r)` minus `t` distinct edges chosen uniformly with a seeded ChaCha8 stream.
pub fn random_near_extremal(
    n: usize,
    r: usize,
    t: u64,
    seed: u64,
) -> Result<Graph, ConstructionError> {
    if r < 1 {
        return Err(ConstructionError::BadPartCount { got: r, min: 1 });
    }
    let ex = turan_number(n, r);
    if t > ex {
        return Err(ConstructionError::DeficitOutOfRange { t, max: ex });
    }
    let full = turan_graph(n, r);
    let edges = full.edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drop: Vec<(usize, usize)> = sample(&mut rng, edges.len(), t as usize)
        .into_iter()
        .map(|i| edges[i])
        .collect();
    Ok(full.without_edges(&drop))
}

/// A random `K_{r+1}`-free graph with at least `min_edges` edges, built from
/// `T(n, r)` by deleting a few cross edges and then trying intra-part edges,
/// each kept only if the graph stays `K_{r+1}`-free. Draws falling below
/// `min_edges` are rejected and redrawn. Vertex labels are shuffled.
///
/// Returns `None` if `min_edges` exceeds `ex(n, K_{r+1})`.
pub fn random_dense_clique_free<R: Rng>(
    n: usize,
    r: usize,
    min_edges: usize,
    rng: &mut R,
) -> Option<Graph> {
    let ex = turan_number(n, r) as usize;
    if min_edges > ex {
        return None;
    }
    let slack = ex - min_edges;
    let full = turan_graph(n, r);
    let cross = full.edges();
    let part_sizes = turan_part_sizes(n, r);
    let parts = blocks(&part_sizes);
    loop {
        let k = rng.random_range(0..=(slack + 2).min(cross.len()));
        let drop: Vec<_> = sample(rng, cross.len(), k)
            .into_iter()
            .map(|i| cross[i])
            .collect();
        let mut g = full.without_edges(&drop);
        let attempts = rng.random_range(0..=3);
        for _ in 0..attempts {
            let big: Vec<&VertexSet> = parts.iter().filter(|p| p.len() >= 2).collect();
            let Some(part) = big.get(rng.random_range(0..big.len().max(1))) else {
                break;
            };
            let members = part.to_vec();
            let pick = sample(rng, members.len(), 2);
            let (u, v) = (members[pick.index(0)], members[pick.index(1)]);
            if g.has_edge(u, v) {
                continue;
            }
            let mut edges = g.edges();
            edges.push((u.min(v), u.max(v)));
            let candidate = Graph::from_edges(n, &edges).expect("in range");
            if candidate.is_clique_free(r + 1) {
                g = candidate;
            }
        }
        if g.m() >= min_edges {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            return Some(g.permuted(&perm));
        }
    }
}

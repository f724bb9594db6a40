//! Exact computation of `D_r(G)`, the minimum number of edges whose removal
//! leaves an `r`-partite graph (equivalently `e(G)` minus the maximum `r`-cut).
//!
//! [`min_deletions_exact`] is a depth-first branch-and-bound over part
//! assignments. Symmetry is broken by labelling parts in order of first use:
//! the first vertex in branch order goes to part 0 and a vertex may open part
//! `j` only after parts `0..j` are in use. The node bound is the running
//! internal-edge count, optionally strengthened by charging every unassigned
//! vertex its cheapest placement against the vertices already assigned.
//!
//! [`min_deletions_bruteforce`] enumerates assignments without any pruning and
//! serves as the independent oracle for tests.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::SolveError;
use crate::graph::{Graph, Partition};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub r: usize,
    /// Wall-clock limit in seconds; `0.0` disables it.
    pub time_limit: f64,
    /// Search-node limit; `0` disables it.
    pub node_limit: u64,
    pub want_partition: bool,
    /// Return the lexicographically least optimal `part_of`. Forces identity
    /// branch order and a single worker.
    pub canonical_tiebreak: bool,
    /// Use the per-vertex cheapest-placement lower bound.
    pub strong_bound: bool,
}

impl SolveOptions {
    pub fn new(r: usize) -> Self {
        Self {
            r,
            time_limit: 0.0,
            node_limit: 0,
            want_partition: true,
            canonical_tiebreak: false,
            strong_bound: true,
        }
    }

    pub fn canonical(mut self) -> Self {
        self.canonical_tiebreak = true;
        self
    }

    pub fn with_time_limit(mut self, seconds: f64) -> Self {
        self.time_limit = seconds;
        self
    }

    pub fn with_node_limit(mut self, nodes: u64) -> Self {
        self.node_limit = nodes;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Timeout,
    NodeLimit,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Timeout => "timeout",
            SolveStatus::NodeLimit => "node-limit",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Achievable deletion count; equals `D_r(G)` when `status` is optimal.
    pub best_value: u64,
    pub best_partition: Option<Partition>,
    pub nodes_explored: u64,
}

impl SolveResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Limits and incumbent shared across workers of one solve.
struct Shared {
    bound: AtomicU64,
    nodes: AtomicU64,
    stop: AtomicBool,
    node_limit: u64,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
}

impl Shared {
    fn new(bound: u64, opts: &SolveOptions) -> Self {
        Self {
            bound: AtomicU64::new(bound),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            node_limit: opts.node_limit,
            deadline: (opts.time_limit > 0.0)
                .then(|| Instant::now() + Duration::from_secs_f64(opts.time_limit)),
            timed_out: AtomicBool::new(false),
        }
    }

    fn status(&self) -> SolveStatus {
        if !self.stop.load(Ordering::Relaxed) {
            SolveStatus::Optimal
        } else if self.timed_out.load(Ordering::Relaxed) {
            SolveStatus::Timeout
        } else {
            SolveStatus::NodeLimit
        }
    }
}

const NODE_BATCH: u64 = 1024;

struct Search<'a> {
    r: usize,
    order: &'a [usize],
    adj: &'a [Vec<usize>],
    /// `counts[v * r + j]`: neighbours of `v` currently in part `j`.
    counts: Vec<u32>,
    assign: Vec<usize>,
    cost: u64,
    used: usize,
    best: u64,
    best_assign: Option<Vec<usize>>,
    pending_nodes: u64,
    batch: u64,
    canonical: bool,
    strong: bool,
    shared: &'a Shared,
}

impl<'a> Search<'a> {
    fn new(
        r: usize,
        order: &'a [usize],
        adj: &'a [Vec<usize>],
        bound: u64,
        opts: &SolveOptions,
        shared: &'a Shared,
    ) -> Self {
        let n = adj.len();
        Self {
            r,
            order,
            adj,
            counts: vec![0; n * r],
            assign: vec![usize::MAX; n],
            cost: 0,
            used: 0,
            best: bound,
            best_assign: None,
            pending_nodes: 0,
            batch: if opts.node_limit > 0 {
                opts.node_limit.min(NODE_BATCH)
            } else {
                NODE_BATCH
            },
            canonical: opts.canonical_tiebreak,
            strong: opts.strong_bound,
            shared,
        }
    }

    #[inline]
    fn bound(&self) -> u64 {
        self.best.min(self.shared.bound.load(Ordering::Relaxed))
    }

    fn apply(&mut self, v: usize, j: usize) -> usize {
        let r = self.r;
        self.cost += self.counts[v * r + j] as u64;
        self.assign[v] = j;
        for &u in &self.adj[v] {
            self.counts[u * r + j] += 1;
        }
        let prev_used = self.used;
        self.used = self.used.max(j + 1);
        prev_used
    }

    fn undo(&mut self, v: usize, j: usize, prev_used: usize) {
        let r = self.r;
        for &u in &self.adj[v] {
            self.counts[u * r + j] -= 1;
        }
        self.assign[v] = usize::MAX;
        self.cost -= self.counts[v * r + j] as u64;
        self.used = prev_used;
    }

    fn tick(&mut self) -> bool {
        self.pending_nodes += 1;
        if self.pending_nodes < self.batch {
            return !self.shared.stop.load(Ordering::Relaxed);
        }
        self.flush_nodes();
        !self.shared.stop.load(Ordering::Relaxed)
    }

    fn flush_nodes(&mut self) {
        let total = self
            .shared
            .nodes
            .fetch_add(self.pending_nodes, Ordering::Relaxed)
            + self.pending_nodes;
        self.pending_nodes = 0;
        if self.shared.node_limit > 0 && total >= self.shared.node_limit {
            self.shared.stop.store(true, Ordering::Relaxed);
        }
        if let Some(deadline) = self.shared.deadline {
            if Instant::now() >= deadline {
                self.shared.timed_out.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
            }
        }
    }

    fn residual_bound(&self, depth: usize) -> u64 {
        if !self.strong || self.used < self.r {
            return 0;
        }
        let r = self.r;
        self.order[depth..]
            .iter()
            .map(|&u| *self.counts[u * r..(u + 1) * r].iter().min().unwrap() as u64)
            .sum()
    }

    fn dfs(&mut self, depth: usize) {
        if !self.tick() {
            return;
        }
        if depth == self.order.len() {
            if self.cost < self.bound() {
                self.best = self.cost;
                self.best_assign = Some(self.assign.clone());
                self.shared.bound.fetch_min(self.cost, Ordering::Relaxed);
            }
            return;
        }
        if self.cost + self.residual_bound(depth) >= self.bound() {
            return;
        }
        let v = self.order[depth];
        let r = self.r;
        let open = (self.used + 1).min(r);
        let mut children: Vec<(u32, usize)> =
            (0..open).map(|j| (self.counts[v * r + j], j)).collect();
        if !self.canonical {
            children.sort_unstable();
        }
        for (inc, j) in children {
            if self.cost + inc as u64 >= self.bound() {
                if self.canonical {
                    continue;
                }
                break;
            }
            let prev = self.apply(v, j);
            self.dfs(depth + 1);
            self.undo(v, j, prev);
            if self.shared.stop.load(Ordering::Relaxed) || self.bound() == 0 {
                return;
            }
        }
    }
}

/// Descending degree, ties by index.
fn degree_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

fn branch_order(g: &Graph, opts: &SolveOptions) -> Vec<usize> {
    if opts.canonical_tiebreak {
        (0..g.n()).collect()
    } else {
        degree_order(g)
    }
}

/// Places each vertex, in `order`, into its cheapest part (first-use labels).
fn greedy(adj: &[Vec<usize>], order: &[usize], r: usize) -> (u64, Vec<usize>) {
    let n = adj.len();
    let mut counts = vec![0u32; n * r];
    let mut assign = vec![usize::MAX; n];
    let mut used = 0;
    let mut cost = 0u64;
    for &v in order {
        let open = (used + 1).min(r);
        let j = (0..open)
            .min_by_key(|&j| (counts[v * r + j], j))
            .expect("at least one part");
        cost += counts[v * r + j] as u64;
        assign[v] = j;
        used = used.max(j + 1);
        for &u in &adj[v] {
            counts[u * r + j] += 1;
        }
    }
    (cost, assign)
}

fn finish(
    g: &Graph,
    opts: &SolveOptions,
    status: SolveStatus,
    value: u64,
    assign: Vec<usize>,
    nodes: u64,
) -> SolveResult {
    let best_partition = opts.want_partition.then(|| {
        Partition::new(g, opts.r, assign).expect("solver assignments are valid partitions")
    });
    SolveResult {
        status,
        best_value: value,
        best_partition,
        nodes_explored: nodes,
    }
}

/// Branch-and-bound for `D_r(G)`, single worker.
pub fn min_deletions_exact(g: &Graph, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if opts.r == 0 {
        return Err(SolveError::ZeroParts);
    }
    let adj = g.adjacency_lists();
    let order = branch_order(g, opts);
    let (greedy_value, greedy_assign) = greedy(&adj, &order, opts.r);

    // In canonical mode the incumbent must come from the search itself, so
    // that the first optimum reached in lexicographic order is the one kept.
    let initial = if opts.canonical_tiebreak {
        greedy_value + 1
    } else {
        greedy_value
    };
    let shared = Shared::new(initial, opts);
    let mut search = Search::new(opts.r, &order, &adj, initial, opts, &shared);
    if initial > 0 {
        search.dfs(0);
    }
    search.flush_nodes_final();
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let status = shared.status();
    let (value, assign) = match search.best_assign.take() {
        Some(a) => (search.best, a),
        None => (greedy_value, greedy_assign),
    };
    Ok(finish(g, opts, status, value, assign, nodes))
}

impl Search<'_> {
    fn flush_nodes_final(&mut self) {
        self.shared
            .nodes
            .fetch_add(self.pending_nodes, Ordering::Relaxed);
        self.pending_nodes = 0;
    }
}

/// Splits the search over subtrees rooted at canonical prefixes and explores
/// them on `workers` threads with a shared incumbent. `best_value` matches the
/// single-worker result; the partition returned among optima may differ.
/// `canonical_tiebreak` falls back to [`min_deletions_exact`].
pub fn min_deletions_parallel(
    g: &Graph,
    opts: &SolveOptions,
    workers: usize,
) -> Result<SolveResult, SolveError> {
    if opts.r == 0 {
        return Err(SolveError::ZeroParts);
    }
    if opts.canonical_tiebreak || workers <= 1 || g.n() < 2 {
        return min_deletions_exact(g, opts);
    }
    let adj = g.adjacency_lists();
    let order = branch_order(g, opts);
    let (greedy_value, greedy_assign) = greedy(&adj, &order, opts.r);
    let shared = Shared::new(greedy_value, opts);

    // Canonical prefixes: (part labels along `order`, parts used).
    let mut prefixes: Vec<(Vec<usize>, usize)> = vec![(vec![0], 1)];
    let target = 8 * workers;
    while prefixes.len() < target && prefixes[0].0.len() < order.len() {
        prefixes = prefixes
            .into_iter()
            .flat_map(|(labels, used)| {
                let open = (used + 1).min(opts.r);
                (0..open).map(move |j| {
                    let mut l = labels.clone();
                    l.push(j);
                    (l, used.max(j + 1))
                })
            })
            .collect();
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let found: Vec<Option<(u64, Vec<usize>)>> = pool.install(|| {
        prefixes
            .par_iter()
            .map(|(labels, _)| {
                let mut search = Search::new(opts.r, &order, &adj, greedy_value, opts, &shared);
                for (depth, &j) in labels.iter().enumerate() {
                    search.apply(order[depth], j);
                }
                if search.cost < search.bound() {
                    search.dfs(labels.len());
                }
                search.flush_nodes_final();
                search.best_assign.take().map(|a| (search.best, a))
            })
            .collect()
    });

    let best = found.into_iter().flatten().min_by_key(|(v, _)| *v);
    let (value, assign) = best.unwrap_or((greedy_value, greedy_assign));
    Ok(finish(
        g,
        opts,
        shared.status(),
        value,
        assign,
        shared.nodes.load(Ordering::Relaxed),
    ))
}

/// `true` iff `D_r(G) = 0`. Runs the branch-and-bound with an incumbent of 1,
/// so it only ever looks for a proper `r`-colouring and stops at the first.
pub fn is_r_partite(g: &Graph, r: usize) -> bool {
    if r == 0 {
        return g.n() == 0;
    }
    if g.m() == 0 {
        return true;
    }
    let adj = g.adjacency_lists();
    let opts = SolveOptions::new(r);
    let order = degree_order(g);
    let shared = Shared::new(1, &opts);
    let mut search = Search::new(r, &order, &adj, 1, &opts, &shared);
    search.dfs(0);
    search.best_assign.is_some()
}

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub value: u64,
    pub partition: Partition,
}

/// Exhaustive minimum over all assignments with vertex 0 pinned to part 0.
/// Returns the lexicographically first minimiser.
pub fn min_deletions_bruteforce(g: &Graph, r: usize) -> Result<BruteForceResult, SolveError> {
    if r == 0 {
        return Err(SolveError::ZeroParts);
    }
    let n = g.n();
    let space = (r as u128).checked_pow(n as u32);
    if space.is_none_or(|s| s > 100_000_000) {
        return Err(SolveError::GuardExceeded { n, r });
    }
    // Lower-indexed neighbours of each vertex.
    let back: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().take_while(|&u| u < v).collect())
        .collect();

    struct Enum<'a> {
        r: usize,
        back: &'a [Vec<usize>],
        assign: Vec<usize>,
        best: u64,
        best_assign: Vec<usize>,
    }
    impl Enum<'_> {
        fn go(&mut self, v: usize, cost: u64) {
            if v == self.assign.len() {
                if cost < self.best {
                    self.best = cost;
                    self.best_assign.clone_from(&self.assign);
                }
                return;
            }
            let parts = if v == 0 { 1 } else { self.r };
            for j in 0..parts {
                let inc = self.back[v]
                    .iter()
                    .filter(|&&u| self.assign[u] == j)
                    .count() as u64;
                self.assign[v] = j;
                self.go(v + 1, cost + inc);
            }
        }
    }
    let mut e = Enum {
        r,
        back: &back,
        assign: vec![0; n],
        best: u64::MAX,
        best_assign: vec![0; n],
    };
    e.go(0, 0);
    let value = if n == 0 { 0 } else { e.best };
    let partition = Partition::new(g, r, e.best_assign)?;
    Ok(BruteForceResult { value, partition })
}

pub const MAX_CLASSES: usize = 12;

#[derive(Debug, Clone)]
pub struct ClasswiseResult {
    pub deletions: u64,
    /// Class index per given part.
    pub class_of_part: Vec<usize>,
    pub partition: Partition,
}

/// Best assignment of whole parts (e.g. blow-up classes) to `r` colour
/// classes, by enumerating all `r^{#parts}` choices. An upper bound on `D_r(G)`.
pub fn min_deletions_classwise(
    g: &Graph,
    parts: &[VertexSet],
    r: usize,
) -> Result<ClasswiseResult, SolveError> {
    if r == 0 {
        return Err(SolveError::ZeroParts);
    }
    if parts.len() > MAX_CLASSES {
        return Err(SolveError::TooManyClasses {
            got: parts.len(),
            max: MAX_CLASSES,
        });
    }
    // Validates that `parts` partitions V(G).
    Partition::from_parts(g, parts)?;

    let p = parts.len();
    let within: Vec<u64> = parts.iter().map(|s| g.edges_within(s) as u64).collect();
    let mut between = vec![vec![0u64; p]; p];
    for a in 0..p {
        for b in a + 1..p {
            let e = g.edges_between(&parts[a], &parts[b])? as u64;
            between[a][b] = e;
            between[b][a] = e;
        }
    }
    let base: u64 = within.iter().sum();

    let mut class = vec![0usize; p];
    let mut best = (u64::MAX, class.clone());
    loop {
        let mut cost = base;
        for a in 0..p {
            for b in a + 1..p {
                if class[a] == class[b] {
                    cost += between[a][b];
                }
            }
        }
        if cost < best.0 {
            best = (cost, class.clone());
        }
        // Odometer increment, last part fastest.
        let mut i = p;
        loop {
            if i == 0 {
                let (deletions, class_of_part) = best;
                let mut part_of = vec![0; g.n()];
                for (k, s) in parts.iter().enumerate() {
                    for v in s.iter() {
                        part_of[v] = class_of_part[k];
                    }
                }
                let partition = Partition::new(g, r, part_of)?;
                let deletions = if p == 0 { 0 } else { deletions };
                return Ok(ClasswiseResult {
                    deletions,
                    class_of_part,
                    partition,
                });
            }
            i -= 1;
            class[i] += 1;
            if class[i] < r {
                break;
            }
            class[i] = 0;
        }
    }
}

//! Exact maximum clique by branch and bound with greedy-coloring bounds.
//!
//! The optimum is found by a sequence of decision rounds ("is there a
//! clique of size `k`?"). Top-level branches of a round run in fixed-size
//! chunks; branches never share state, so node counts and answers do not
//! depend on the thread count.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;

const CHUNK: usize = 32;

/// Undirected graph on `0..len` with bit-row adjacency.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn from_predicate(len: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adj = vec![BitSet::new(len); len];
        for i in 0..len {
            for j in (i + 1)..len {
                if edge(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Graph { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(a, &u)| vs[a + 1..].iter().all(|&v| u != v && self.adj[u].contains(v)))
    }

    /// Same graph with vertices renumbered so that `order[new] = old`.
    fn permuted(&self, order: &[usize]) -> Graph {
        let mut pos = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let adj = order
            .iter()
            .map(|&old| {
                let mut row = BitSet::new(order.len());
                for u in self.adj[old].iter() {
                    row.insert(pos[u]);
                }
                row
            })
            .collect();
        Graph { adj }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Budget {
    /// Node limit over the whole solve; `None` is unlimited.
    pub max_nodes: Option<u64>,
    /// Wall-clock limit in seconds. Hitting it makes a run nondeterministic
    /// but never reports a non-exact answer as exact.
    pub max_secs: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub target: usize,
    pub found: Option<usize>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct CliqueStats {
    pub vertices: usize,
    pub edges: usize,
    pub lower_bound: usize,
    pub nodes: u64,
    pub witness_nodes: u64,
    pub rounds: Vec<Round>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub node: u64,
    pub depth: usize,
    pub bound: usize,
    pub best: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessMode {
    /// Colex-minimal optimum clique (smallest largest vertex, then the next).
    #[default]
    ColexMin,
    /// Any optimum clique found during the rounds.
    First,
    None,
}

#[derive(Debug, Clone, Default)]
pub struct CliqueOptions {
    pub budget: Budget,
    /// Worker threads; `0` uses the rayon default.
    pub threads: usize,
    pub witness: WitnessMode,
    /// When set, only these vertices start top-level branches, each with
    /// all of its neighbours as candidates.
    pub roots: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueOutcome {
    /// Size of the largest clique found; the maximum when `status` is exact.
    pub size: usize,
    /// Vertices of a clique of size `size`, ascending.
    pub clique: Option<Vec<usize>>,
    pub status: Status,
    pub stats: CliqueStats,
}

struct Limits<'a> {
    node_cap: u64,
    deadline: Option<Instant>,
    timed_out: &'a AtomicBool,
}

impl Limits<'_> {
    fn tick(&self, nodes: u64) -> bool {
        if nodes > self.node_cap {
            return false;
        }
        if nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.timed_out.load(Ordering::Relaxed)
    }
}

enum Search {
    Found,
    Exhausted,
    Aborted,
}

struct Branch<'a, 'b> {
    g: &'a Graph,
    limits: &'a Limits<'b>,
    nodes: u64,
    stack: Vec<usize>,
    trace: Option<&'a mut dyn FnMut(TraceEvent)>,
    trace_base: u64,
    best: usize,
}

impl Branch<'_, '_> {
    /// Looks for a clique of size `k` extending `stack` inside `cand`.
    fn expand(&mut self, cand: &BitSet, k: usize) -> Search {
        self.nodes += 1;
        if !self.limits.tick(self.nodes) {
            return Search::Aborted;
        }
        let depth = self.stack.len();
        if depth >= k {
            return Search::Found;
        }
        let (order, colors) = greedy_coloring(self.g, cand);
        if let Some(trace) = self.trace.as_mut() {
            trace(TraceEvent {
                node: self.trace_base + self.nodes,
                depth,
                bound: depth + colors.last().copied().unwrap_or(0),
                best: self.best,
            });
        }
        let mut cand = cand.clone();
        for idx in (0..order.len()).rev() {
            if depth + colors[idx] < k {
                return Search::Exhausted;
            }
            let v = order[idx];
            self.stack.push(v);
            let next = cand.intersection(self.g.neighbors(v));
            match self.expand(&next, k) {
                Search::Exhausted => {}
                other => return other,
            }
            self.stack.pop();
            cand.remove(v);
        }
        Search::Exhausted
    }
}

/// Sequential greedy coloring of `cand` in ascending vertex order; returns
/// the vertices sorted by color and each one's color (1-based).
fn greedy_coloring(g: &Graph, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = cand.clone();
    let mut order = Vec::with_capacity(cand.count());
    let mut colors = Vec::with_capacity(order.capacity());
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut avail = uncolored.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            uncolored.remove(v);
            avail.difference_with(g.neighbors(v));
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best = Vec::new();
    for start in 0..g.len() {
        let mut clique = vec![start];
        let mut cand = g.neighbors(start).clone();
        while let Some(v) = cand
            .iter()
            .max_by_key(|&u| (g.neighbors(u).intersection_count(&cand), std::cmp::Reverse(u)))
        {
            clique.push(v);
            cand.intersect_with(g.neighbors(v));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

/// Extends `clique` greedily by the lowest-index common neighbour.
fn extend(g: &Graph, clique: &mut Vec<usize>) {
    let mut cand = BitSet::full(g.len());
    for &v in clique.iter() {
        cand.intersect_with(g.neighbors(v));
    }
    while let Some(v) = cand.first() {
        clique.push(v);
        cand.intersect_with(g.neighbors(v));
    }
}

struct BranchResult {
    clique: Option<Vec<usize>>,
    nodes: u64,
    aborted: bool,
}

fn run_branch(g: &Graph, root: usize, cand: &BitSet, k: usize, limits: &Limits<'_>) -> BranchResult {
    let mut b = Branch {
        g,
        limits,
        nodes: 0,
        stack: vec![root],
        trace: None,
        trace_base: 0,
        best: k - 1,
    };
    let outcome = b.expand(cand, k);
    BranchResult {
        clique: matches!(outcome, Search::Found).then(|| b.stack.clone()),
        nodes: b.nodes,
        aborted: matches!(outcome, Search::Aborted),
    }
}

/// Finds a maximum clique of `g`.
///
/// With `trace`, branches run sequentially and every search node is
/// reported.
pub fn max_clique(g: &Graph, opts: &CliqueOptions, mut trace: Option<&mut dyn FnMut(TraceEvent)>) -> CliqueOutcome {
    let n = g.len();
    let mut stats = CliqueStats {
        vertices: n,
        edges: g.edge_count(),
        ..CliqueStats::default()
    };
    if n == 0 {
        return CliqueOutcome {
            size: 0,
            clique: Some(Vec::new()),
            status: Status::Exact,
            stats,
        };
    }

    // degree-descending renumbering: the coloring then sees high-degree
    // vertices first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let h = g.permuted(&order);
    let mut pos = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }

    let mut best = greedy_clique(g);
    stats.lower_bound = best.len();

    let roots: Vec<(usize, BitSet)> = match &opts.roots {
        Some(rs) => rs
            .iter()
            .map(|&old| (pos[old], h.neighbors(pos[old]).clone()))
            .collect(),
        None => (0..n)
            .map(|v| {
                let mut later = h.neighbors(v).clone();
                later.difference_with(&BitSet::prefix(n, v + 1));
                (v, later)
            })
            .collect(),
    };

    let timed_out = AtomicBool::new(false);
    let deadline = opts
        .budget
        .max_secs
        .map(|s| Instant::now() + std::time::Duration::from_secs_f64(s.max(0.0)));
    let max_nodes = opts.budget.max_nodes.unwrap_or(u64::MAX);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .expect("thread pool");
    let mut status = Status::Exact;

    'rounds: loop {
        let k = best.len() + 1;
        let mut round = Round {
            target: k,
            found: None,
            nodes: 0,
        };
        for chunk in roots.chunks(CHUNK) {
            let limits = Limits {
                node_cap: max_nodes.saturating_sub(stats.nodes),
                deadline,
                timed_out: &timed_out,
            };
            let results: Vec<BranchResult> = if let Some(sink) = trace.as_deref_mut() {
                let mut running = stats.nodes;
                let mut out = Vec::new();
                for (root, cand) in chunk {
                    let mut b = Branch {
                        g: &h,
                        limits: &limits,
                        nodes: 0,
                        stack: vec![*root],
                        trace: Some(&mut *sink),
                        trace_base: running,
                        best: best.len(),
                    };
                    let outcome = b.expand(cand, k);
                    running += b.nodes;
                    out.push(BranchResult {
                        clique: matches!(outcome, Search::Found).then(|| b.stack.clone()),
                        nodes: b.nodes,
                        aborted: matches!(outcome, Search::Aborted),
                    });
                }
                out
            } else {
                pool.install(|| {
                    chunk
                        .par_iter()
                        .map(|(root, cand)| run_branch(&h, *root, cand, k, &limits))
                        .collect()
                })
            };
            let chunk_nodes: u64 = results.iter().map(|r| r.nodes).sum();
            round.nodes += chunk_nodes;
            stats.nodes += chunk_nodes;

            let mut found: Option<Vec<usize>> = None;
            for r in &results {
                if let Some(c) = &r.clique {
                    let mut c: Vec<usize> = c.iter().map(|&v| order[v]).collect();
                    extend(g, &mut c);
                    c.sort_unstable();
                    if found.as_ref().is_none_or(|f| c.len() > f.len()) {
                        found = Some(c);
                    }
                }
            }
            if let Some(c) = found {
                round.found = Some(c.len());
                best = c;
                stats.rounds.push(round);
                continue 'rounds;
            }
            if results.iter().any(|r| r.aborted) || stats.nodes > max_nodes || timed_out.load(Ordering::Relaxed) {
                status = Status::BudgetExceeded;
                stats.rounds.push(round);
                break 'rounds;
            }
        }
        stats.rounds.push(round);
        break;
    }

    let size = best.len();
    let clique = match (status, opts.witness) {
        (_, WitnessMode::None) => None,
        (Status::Exact, WitnessMode::ColexMin) if opts.roots.is_none() => {
            let limits = Limits {
                node_cap: u64::MAX,
                deadline: None,
                timed_out: &AtomicBool::new(false),
            };
            let (c, nodes) = colex_min_clique(g, size, &limits);
            stats.witness_nodes = nodes;
            Some(c)
        }
        (_, WitnessMode::ColexMin) if opts.roots.is_some() => None,
        _ => Some(best),
    };
    CliqueOutcome {
        size,
        clique,
        status,
        stats,
    }
}

/// The clique of size `k` whose vertex set is least in colex order, i.e.
/// with the smallest largest vertex, then the smallest next one, and so on.
fn colex_min_clique(g: &Graph, k: usize, limits: &Limits<'_>) -> (Vec<usize>, u64) {
    let n = g.len();
    let mut nodes = 0;
    let mut chosen = Vec::with_capacity(k);
    let mut cand = BitSet::full(n);
    for need in (1..=k).rev() {
        let pick = cand
            .iter()
            .find(|&j| {
                let mut sub = cand.intersection(g.neighbors(j));
                sub.intersect_with(&BitSet::prefix(n, j));
                let mut b = Branch {
                    g,
                    limits,
                    nodes: 0,
                    stack: Vec::new(),
                    trace: None,
                    trace_base: 0,
                    best: 0,
                };
                let ok = matches!(b.expand(&sub, need - 1), Search::Found);
                nodes += b.nodes;
                ok
            })
            .expect("a clique of the optimum size exists");
        chosen.push(pick);
        cand.intersect_with(g.neighbors(pick));
        cand.intersect_with(&BitSet::prefix(n, pick));
    }
    chosen.sort_unstable();
    (chosen, nodes)
}

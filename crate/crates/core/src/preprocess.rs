//! Graph reductions run before any model is built: dominated-vertex removal,
//! a DSATUR upper bound, greedy cliques for the lower bound, and choice of the
//! clique to precolour.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PreprocessError {
    #[error("colouring misses residual vertex {0}")]
    MissingColor(Vertex),
    #[error("no clique candidates")]
    NoCandidates,
    #[error("candidate {0:?} is not a clique")]
    NotAClique(Vec<Vertex>),
    #[error("upper bound {h} is below clique size {clique}")]
    BoundBelowClique { h: usize, clique: usize },
}

/// Removals performed by [`remove_dominated`], in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceTrace {
    /// `(removed, dominator)` pairs in parent-graph ids.
    pub removed: Vec<(Vertex, Vertex)>,
    /// Residual graph, relabelled `1..=k`.
    pub residual: Graph,
    /// `residual_to_parent[local - 1]` is the parent-graph id of a residual vertex.
    pub residual_to_parent: Vec<Vertex>,
}

/// Deletes dominated vertices until none is left.
///
/// `u` is dominated by `v != u` when `N(u) ⊆ N(v)`. Vertices are scanned in
/// ascending current degree (ties by id); a dominated vertex is charged to
/// its smallest-id dominator. Passes repeat until one removes nothing.
pub fn remove_dominated(g: &Graph) -> DominanceTrace {
    let n = g.n();
    let mut alive = vec![true; n + 1];
    alive[0] = false;
    let mut nbrs: Vec<BTreeSet<Vertex>> =
        (0..=n).map(|v| if v == 0 { BTreeSet::new() } else { g.neighbors(v).iter().copied().collect() }).collect();
    let mut removed = Vec::new();

    loop {
        let mut order: Vec<Vertex> = (1..=n).filter(|&v| alive[v]).collect();
        order.sort_by_key(|&v| (nbrs[v].len(), v));
        let mut changed = false;
        for u in order {
            if !alive[u] {
                continue;
            }
            let dominator = find_dominator(u, &nbrs, &alive);
            if let Some(v) = dominator {
                alive[u] = false;
                for w in std::mem::take(&mut nbrs[u]) {
                    nbrs[w].remove(&u);
                }
                removed.push((u, v));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let keep: Vec<Vertex> = (1..=n).filter(|&v| alive[v]).collect();
    let (residual, residual_to_parent) = g.induced(&keep);
    DominanceTrace { removed, residual, residual_to_parent }
}

fn find_dominator(u: Vertex, nbrs: &[BTreeSet<Vertex>], alive: &[bool]) -> Option<Vertex> {
    let nu = &nbrs[u];
    let Some(&pivot) = nu.iter().min_by_key(|&&w| (nbrs[w].len(), w)) else {
        // Isolated: contained in every other neighbourhood.
        return (1..alive.len()).find(|&v| v != u && alive[v]);
    };
    nbrs[pivot]
        .iter()
        .copied()
        .filter(|&v| v != u && nbrs[v].len() >= nu.len())
        .find(|&v| nu.iter().all(|w| nbrs[v].contains(w)))
}

/// Extends a colouring of the residual graph to the parent graph by replaying
/// the trace backwards: every removed vertex copies its dominator's colour.
///
/// `partial` is keyed by parent-graph ids.
pub fn lift_coloring(trace: &DominanceTrace, partial: &Coloring) -> Result<Coloring, PreprocessError> {
    if let Some(&v) = trace.residual_to_parent.iter().find(|&&v| partial.get(v).is_none()) {
        return Err(PreprocessError::MissingColor(v));
    }
    let mut out = partial.clone();
    for &(u, v) in trace.removed.iter().rev() {
        let c = out.get(v).ok_or(PreprocessError::MissingColor(v))?;
        out.set(u, c);
    }
    Ok(out)
}

/// DSATUR greedy colouring. Ties on saturation go to the larger degree, then
/// the smaller id. Returns the number of colours used and the colouring.
pub fn dsatur_upper_bound(g: &Graph) -> (usize, Coloring) {
    let n = g.n();
    let mut color = vec![0usize; n + 1];
    let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 1];
    let mut used = 0;
    for _ in 0..n {
        let v = (1..=n)
            .filter(|&v| color[v] == 0)
            .max_by(|&a, &b| (seen[a].len(), g.degree(a)).cmp(&(seen[b].len(), g.degree(b))).then(b.cmp(&a)))
            .expect("uncoloured vertex remains");
        let c = (1..).find(|c| !seen[v].contains(c)).unwrap();
        color[v] = c;
        used = used.max(c);
        for &w in g.neighbors(v) {
            seen[w].insert(c);
        }
    }
    (used, (1..=n).map(|v| (v, color[v])).collect())
}

fn grow_clique(g: &Graph, seed: Vertex) -> Vec<Vertex> {
    let mut clique = vec![seed];
    let mut cands: Vec<Vertex> = g.neighbors(seed).to_vec();
    while let Some(&next) = cands.iter().max_by(|&&a, &&b| g.degree(a).cmp(&g.degree(b)).then(b.cmp(&a))) {
        clique.push(next);
        cands.retain(|&w| w != next && g.has_edge(w, next));
    }
    clique.sort_unstable();
    clique
}

/// A maximal clique grown from the highest-degree vertex by repeatedly adding
/// the highest-degree vertex adjacent to the whole clique.
pub fn greedy_clique(g: &Graph) -> Vec<Vertex> {
    assert!(g.n() >= 1, "greedy_clique needs a vertex");
    let seed = g.vertices().max_by(|&a, &b| g.degree(a).cmp(&g.degree(b)).then(b.cmp(&a))).unwrap();
    grow_clique(g, seed)
}

/// Greedy cliques seeded from the `ceil(log2 n)` (at least one) highest-degree
/// vertices, deduplicated, in seed order.
pub fn clique_candidates(g: &Graph) -> Vec<Vec<Vertex>> {
    if g.n() == 0 {
        return Vec::new();
    }
    let seeds = ((g.n() as f64).log2().ceil() as usize).max(1);
    let mut by_degree: Vec<Vertex> = g.vertices().collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut out: Vec<Vec<Vertex>> = Vec::new();
    for &seed in by_degree.iter().take(seeds) {
        let c = grow_clique(g, seed);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Which clique to precolour, its distinguished vertex, and the fixed colours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecolorPlan {
    pub clique: Vec<Vertex>,
    pub q: Vertex,
    /// `(vertex, colour)` for every clique vertex except `q`; colours are `1..|Q|`.
    pub fixed: Vec<(Vertex, usize)>,
    pub h: usize,
    pub clique_lb: usize,
}

impl PrecolorPlan {
    /// Plan that fixes nothing, with `q` as the distinguished vertex.
    pub fn trivial(q: Vertex, h: usize) -> Self {
        PrecolorPlan { clique: vec![q], q, fixed: Vec::new(), h, clique_lb: 1 }
    }
}

/// `|δ(Q)|`: edges with exactly one endpoint in `clique`.
pub fn cut_size(g: &Graph, clique: &[Vertex]) -> usize {
    let inside: BTreeSet<_> = clique.iter().copied().collect();
    g.edges().iter().filter(|(u, v)| inside.contains(u) != inside.contains(v)).count()
}

/// Picks the candidate maximising `|Q| H + |δ(Q)|` (first wins ties).
///
/// `q` is a maximum-degree vertex of the winner (smallest id on ties); the
/// other members get colours `1..|Q|-1` in descending degree order.
pub fn select_precolor_clique(
    g: &Graph,
    candidates: &[Vec<Vertex>],
    h: usize,
) -> Result<PrecolorPlan, PreprocessError> {
    if candidates.is_empty() {
        return Err(PreprocessError::NoCandidates);
    }
    let mut best: Option<(usize, &Vec<Vertex>)> = None;
    for cand in candidates {
        if cand.is_empty() || !g.is_clique(cand) {
            return Err(PreprocessError::NotAClique(cand.clone()));
        }
        if cand.len() > h {
            return Err(PreprocessError::BoundBelowClique { h, clique: cand.len() });
        }
        let score = cand.len() * h + cut_size(g, cand);
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, cand));
        }
    }
    let (_, clique) = best.unwrap();
    let mut ordered = clique.clone();
    ordered.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let q = ordered[0];
    let fixed = ordered[1..].iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    let mut sorted = clique.clone();
    sorted.sort_unstable();
    Ok(PrecolorPlan { clique: sorted, q, fixed, h, clique_lb: clique.len() })
}

/// Result of the full reduction pipeline on one connected graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub trace: DominanceTrace,
    /// Plan in residual-graph ids.
    pub plan: PrecolorPlan,
    pub clique_lb: usize,
    pub h: usize,
    /// Lower and upper bound coincide, so `witness` is optimal.
    pub early_exit: bool,
    /// DSATUR colouring of the residual graph lifted to the input graph.
    pub witness: Coloring,
}

/// Dominance removal, then DSATUR, then clique selection, on a connected graph.
pub fn preprocess_pipeline(g: &Graph) -> PreprocessReport {
    let trace = remove_dominated(g);
    let residual = &trace.residual;
    let (h, dsatur) = dsatur_upper_bound(residual);
    let witness = lift_coloring(&trace, &dsatur.relabel(&trace.residual_to_parent))
        .expect("DSATUR colours every residual vertex");
    let candidates = clique_candidates(residual);
    let plan = select_precolor_clique(residual, &candidates, h)
        .expect("greedy cliques are cliques no larger than a proper colouring");
    let clique_lb = plan.clique_lb;
    PreprocessReport { early_exit: clique_lb == h, trace, plan, clique_lb, h, witness }
}

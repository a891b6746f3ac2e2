//! Maximal clique enumeration (Bron-Kerbosch with pivoting) on the
//! undirected simple view, with a configurable clique-count budget.

use std::collections::BTreeMap;

use crate::graph::{NodeId, SimpleUgraph};
use crate::metrics::MetricsError;

pub const DEFAULT_CLIQUE_BUDGET: usize = 1_000_000;

/// Every maximal clique, each sorted ascending; cliques in deterministic
/// order. Errors when the enumeration exceeds `budget` cliques.
pub fn maximal_cliques(
    g: &SimpleUgraph,
    budget: usize,
) -> Result<Vec<Vec<NodeId>>, MetricsError> {
    let n = g.node_count();
    let mut out: Vec<Vec<NodeId>> = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let mut r: Vec<NodeId> = Vec::new();
    let p: Vec<NodeId> = (0..n).collect();
    let x: Vec<NodeId> = Vec::new();
    expand(g, &mut r, p, x, &mut out, budget)?;
    Ok(out)
}

fn expand(
    g: &SimpleUgraph,
    r: &mut Vec<NodeId>,
    p: Vec<NodeId>,
    mut x: Vec<NodeId>,
    out: &mut Vec<Vec<NodeId>>,
    budget: usize,
) -> Result<(), MetricsError> {
    if p.is_empty() && x.is_empty() {
        if out.len() >= budget {
            return Err(MetricsError::CliqueBudgetExceeded(budget));
        }
        let mut clique = r.clone();
        clique.sort_unstable();
        out.push(clique);
        return Ok(());
    }
    // pivot: vertex of P ∪ X with most neighbours in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| (p.iter().filter(|&&v| g.has_edge(u, v)).count(), usize::MAX - u))
        .expect("P ∪ X nonempty");
    let candidates: Vec<NodeId> = p
        .iter()
        .copied()
        .filter(|&v| !g.has_edge(pivot, v))
        .collect();
    let mut p = p;
    for v in candidates {
        r.push(v);
        let next_p: Vec<NodeId> = p.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        let next_x: Vec<NodeId> = x.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        expand(g, r, next_p, next_x, out, budget)?;
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
    Ok(())
}

/// Histogram over clique sizes >= 3 (the reporting convention).
pub fn clique_size_histogram(
    g: &SimpleUgraph,
    budget: usize,
) -> Result<BTreeMap<usize, usize>, MetricsError> {
    let mut hist = BTreeMap::new();
    for clique in maximal_cliques(g, budget)? {
        if clique.len() >= 3 {
            *hist.entry(clique.len()).or_insert(0) += 1;
        }
    }
    Ok(hist)
}

/// Histogram over all clique sizes (used by the brute-force oracle checks).
pub fn full_clique_histogram(
    g: &SimpleUgraph,
    budget: usize,
) -> Result<BTreeMap<usize, usize>, MetricsError> {
    let mut hist = BTreeMap::new();
    for clique in maximal_cliques(g, budget)? {
        *hist.entry(clique.len()).or_insert(0) += 1;
    }
    Ok(hist)
}

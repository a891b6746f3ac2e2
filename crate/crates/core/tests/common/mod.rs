//! Shared test support: independent brute-force oracles and synthetic graph
//! generators. Everything here is deliberately written from first principles
//! (path enumeration, subset scans) so it cannot share a bug with the
//! implementations it checks.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::BTreeMap;

use dappnet_core::graph::{SimpleUgraph, WeightedDigraph};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// G(n, p) as an undirected simple graph.
pub fn gnp(n: usize, p: f64, seed: u64) -> SimpleUgraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_range(0.0..1.0) < p {
                edges.push((i, j));
            }
        }
    }
    SimpleUgraph::from_edges(n, &edges)
}

/// G(n, p) retried until connected.
pub fn connected_gnp(n: usize, p: f64, seed: u64) -> SimpleUgraph {
    for attempt in 0..10_000 {
        let g = gnp(n, p, seed.wrapping_add(attempt).wrapping_mul(2654435761));
        if g.is_connected() && g.node_count() == n {
            return g;
        }
    }
    panic!("could not draw a connected graph for n={n}, p={p}");
}

/// Random weighted directed graph, possibly with self-loops.
pub fn random_digraph(n: usize, p: f64, self_loop_p: f64, seed: u64) -> WeightedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedDigraph::new();
    for i in 0..n {
        g.ensure_node(&format!("n{i:03}"));
    }
    for i in 0..n {
        for j in 0..n {
            let threshold = if i == j { self_loop_p } else { p };
            if rng.random_range(0.0..1.0) < threshold {
                let w = rng.random_range(1..=9) as f64;
                g.add_edge_weight(i, j, w);
            }
        }
    }
    g
}

/// Watts-Strogatz-style graph: ring of `n` nodes each linked to `k` nearest
/// neighbours, then `rewired` edges re-pointed at random targets.
pub fn watts_strogatz(n: usize, k: usize, rewired: usize, seed: u64) -> SimpleUgraph {
    assert!(k % 2 == 0 && k < n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for d in 1..=(k / 2) {
            edges.push((i, (i + d) % n));
        }
    }
    let m = edges.len();
    let mut changed = 0usize;
    while changed < rewired {
        let idx = rng.random_range(0..m);
        let (u, _) = edges[idx];
        let w = rng.random_range(0..n);
        if w == u {
            continue;
        }
        let candidate = (u.min(w), u.max(w));
        let exists = edges
            .iter()
            .any(|&(a, b)| (a.min(b), a.max(b)) == candidate);
        if exists {
            continue;
        }
        edges[idx] = candidate;
        changed += 1;
    }
    SimpleUgraph::from_edges(n, &edges)
}

/// Betweenness by exhaustive simple-path enumeration; usable for n <= 8.
pub fn brute_betweenness(g: &SimpleUgraph) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0f64; n];
    if n < 3 {
        return score;
    }
    for s in 0..n {
        for t in (s + 1)..n {
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![s];
            let mut visited = vec![false; n];
            visited[s] = true;
            enumerate_paths(g, s, t, &mut stack, &mut visited, &mut paths);
            if paths.is_empty() {
                continue;
            }
            let shortest = paths.iter().map(Vec::len).min().unwrap();
            let geodesics: Vec<&Vec<usize>> =
                paths.iter().filter(|p| p.len() == shortest).collect();
            let sigma = geodesics.len() as f64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = geodesics
                    .iter()
                    .filter(|p| p[1..p.len() - 1].contains(&v))
                    .count() as f64;
                score[v] += through / sigma;
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    for v in &mut score {
        *v /= norm;
    }
    score
}

fn enumerate_paths(
    g: &SimpleUgraph,
    current: usize,
    target: usize,
    stack: &mut Vec<usize>,
    visited: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if current == target {
        out.push(stack.clone());
        return;
    }
    for &nb in g.neighbors(current) {
        if !visited[nb] {
            visited[nb] = true;
            stack.push(nb);
            enumerate_paths(g, nb, target, stack, visited, out);
            stack.pop();
            visited[nb] = false;
        }
    }
}

/// Maximal-clique size histogram by scanning all 2^n subsets; n <= 20.
pub fn brute_clique_histogram(g: &SimpleUgraph) -> BTreeMap<usize, usize> {
    let n = g.node_count();
    assert!(n <= 20);
    let mut hist = BTreeMap::new();
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let is_clique = members
            .iter()
            .enumerate()
            .all(|(idx, &a)| members[idx + 1..].iter().all(|&b| g.has_edge(a, b)));
        if !is_clique {
            continue;
        }
        let extendable = (0..n).any(|v| {
            mask & (1 << v) == 0 && members.iter().all(|&a| g.has_edge(a, v))
        });
        if !extendable {
            *hist.entry(members.len()).or_insert(0) += 1;
        }
    }
    hist
}

/// Transitivity by enumerating vertex triples: 3*triangles / open-or-closed
/// wedges, both counted directly.
pub fn brute_transitivity(g: &SimpleUgraph) -> f64 {
    let n = g.node_count();
    let mut triangles = 0u64;
    let mut wedges = 0u64;
    for a in 0..n {
        for b in 0..n {
            for c in (b + 1)..n {
                if a == b || a == c {
                    continue;
                }
                if g.has_edge(a, b) && g.has_edge(a, c) {
                    wedges += 1; // wedge centred at a
                    if g.has_edge(b, c) {
                        triangles += 1; // counted once per centre, = 3x total
                    }
                }
            }
        }
    }
    if wedges == 0 {
        0.0
    } else {
        triangles as f64 / wedges as f64
    }
}

/// Spearman rank correlation; ties get average ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rank = |vals: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
        let mut ranks = vec![0.0f64; vals.len()];
        let mut i = 0usize;
        while i < idx.len() {
            let mut j = i;
            while j < idx.len() && vals[idx[j]] == vals[idx[i]] {
                j += 1;
            }
            let avg = (i + j - 1) as f64 / 2.0 + 1.0;
            for &k in &idx[i..j] {
                ranks[k] = avg;
            }
            i = j;
        }
        ranks
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for i in 0..xs.len() {
        cov += (rx[i] - mean) * (ry[i] - mean);
        var_x += (rx[i] - mean).powi(2);
        var_y += (ry[i] - mean).powi(2);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return 0.0;
    }
    cov / (var_x.sqrt() * var_y.sqrt())
}

/// Convert an undirected simple graph into a unit-weight digraph (canonical
/// low-to-high direction), for APIs that take `WeightedDigraph`.
pub fn as_digraph(g: &SimpleUgraph) -> WeightedDigraph {
    let mut out = WeightedDigraph::new();
    for i in 0..g.node_count() {
        out.ensure_node(g.label(i));
    }
    for i in 0..g.node_count() {
        for &j in g.neighbors(i) {
            if i < j {
                out.add_edge_weight(i, j, 1.0);
            }
        }
    }
    out
}

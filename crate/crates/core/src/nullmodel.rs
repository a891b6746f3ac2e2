//! Randomized reference ensembles: block-structure-preserving rewiring and
//! size-matched uniform random graphs, plus the small-world comparison
//! harness built on the latter.
//!
//! Rewiring operates on the undirected simple view of each block: the same
//! number of within-block links is redrawn uniformly among within-block
//! pairs (or degree-preservingly via edge swaps), while cross-block bridges
//! and self-loops are left untouched.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{NodeId, SimpleUgraph, UndirectedWeighted, WeightedDigraph};
use crate::metrics::{avg_path_length, betweenness, clustering, louvain};
use crate::seed::derive_seed;

#[derive(Debug, Error)]
pub enum NullModelError {
    #[error("partition must cover every node exactly once")]
    BadPartition,
    #[error("cannot place {edges} edges among {nodes} nodes")]
    TooDense { edges: usize, nodes: usize },
    #[error("n_realizations must be at least 1")]
    NoRealizations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionSource {
    WeakComponents,
    Louvain,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RandomizationConfig {
    pub seed: u64,
    pub n_realizations: usize,
    pub preserve_degree: bool,
    pub partition_source: PartitionSource,
}

impl Default for RandomizationConfig {
    fn default() -> Self {
        RandomizationConfig {
            seed: 0,
            n_realizations: 100,
            preserve_degree: false,
            partition_source: PartitionSource::WeakComponents,
        }
    }
}

/// Sample `k` distinct values from `0..n` (Floyd's algorithm).
fn sample_distinct(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    debug_assert!(k <= n);
    let mut chosen: HashSet<usize> = HashSet::with_capacity(k);
    let mut out = Vec::with_capacity(k);
    for i in (n - k)..n {
        let r = rng.random_range(0..=i);
        if chosen.insert(r) {
            out.push(r);
        } else {
            chosen.insert(i);
            out.push(i);
        }
    }
    out
}

/// Unrank combination index `k` into the pair (i, j), i < j < n, row-major.
fn unrank_pair(mut k: usize, n: usize) -> (usize, usize) {
    let mut i = 0usize;
    loop {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
        i += 1;
    }
}

/// Rewire within-block links uniformly (or degree-preservingly), keeping
/// cross-block edges and self-loops as they are. Returns a graph whose
/// rewired links carry weight 1 in a canonical low-to-high direction.
pub fn block_preserving_rewire(
    g: &WeightedDigraph,
    partition: &[Vec<NodeId>],
    preserve_degree: bool,
    seed: u64,
) -> Result<WeightedDigraph, NullModelError> {
    let n = g.node_count();
    let mut block_of = vec![usize::MAX; n];
    let mut covered = 0usize;
    for (b, nodes) in partition.iter().enumerate() {
        for &v in nodes {
            if v >= n || block_of[v] != usize::MAX {
                return Err(NullModelError::BadPartition);
            }
            block_of[v] = b;
            covered += 1;
        }
    }
    if covered != n {
        return Err(NullModelError::BadPartition);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = WeightedDigraph::new();
    for label in g.labels() {
        out.ensure_node(label);
    }

    // copy self-loops and cross-block edges verbatim; collect within-block
    // undirected links per block
    let mut within: Vec<BTreeSet<(NodeId, NodeId)>> = vec![BTreeSet::new(); partition.len()];
    for (s, t, w) in g.edges() {
        if s == t {
            out.add_edge_weight(s, t, w);
        } else if block_of[s] == block_of[t] {
            let key = if s < t { (s, t) } else { (t, s) };
            within[block_of[s]].insert(key);
        } else {
            out.add_edge_weight(s, t, w);
        }
    }

    for (b, links) in within.iter().enumerate() {
        let nodes = &partition[b];
        let m_b = links.len();
        if m_b == 0 {
            continue;
        }
        let capacity = nodes.len() * (nodes.len() - 1) / 2;
        if m_b > capacity {
            return Err(NullModelError::TooDense { edges: m_b, nodes: nodes.len() });
        }
        let mut sorted_nodes: Vec<NodeId> = nodes.clone();
        sorted_nodes.sort_unstable();
        let new_links: Vec<(NodeId, NodeId)> = if preserve_degree {
            swap_rewire(links, &mut rng)
        } else {
            sample_distinct(&mut rng, capacity, m_b)
                .into_iter()
                .map(|k| {
                    let (i, j) = unrank_pair(k, sorted_nodes.len());
                    (sorted_nodes[i], sorted_nodes[j])
                })
                .collect()
        };
        for (a, c) in new_links {
            let (lo, hi) = if a < c { (a, c) } else { (c, a) };
            out.add_edge_weight(lo, hi, 1.0);
        }
    }
    Ok(out)
}

/// Degree-preserving rewiring by double-edge swaps; 10*m attempted swaps.
fn swap_rewire(links: &BTreeSet<(NodeId, NodeId)>, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId)> {
    let mut edges: Vec<(NodeId, NodeId)> = links.iter().copied().collect();
    let mut present: HashSet<(NodeId, NodeId)> = links.iter().copied().collect();
    let m = edges.len();
    if m < 2 {
        return edges;
    }
    let canon = |a: NodeId, b: NodeId| if a < b { (a, b) } else { (b, a) };
    for _ in 0..(10 * m) {
        let e1 = rng.random_range(0..m);
        let e2 = rng.random_range(0..m);
        if e1 == e2 {
            continue;
        }
        let (a, b) = edges[e1];
        let (c, d) = edges[e2];
        // randomly orient the swap
        let (c, d) = if rng.random_range(0..2) == 0 { (c, d) } else { (d, c) };
        let n1 = canon(a, d);
        let n2 = canon(c, b);
        if n1.0 == n1.1 || n2.0 == n2.1 {
            continue;
        }
        if present.contains(&n1) || present.contains(&n2) || n1 == n2 {
            continue;
        }
        present.remove(&edges[e1]);
        present.remove(&edges[e2]);
        present.insert(n1);
        present.insert(n2);
        edges[e1] = n1;
        edges[e2] = n2;
    }
    edges
}

/// Uniform simple undirected graph with exactly `n` nodes and `m` edges,
/// emitted with canonical low-to-high edge direction and unit weights.
pub fn uniform_random_graph(n: usize, m: usize, seed: u64) -> Result<WeightedDigraph, NullModelError> {
    let capacity = if n < 2 { 0 } else { n * (n - 1) / 2 };
    if m > capacity {
        return Err(NullModelError::TooDense { edges: m, nodes: n });
    }
    let mut g = WeightedDigraph::new();
    for i in 0..n {
        g.ensure_node(&format!("v{i}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in sample_distinct(&mut rng, capacity, m) {
        let (i, j) = unrank_pair(k, n);
        g.add_edge_weight(i, j, 1.0);
    }
    Ok(g)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmallWorldComparison {
    /// node and edge counts of the largest component the comparison matched
    pub n: usize,
    pub m: usize,
    pub realizations: usize,
    pub real_avg_path: f64,
    pub random_avg_path_mean: f64,
    pub real_clustering: f64,
    pub random_clustering_mean: f64,
}

/// Paired comparison of the largest component against uniform random graphs
/// with the same node and link counts. Components of `min_component_size` or
/// fewer nodes are skipped (returns None).
pub fn small_world_comparison(
    g: &WeightedDigraph,
    cfg: &RandomizationConfig,
    min_component_size: usize,
) -> Result<Option<SmallWorldComparison>, NullModelError> {
    if cfg.n_realizations == 0 {
        return Err(NullModelError::NoRealizations);
    }
    let simple = SimpleUgraph::from_digraph(g);
    let comps = simple.components();
    let Some(comp) = comps.first() else {
        return Ok(None);
    };
    if comp.len() <= min_component_size {
        return Ok(None);
    }
    let (sub, _) = simple.induced_subgraph(comp);
    let n = sub.node_count();
    let m = sub.edge_count();
    let (real_avg_path, _) = avg_path_length(&sub);
    let (_, real_clustering) = clustering(&sub);

    let mut path_sum = 0.0;
    let mut clust_sum = 0.0;
    for r in 0..cfg.n_realizations {
        let seed = derive_seed(cfg.seed, &["smallworld", &r.to_string()]);
        let random = uniform_random_graph(n, m, seed)?;
        let rsimple = SimpleUgraph::from_digraph(&random);
        let rcomps = rsimple.components();
        let (rsub, _) = rsimple.induced_subgraph(&rcomps[0]);
        let (p, _) = avg_path_length(&rsub);
        let (_, c) = clustering(&rsub);
        path_sum += p;
        clust_sum += c;
    }
    Ok(Some(SmallWorldComparison {
        n,
        m,
        realizations: cfg.n_realizations,
        real_avg_path,
        random_avg_path_mean: path_sum / cfg.n_realizations as f64,
        real_clustering,
        random_clustering_mean: clust_sum / cfg.n_realizations as f64,
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockRewireSummary {
    pub realizations: usize,
    pub preserve_degree: bool,
    pub partition_source: PartitionSource,
    pub n_blocks: usize,
    pub original_global_clustering: f64,
    pub null_global_clustering_mean: f64,
    /// mean betweenness over the largest component
    pub original_mean_betweenness: f64,
    pub null_mean_betweenness_mean: f64,
}

/// Partition nodes per the configured source.
pub fn partition_nodes(g: &WeightedDigraph, cfg: &RandomizationConfig) -> Vec<Vec<NodeId>> {
    match cfg.partition_source {
        PartitionSource::WeakComponents => SimpleUgraph::from_digraph(g).components(),
        PartitionSource::Louvain => {
            let result = louvain(
                &UndirectedWeighted::from_digraph(g),
                derive_seed(cfg.seed, &["partition-louvain"]),
            );
            let n_comms = result.n_communities;
            let mut blocks = vec![Vec::new(); n_comms];
            for (node, &c) in result.partition.iter().enumerate() {
                blocks[c].push(node);
            }
            blocks
        }
    }
}

fn mean_largest_component_betweenness(simple: &SimpleUgraph) -> f64 {
    let comps = simple.components();
    match comps.first() {
        Some(comp) if comp.len() >= 3 => {
            let (sub, _) = simple.induced_subgraph(comp);
            let scores = betweenness(&sub);
            scores.iter().sum::<f64>() / scores.len() as f64
        }
        _ => 0.0,
    }
}

/// Monte-Carlo summary of the block-preserving null against the original.
pub fn block_rewire_summary(
    g: &WeightedDigraph,
    cfg: &RandomizationConfig,
) -> Result<BlockRewireSummary, NullModelError> {
    if cfg.n_realizations == 0 {
        return Err(NullModelError::NoRealizations);
    }
    let partition = partition_nodes(g, cfg);
    let simple = SimpleUgraph::from_digraph(g);
    let (_, original_clustering) = clustering(&simple);
    let original_betweenness = mean_largest_component_betweenness(&simple);
    let mut clust_sum = 0.0;
    let mut betw_sum = 0.0;
    for r in 0..cfg.n_realizations {
        let seed = derive_seed(cfg.seed, &["rewire", &r.to_string()]);
        let null = block_preserving_rewire(g, &partition, cfg.preserve_degree, seed)?;
        let nsimple = SimpleUgraph::from_digraph(&null);
        let (_, c) = clustering(&nsimple);
        clust_sum += c;
        betw_sum += mean_largest_component_betweenness(&nsimple);
    }
    Ok(BlockRewireSummary {
        realizations: cfg.n_realizations,
        preserve_degree: cfg.preserve_degree,
        partition_source: cfg.partition_source,
        n_blocks: partition.len(),
        original_global_clustering: original_clustering,
        null_global_clustering_mean: clust_sum / cfg.n_realizations as f64,
        original_mean_betweenness: original_betweenness,
        null_mean_betweenness_mean: betw_sum / cfg.n_realizations as f64,
    })
}

/// The `null_models` section embedded in a network's metrics report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NullModelsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub small_world: Option<SmallWorldComparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_rewire: Option<BlockRewireSummary>,
    /// set when the largest component was below the analysis cutoff
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
}

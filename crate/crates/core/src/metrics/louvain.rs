//! Greedy multi-level modularity optimization on the undirected weighted
//! view. Node visit order is a seeded shuffle and every tie breaks toward
//! the smallest community id, so a (graph, seed) pair fully determines the
//! partition.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::UndirectedWeighted;

#[derive(Debug, Clone)]
pub struct LouvainResult {
    /// community id per node, renumbered consecutively in node order
    pub partition: Vec<usize>,
    pub modularity: f64,
    pub n_communities: usize,
}

/// Modularity Q of a partition. m counts each undirected edge once and each
/// self-loop once; degrees count self-loops twice, so sum(k) = 2m.
pub fn modularity(g: &UndirectedWeighted, partition: &[usize]) -> f64 {
    let m = g.total_weight();
    if m == 0.0 {
        return 0.0;
    }
    let degrees = g.degrees();
    let n_comms = partition.iter().copied().max().map_or(0, |x| x + 1);
    let mut internal = vec![0.0f64; n_comms];
    let mut total_deg = vec![0.0f64; n_comms];
    for &(a, b, w) in &g.edges {
        if partition[a] == partition[b] {
            internal[partition[a]] += w;
        }
    }
    for (i, &sl) in g.self_loops.iter().enumerate() {
        internal[partition[i]] += sl;
    }
    for (i, &k) in degrees.iter().enumerate() {
        total_deg[partition[i]] += k;
    }
    (0..n_comms)
        .map(|c| internal[c] / m - (total_deg[c] / (2.0 * m)).powi(2))
        .sum()
}

/// Working graph for one aggregation level.
struct Level {
    n: usize,
    /// adjacency (no self-loops), weights merged
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    degrees: Vec<f64>,
    m: f64,
}

impl Level {
    fn from_parts(n: usize, edges: &[(usize, usize, f64)], self_loops: Vec<f64>) -> Level {
        let mut adj = vec![Vec::new(); n];
        for &(a, b, w) in edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        for row in &mut adj {
            row.sort_by(|x, y| x.0.cmp(&y.0));
        }
        let mut degrees = vec![0.0; n];
        for &(a, b, w) in edges {
            degrees[a] += w;
            degrees[b] += w;
        }
        for (i, &sl) in self_loops.iter().enumerate() {
            degrees[i] += 2.0 * sl;
        }
        let m = edges.iter().map(|&(_, _, w)| w).sum::<f64>() + self_loops.iter().sum::<f64>();
        Level { n, adj, self_loops, degrees, m }
    }

    /// One sweep phase of local moves; returns the community assignment and
    /// whether any node moved.
    fn local_moving(&self, order: &[usize], max_sweeps: usize) -> (Vec<usize>, bool) {
        let mut community: Vec<usize> = (0..self.n).collect();
        let mut comm_degree = self.degrees.clone();
        let mut moved_any = false;
        for _ in 0..max_sweeps {
            let mut moved = false;
            for &node in order {
                let current = community[node];
                let k = self.degrees[node];
                comm_degree[current] -= k;
                // weight from node into each neighbouring community,
                // BTreeMap for deterministic candidate order
                let mut into: BTreeMap<usize, f64> = BTreeMap::new();
                into.insert(current, 0.0);
                for &(nb, w) in &self.adj[node] {
                    *into.entry(community[nb]).or_insert(0.0) += w;
                }
                let gain = |comm: usize, k_in: f64| {
                    k_in / self.m - comm_degree[comm] * k / (2.0 * self.m * self.m)
                };
                let mut best_comm = current;
                let mut best_gain = gain(current, into[&current]);
                for (&comm, &k_in) in &into {
                    if comm == current {
                        continue;
                    }
                    let g = gain(comm, k_in);
                    if g > best_gain + 1e-12 {
                        best_gain = g;
                        best_comm = comm;
                    }
                }
                comm_degree[best_comm] += k;
                if best_comm != current {
                    community[node] = best_comm;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        (community, moved_any)
    }

    /// Collapse communities into meta-nodes; also returns, per meta-node, the
    /// community id it came from (dense, ascending).
    fn aggregate(&self, community: &[usize]) -> (Level, Vec<usize>) {
        let mut ids: Vec<usize> = community.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let renumber: BTreeMap<usize, usize> =
            ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let n_new = ids.len();
        let mut edge_acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut self_loops = vec![0.0f64; n_new];
        for (i, &sl) in self.self_loops.iter().enumerate() {
            self_loops[renumber[&community[i]]] += sl;
        }
        for (a, row) in self.adj.iter().enumerate() {
            for &(b, w) in row {
                if a < b {
                    let ca = renumber[&community[a]];
                    let cb = renumber[&community[b]];
                    if ca == cb {
                        self_loops[ca] += w;
                    } else {
                        let key = if ca < cb { (ca, cb) } else { (cb, ca) };
                        *edge_acc.entry(key).or_insert(0.0) += w;
                    }
                }
            }
        }
        let edges: Vec<(usize, usize, f64)> =
            edge_acc.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        let membership: Vec<usize> = community.iter().map(|c| renumber[c]).collect();
        (Level::from_parts(n_new, &edges, self_loops), membership)
    }
}

const MAX_LEVELS: usize = 32;
const MAX_SWEEPS: usize = 100;

/// Run Louvain; `seed` controls the node visit order only.
pub fn louvain(g: &UndirectedWeighted, seed: u64) -> LouvainResult {
    let n = g.node_count();
    if n == 0 {
        return LouvainResult { partition: Vec::new(), modularity: 0.0, n_communities: 0 };
    }
    let mut level = Level::from_parts(n, &g.edges, g.self_loops.clone());
    if level.m == 0.0 {
        return LouvainResult {
            partition: (0..n).collect(),
            modularity: 0.0,
            n_communities: n,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // membership of each original node at the current level
    let mut assignment: Vec<usize> = (0..n).collect();
    for _ in 0..MAX_LEVELS {
        let mut order: Vec<usize> = (0..level.n).collect();
        order.shuffle(&mut rng);
        let (community, moved) = level.local_moving(&order, MAX_SWEEPS);
        if !moved {
            break;
        }
        let (next, membership) = level.aggregate(&community);
        for a in assignment.iter_mut() {
            *a = membership[community[*a]];
        }
        if next.n == level.n {
            break;
        }
        level = next;
    }
    // renumber by first appearance in node order
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    let mut partition = Vec::with_capacity(n);
    for &c in &assignment {
        let next_id = seen.len();
        let id = *seen.entry(c).or_insert(next_id);
        partition.push(id);
    }
    let q = modularity(g, &partition);
    let n_communities = seen.len();
    LouvainResult { partition, modularity: q, n_communities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedDigraph;

    fn undirected(edges: &[(usize, usize)], n: usize) -> UndirectedWeighted {
        let mut g = WeightedDigraph::new();
        for i in 0..n {
            g.ensure_node(&format!("n{i}"));
        }
        for &(a, b) in edges {
            g.add_edge_weight(a, b, 1.0);
        }
        UndirectedWeighted::from_digraph(&g)
    }

    #[test]
    fn empty_graph() {
        let g = undirected(&[], 0);
        let r = louvain(&g, 0);
        assert!(r.partition.is_empty());
        assert_eq!(r.modularity, 0.0);
    }

    #[test]
    fn complete_graph_single_community_q_zero() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((i, j));
            }
        }
        let g = undirected(&edges, 5);
        let r = louvain(&g, 7);
        assert_eq!(r.n_communities, 1);
        assert!(r.modularity.abs() < 1e-9);
    }

    #[test]
    fn two_triangles_disconnected() {
        let g = undirected(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6);
        let r = louvain(&g, 3);
        assert_eq!(r.n_communities, 2);
        assert_eq!(r.partition[0], r.partition[1]);
        assert_eq!(r.partition[3], r.partition[4]);
        assert_ne!(r.partition[0], r.partition[3]);
    }

    #[test]
    fn two_cliques_with_bridge() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((i, j));
                edges.push((i + 4, j + 4));
            }
        }
        edges.push((3, 4));
        let g = undirected(&edges, 8);
        let r = louvain(&g, 11);
        assert_eq!(r.n_communities, 2);
        assert!(r.modularity > 0.3);
        for i in 0..4 {
            assert_eq!(r.partition[i], r.partition[0]);
            assert_eq!(r.partition[i + 4], r.partition[4]);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((i, j));
                edges.push((i + 4, j + 4));
            }
        }
        edges.push((0, 4));
        let g = undirected(&edges, 8);
        let a = louvain(&g, 99);
        let b = louvain(&g, 99);
        assert_eq!(a.partition, b.partition);
        assert_eq!(a.modularity, b.modularity);
    }

    #[test]
    fn modularity_bounds() {
        let g = undirected(&[(0, 1), (1, 2), (2, 3), (3, 0)], 4);
        let r = louvain(&g, 1);
        assert!(r.modularity >= -0.5 && r.modularity <= 1.0);
    }

    #[test]
    fn self_loops_enter_self_weight_term() {
        let mut wg = WeightedDigraph::new();
        let a = wg.ensure_node("a");
        let b = wg.ensure_node("b");
        wg.add_edge_weight(a, a, 4.0);
        wg.add_edge_weight(a, b, 1.0);
        let g = UndirectedWeighted::from_digraph(&wg);
        // one community: Q = in/m - (tot/2m)^2 = 5/5 - 1 = 0
        assert!(modularity(&g, &[0, 0]).abs() < 1e-12);
        // split: a has in=4 (loop), deg 9; b in=0, deg 1; m=5
        let q_split = modularity(&g, &[0, 1]);
        assert!((q_split - (4.0 / 5.0 - 0.81 - 0.01)).abs() < 1e-12);
    }
}

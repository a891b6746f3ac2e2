//! Weighted directed multigraph collapsed to weighted edges, plus the
//! undirected views the path/centrality/community code operates on.
//!
//! Node identity is the string label; ids are dense indices in insertion
//! order so that every traversal below is deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

pub type NodeId = usize;

/// Directed graph with positive edge weights. Self-loops allowed.
/// Zero-weight edges are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: BTreeMap<(NodeId, NodeId), f64>,
}

impl WeightedDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert the label if new, returning its id.
    pub fn ensure_node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Accumulate weight onto the (source, target) edge.
    pub fn add_edge_weight(&mut self, source: NodeId, target: NodeId, weight: f64) {
        debug_assert!(weight > 0.0, "edge weights must be positive");
        *self.edges.entry((source, target)).or_insert(0.0) += weight;
    }

    pub fn edge_weight(&self, source: NodeId, target: NodeId) -> Option<f64> {
        self.edges.get(&(source, target)).copied()
    }

    /// Edges in (source, target) id order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.edges.iter().map(|(&(s, t), &w)| (s, t, w))
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().sum()
    }

    /// Out-neighbour lists indexed by node, each sorted by target id.
    pub fn out_adjacency(&self) -> Vec<Vec<(NodeId, f64)>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for (&(s, t), &w) in &self.edges {
            adj[s].push((t, w));
        }
        adj
    }

    /// In-neighbour lists indexed by node, each sorted by source id.
    pub fn in_adjacency(&self) -> Vec<Vec<(NodeId, f64)>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for (&(s, t), &w) in &self.edges {
            adj[t].push((s, w));
        }
        adj
    }

    /// New graph containing the edges that pass `keep`, with nodes restricted
    /// to the surviving endpoints. Label insertion order is preserved.
    pub fn filter_edges<F>(&self, mut keep: F) -> WeightedDigraph
    where
        F: FnMut(NodeId, NodeId, f64) -> bool,
    {
        let mut kept_nodes: BTreeSet<NodeId> = BTreeSet::new();
        let mut kept_edges = Vec::new();
        for (s, t, w) in self.edges() {
            if keep(s, t, w) {
                kept_nodes.insert(s);
                kept_nodes.insert(t);
                kept_edges.push((s, t, w));
            }
        }
        let mut out = WeightedDigraph::new();
        for id in 0..self.labels.len() {
            if kept_nodes.contains(&id) {
                out.ensure_node(&self.labels[id]);
            }
        }
        for (s, t, w) in kept_edges {
            let ns = out.ensure_node(&self.labels[s]);
            let nt = out.ensure_node(&self.labels[t]);
            out.add_edge_weight(ns, nt, w);
        }
        out
    }

    /// Subgraph induced by `nodes` (original labels kept).
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> WeightedDigraph {
        let keep: HashSet<NodeId> = nodes.iter().copied().collect();
        let mut out = WeightedDigraph::new();
        let mut sorted: Vec<NodeId> = nodes.to_vec();
        sorted.sort_unstable();
        for id in sorted {
            out.ensure_node(&self.labels[id]);
        }
        for (s, t, w) in self.edges() {
            if keep.contains(&s) && keep.contains(&t) {
                let ns = out.ensure_node(&self.labels[s]);
                let nt = out.ensure_node(&self.labels[t]);
                out.add_edge_weight(ns, nt, w);
            }
        }
        out
    }
}

/// Undirected, unweighted simple view: parallel directions merged, self-loops
/// dropped. This is the graph every path, clustering, clique, and centrality
/// computation runs on.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimpleUgraph {
    labels: Vec<String>,
    adj: Vec<Vec<NodeId>>,
}

impl SimpleUgraph {
    pub fn from_digraph(g: &WeightedDigraph) -> Self {
        let n = g.node_count();
        let mut sets: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
        for (s, t, _) in g.edges() {
            if s != t {
                sets[s].insert(t);
                sets[t].insert(s);
            }
        }
        SimpleUgraph {
            labels: g.labels().to_vec(),
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Build from explicit undirected edges over `n` anonymous nodes.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut sets: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a != b {
                sets[a].insert(b);
                sets[b].insert(a);
            }
        }
        SimpleUgraph {
            labels: (0..n).map(|i| format!("n{i}")).collect(),
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adj[id].len()
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adj[id]
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Subgraph induced by the given nodes. Returns the subgraph and, per new
    /// id, the original node id.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> (SimpleUgraph, Vec<NodeId>) {
        let mut sorted: Vec<NodeId> = nodes.to_vec();
        sorted.sort_unstable();
        let mut remap: HashMap<NodeId, NodeId> = HashMap::new();
        for (new_id, &old) in sorted.iter().enumerate() {
            remap.insert(old, new_id);
        }
        let mut adj = vec![Vec::new(); sorted.len()];
        for (new_id, &old) in sorted.iter().enumerate() {
            for &nb in &self.adj[old] {
                if let Some(&nb_new) = remap.get(&nb) {
                    adj[new_id].push(nb_new);
                }
            }
            adj[new_id].sort_unstable();
        }
        let labels = sorted.iter().map(|&o| self.labels[o].clone()).collect();
        (SimpleUgraph { labels, adj }, sorted)
    }

    /// Connected components, largest first; ties broken by smallest member id.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut comps: Vec<Vec<NodeId>> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::new();
            queue.push_back(start);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    pub fn is_connected(&self) -> bool {
        match self.node_count() {
            0 => true,
            _ => self.components()[0].len() == self.node_count(),
        }
    }

    /// BFS hop distances from `source`; unreachable nodes get `usize::MAX`.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Undirected weighted view used by modularity optimisation: opposite
/// directions summed into one edge, self-loop weights retained separately.
#[derive(Debug, Clone, Default)]
pub struct UndirectedWeighted {
    pub labels: Vec<String>,
    /// Edges with `a < b`, sorted.
    pub edges: Vec<(NodeId, NodeId, f64)>,
    /// Self-loop weight per node (0 when absent).
    pub self_loops: Vec<f64>,
}

impl UndirectedWeighted {
    pub fn from_digraph(g: &WeightedDigraph) -> Self {
        let n = g.node_count();
        let mut merged: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        let mut self_loops = vec![0.0; n];
        for (s, t, w) in g.edges() {
            if s == t {
                self_loops[s] += w;
            } else {
                let key = if s < t { (s, t) } else { (t, s) };
                *merged.entry(key).or_insert(0.0) += w;
            }
        }
        UndirectedWeighted {
            labels: g.labels().to_vec(),
            edges: merged.into_iter().map(|((a, b), w)| (a, b, w)).collect(),
            self_loops,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Total weight counting each edge once and self-loops once.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum::<f64>() + self.self_loops.iter().sum::<f64>()
    }

    /// Weighted degrees; a self-loop contributes twice its weight.
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.node_count()];
        for &(a, b, w) in &self.edges {
            deg[a] += w;
            deg[b] += w;
        }
        for (i, &sl) in self.self_loops.iter().enumerate() {
            deg[i] += 2.0 * sl;
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> WeightedDigraph {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("A");
        let b = g.ensure_node("B");
        let c = g.ensure_node("C");
        g.add_edge_weight(a, b, 2.0);
        g.add_edge_weight(b, a, 1.0);
        g.add_edge_weight(a, a, 3.0);
        g.add_edge_weight(b, c, 1.0);
        g
    }

    #[test]
    fn insertion_order_is_stable() {
        let g = toy();
        assert_eq!(g.labels(), &["A", "B", "C"]);
        assert_eq!(g.node_id("B"), Some(1));
        assert_eq!(g.edge_weight(0, 1), Some(2.0));
    }

    #[test]
    fn accumulating_weights() {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("A");
        let b = g.ensure_node("B");
        g.add_edge_weight(a, b, 1.0);
        g.add_edge_weight(a, b, 1.0);
        assert_eq!(g.edge_weight(a, b), Some(2.0));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn simple_view_drops_loops_and_direction() {
        let g = toy();
        let u = SimpleUgraph::from_digraph(&g);
        assert_eq!(u.edge_count(), 2); // A-B merged, B-C, loop dropped
        assert!(u.has_edge(0, 1));
        assert!(!u.has_edge(0, 0));
    }

    #[test]
    fn undirected_weighted_merges_directions() {
        let g = toy();
        let u = UndirectedWeighted::from_digraph(&g);
        assert_eq!(u.edges, vec![(0, 1, 3.0), (1, 2, 1.0)]);
        assert_eq!(u.self_loops, vec![3.0, 0.0, 0.0]);
        let deg = u.degrees();
        assert_eq!(deg[0], 3.0 + 6.0);
    }

    #[test]
    fn components_sorted_largest_first() {
        let mut g = WeightedDigraph::new();
        for l in ["A", "B", "C", "D", "E"] {
            g.ensure_node(l);
        }
        g.add_edge_weight(0, 1, 1.0);
        g.add_edge_weight(2, 3, 1.0);
        g.add_edge_weight(3, 4, 1.0);
        let u = SimpleUgraph::from_digraph(&g);
        let comps = u.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], vec![2, 3, 4]);
        assert_eq!(comps[1], vec![0, 1]);
    }

    #[test]
    fn induced_subgraph_keeps_labels() {
        let g = toy();
        let sub = g.induced_subgraph(&[0, 1]);
        assert_eq!(sub.labels(), &["A", "B"]);
        assert_eq!(sub.edge_weight(0, 0), Some(3.0));
        assert_eq!(sub.edge_weight(0, 1), Some(2.0));
        assert_eq!(sub.edge_count(), 3);
    }
}

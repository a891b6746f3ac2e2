//! Shortest-path statistics and Brandes betweenness on the undirected,
//! unweighted simple view.

use std::collections::VecDeque;

use crate::graph::{NodeId, SimpleUgraph};

/// Longest shortest path within a connected graph; 0 for singletons.
pub fn diameter(g: &SimpleUgraph) -> usize {
    let mut best = 0usize;
    for s in 0..g.node_count() {
        for d in g.bfs_distances(s) {
            if d != usize::MAX && d > best {
                best = d;
            }
        }
    }
    best
}

/// Mean shortest-path length over ordered distinct pairs of a connected
/// graph. The boolean is false for singletons, where the mean is undefined
/// and reported as 0.
pub fn avg_path_length(g: &SimpleUgraph) -> (f64, bool) {
    let n = g.node_count();
    if n < 2 {
        return (0.0, false);
    }
    let mut total = 0usize;
    let mut pairs = 0usize;
    for s in 0..n {
        for (t, d) in g.bfs_distances(s).into_iter().enumerate() {
            if t != s && d != usize::MAX {
                total += d;
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        return (0.0, false);
    }
    (total as f64 / pairs as f64, true)
}

/// Brandes betweenness centrality, normalized by (n-1)(n-2)/2 so a node on
/// every shortest path of a star scores 1.0. Graphs with n < 3 score all
/// zeros. Unreachable pairs contribute nothing.
pub fn betweenness(g: &SimpleUgraph) -> Vec<f64> {
    let n = g.node_count();
    let mut centrality = vec![0.0f64; n];
    if n < 3 {
        return centrality;
    }
    let mut stack: Vec<NodeId> = Vec::with_capacity(n);
    let mut pred: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue: VecDeque<NodeId> = VecDeque::new();

    for s in 0..n {
        stack.clear();
        queue.clear();
        for v in 0..n {
            pred[v].clear();
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &pred[w] {
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    // each unordered pair was accumulated from both endpoints
    let norm = ((n - 1) * (n - 2)) as f64; // == 2 * (n-1)(n-2)/2
    for c in &mut centrality {
        *c /= norm;
    }
    centrality
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> SimpleUgraph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        SimpleUgraph::from_edges(n, &edges)
    }

    fn complete(n: usize) -> SimpleUgraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        SimpleUgraph::from_edges(n, &edges)
    }

    fn star(leaves: usize) -> SimpleUgraph {
        let edges: Vec<(usize, usize)> = (1..=leaves).map(|l| (0, l)).collect();
        SimpleUgraph::from_edges(leaves + 1, &edges)
    }

    #[test]
    fn p4_diameter_and_mean() {
        let g = path_graph(4);
        assert_eq!(diameter(&g), 3);
        let (avg, defined) = avg_path_length(&g);
        assert!(defined);
        assert!((avg - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_paths() {
        let g = complete(5);
        assert_eq!(diameter(&g), 1);
        let (avg, _) = avg_path_length(&g);
        assert_eq!(avg, 1.0);
    }

    #[test]
    fn star_diameter_two() {
        assert_eq!(diameter(&star(4)), 2);
    }

    #[test]
    fn singleton_conventions() {
        let g = SimpleUgraph::from_edges(1, &[]);
        assert_eq!(diameter(&g), 0);
        let (avg, defined) = avg_path_length(&g);
        assert_eq!(avg, 0.0);
        assert!(!defined);
    }

    #[test]
    fn p3_middle_scores_one() {
        let b = betweenness(&path_graph(3));
        assert_eq!(b, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn complete_graph_all_zero() {
        let b = betweenness(&complete(6));
        assert!(b.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn star_hub_scores_one() {
        let b = betweenness(&star(5));
        assert_eq!(b[0], 1.0);
        assert!(b[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn small_graphs_score_zero() {
        assert_eq!(betweenness(&path_graph(2)), vec![0.0, 0.0]);
    }

    #[test]
    fn diameter_not_below_average() {
        let g = path_graph(7);
        let (avg, _) = avg_path_length(&g);
        assert!(diameter(&g) as f64 >= avg);
        assert!(avg >= 1.0);
    }
}

//! Degree, density, and self-loop statistics on the directed graph.

use std::collections::BTreeMap;

use crate::graph::WeightedDigraph;

/// Total degree (in + out) per node; a self-loop contributes 2.
pub fn total_degrees(g: &WeightedDigraph) -> Vec<usize> {
    let mut deg = vec![0usize; g.node_count()];
    for (s, t, _) in g.edges() {
        deg[s] += 1;
        deg[t] += 1;
    }
    deg
}

/// Histogram of total degrees over all nodes.
pub fn degree_stats(g: &WeightedDigraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for d in total_degrees(g) {
        *hist.entry(d).or_insert(0) += 1;
    }
    hist
}

/// m / (n (n - 1)) with m counting every directed edge including self-loops,
/// so values above 1 are possible. A single node reports 1.0 when it carries
/// a self-loop and 0.0 otherwise.
pub fn density(g: &WeightedDigraph) -> f64 {
    let n = g.node_count();
    let m = g.edge_count();
    match n {
        0 => 0.0,
        1 => {
            if m > 0 {
                1.0
            } else {
                0.0
            }
        }
        _ => m as f64 / (n as f64 * (n as f64 - 1.0)),
    }
}

/// Fraction of nodes whose only incident edges are self-loops.
pub fn selfloop_only_ratio(g: &WeightedDigraph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let mut has_self = vec![false; n];
    let mut has_other = vec![false; n];
    for (s, t, _) in g.edges() {
        if s == t {
            has_self[s] = true;
        } else {
            has_other[s] = true;
            has_other[t] = true;
        }
    }
    let count = (0..n).filter(|&i| has_self[i] && !has_other[i]).count();
    count as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_counts_twice_in_degree() {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("a");
        g.add_edge_weight(a, a, 1.0);
        assert_eq!(degree_stats(&g), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn directed_cycle_degrees() {
        let mut g = WeightedDigraph::new();
        for i in 0..3 {
            g.ensure_node(&format!("n{i}"));
        }
        for i in 0..3 {
            g.add_edge_weight(i, (i + 1) % 3, 1.0);
        }
        assert_eq!(degree_stats(&g), BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn complete_directed_density_is_one() {
        let mut g = WeightedDigraph::new();
        for i in 0..4 {
            g.ensure_node(&format!("n{i}"));
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    g.add_edge_weight(i, j, 1.0);
                }
            }
        }
        assert_eq!(density(&g), 1.0);
    }

    #[test]
    fn self_loops_push_density_above_one() {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("A");
        let b = g.ensure_node("B");
        g.add_edge_weight(a, b, 1.0);
        g.add_edge_weight(b, a, 1.0);
        g.add_edge_weight(a, a, 1.0);
        g.add_edge_weight(b, b, 1.0);
        assert_eq!(density(&g), 2.0);
    }

    #[test]
    fn singleton_density_convention() {
        let mut g = WeightedDigraph::new();
        g.ensure_node("a");
        assert_eq!(density(&g), 0.0);
        g.add_edge_weight(0, 0, 1.0);
        assert_eq!(density(&g), 1.0);
    }

    #[test]
    fn selfloop_only_fraction() {
        let mut g = WeightedDigraph::new();
        for i in 0..10 {
            g.ensure_node(&format!("n{i}"));
        }
        // six isolated nodes with self-loops
        for i in 0..6 {
            g.add_edge_weight(i, i, 1.0);
        }
        // four nodes in a directed cycle
        for i in 6..10 {
            let j = if i == 9 { 6 } else { i + 1 };
            g.add_edge_weight(i, j, 1.0);
        }
        assert!((selfloop_only_ratio(&g) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn no_self_loops_is_zero() {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("a");
        let b = g.ensure_node("b");
        g.add_edge_weight(a, b, 1.0);
        assert_eq!(selfloop_only_ratio(&g), 0.0);
    }

    #[test]
    fn all_selfloop_only_is_one() {
        let mut g = WeightedDigraph::new();
        for i in 0..3 {
            g.ensure_node(&format!("n{i}"));
            g.add_edge_weight(i, i, 2.0);
        }
        assert_eq!(selfloop_only_ratio(&g), 1.0);
    }

    #[test]
    fn node_with_selfloop_and_cycle_edge_not_counted() {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("a");
        let b = g.ensure_node("b");
        g.add_edge_weight(a, a, 1.0);
        g.add_edge_weight(a, b, 1.0);
        assert_eq!(selfloop_only_ratio(&g), 0.0);
    }
}

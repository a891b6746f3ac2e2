//! Local clustering coefficients and global transitivity.

use crate::graph::SimpleUgraph;

/// Per-node local clustering (degree < 2 scores 0) and the global
/// transitivity 3*triangles / connected-triples.
pub fn clustering(g: &SimpleUgraph) -> (Vec<f64>, f64) {
    let n = g.node_count();
    let mut local = vec![0.0f64; n];
    let mut triangles_x2_total = 0u64; // per-node closed wedge count, summed
    let mut triples_total = 0u64;
    for v in 0..n {
        let neigh = g.neighbors(v);
        let d = neigh.len();
        if d < 2 {
            continue;
        }
        let mut links = 0u64;
        for (i, &a) in neigh.iter().enumerate() {
            for &b in &neigh[i + 1..] {
                if g.has_edge(a, b) {
                    links += 1;
                }
            }
        }
        let possible = (d * (d - 1) / 2) as u64;
        local[v] = links as f64 / possible as f64;
        triangles_x2_total += links; // each triangle closes one wedge at v
        triples_total += possible;
    }
    let global = if triples_total == 0 {
        0.0
    } else {
        triangles_x2_total as f64 / triples_total as f64
    };
    (local, global)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_fully_clustered() {
        let g = SimpleUgraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let (local, global) = clustering(&g);
        assert_eq!(local, vec![1.0, 1.0, 1.0]);
        assert_eq!(global, 1.0);
    }

    #[test]
    fn star_has_zero_clustering() {
        let g = SimpleUgraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let (local, global) = clustering(&g);
        assert!(local.iter().all(|&c| c == 0.0));
        assert_eq!(global, 0.0);
    }

    #[test]
    fn diamond_transitivity() {
        // K4 minus one edge: 2 triangles, wedges 3+3+1+1 = 8
        let g = SimpleUgraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let (local, global) = clustering(&g);
        assert!((global - 6.0 / 8.0).abs() < 1e-12);
        assert!((local[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((local[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_one_scores_zero() {
        let g = SimpleUgraph::from_edges(3, &[(0, 1), (1, 2)]);
        let (local, _) = clustering(&g);
        assert_eq!(local[0], 0.0);
        assert_eq!(local[2], 0.0);
    }
}

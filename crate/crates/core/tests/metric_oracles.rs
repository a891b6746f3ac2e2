//! Oracle-backed checks that cut across modules: modularity against a
//! brute-force best-2-partition search, the betweenness/clustering
//! anticorrelation on a small-world fixture, the hand-counted projected-toy
//! degree histogram, and component ordering.

mod common;

use std::collections::BTreeMap;

use dappnet_core::graph::{SimpleUgraph, UndirectedWeighted, WeightedDigraph};
use dappnet_core::metrics;
use dappnet_core::netbuild;
use dappnet_core::nullmodel::{small_world_comparison, RandomizationConfig};
use dappnet_core::CallRecord;

/// Straight-from-the-definition modularity for an unweighted simple graph:
/// (1/2m) * sum over ordered pairs of (A_ij - k_i k_j / 2m) delta(c_i, c_j).
fn modularity_direct(g: &SimpleUgraph, part: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    let n = g.node_count();
    let degrees: Vec<f64> = (0..n).map(|i| g.degree(i) as f64).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if part[i] != part[j] {
                continue;
            }
            let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
            q += a - degrees[i] * degrees[j] / (2.0 * m);
        }
    }
    q / (2.0 * m)
}

fn two_cliques_with_bridge() -> SimpleUgraph {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            edges.push((i, j));
            edges.push((i + 4, j + 4));
        }
    }
    edges.push((3, 4));
    SimpleUgraph::from_edges(8, &edges)
}

#[test]
fn louvain_matches_best_two_partition() {
    let g = two_cliques_with_bridge();
    // exhaustive best 2-partition (node 0 pinned to side 0)
    let mut best_q = f64::NEG_INFINITY;
    let mut best_mask = 0u32;
    for mask in 0u32..(1 << 7) {
        let part: Vec<usize> = (0..8)
            .map(|i| if i == 0 { 0 } else { ((mask >> (i - 1)) & 1) as usize })
            .collect();
        let q = modularity_direct(&g, &part);
        if q > best_q {
            best_q = q;
            best_mask = mask;
        }
    }
    // the optimum must be the clique split
    let best_part: Vec<usize> = (0..8)
        .map(|i| if i == 0 { 0 } else { ((best_mask >> (i - 1)) & 1) as usize })
        .collect();
    assert_eq!(&best_part[..4], &[0, 0, 0, 0]);
    assert_eq!(&best_part[4..], &[1, 1, 1, 1]);
    assert!((best_q - 11.0 / 26.0).abs() < 1e-12);

    let uw = UndirectedWeighted::from_digraph(&common::as_digraph(&g));
    let result = metrics::louvain(&uw, 5);
    assert!(result.modularity > 0.3);
    assert!((result.modularity - best_q).abs() < 1e-9);
    assert_eq!(result.n_communities, 2);
    for i in 1..4 {
        assert_eq!(result.partition[i], result.partition[0]);
        assert_eq!(result.partition[i + 4], result.partition[4]);
    }
    assert_ne!(result.partition[0], result.partition[4]);
}

#[test]
fn betweenness_anticorrelates_with_clustering_on_small_world() {
    // rank correlation over nodes of the largest component; high-clustering
    // lattice nodes should carry little shortest-path traffic compared with
    // the rewired bridges
    let mut negatives = 0;
    for seed in 0..5 {
        let g = common::watts_strogatz(60, 4, 6, seed);
        let comps = g.components();
        let (sub, _) = g.induced_subgraph(&comps[0]);
        let betw = metrics::betweenness(&sub);
        let (local, _) = metrics::clustering(&sub);
        let rho = common::spearman(&betw, &local);
        if rho < 0.0 {
            negatives += 1;
        }
    }
    assert!(negatives >= 4, "anticorrelation held in {negatives}/5 fixtures");
}

#[test]
fn projected_toy_degree_histogram_matches_hand_count() {
    // same layout as the interlinked toy: one isolated function row plus
    // three rows sharing a contract; hand enumeration gives one self-loop
    // node (total degree 2) and a directed 3-clique with self-loops
    // (out 3 + in 3 = 6 each)
    let mk = |src: &str, f: &str, tgt: &str, times: usize| -> Vec<CallRecord> {
        (0..times)
            .map(|_| CallRecord {
                file: "t.sol".into(),
                source_contract: src.into(),
                source_function: f.into(),
                target_contract: Some(tgt.into()),
            })
            .collect()
    };
    let mut records = Vec::new();
    records.extend(mk("F1", "f", "C1", 3));
    records.extend(mk("F2", "f", "C2", 2));
    records.extend(mk("F3", "f", "C2", 1));
    records.extend(mk("F4", "f", "C2", 4));
    let m = netbuild::build_bipartite(&records, true);
    let rho = netbuild::project_functions(&m);
    assert_eq!(
        metrics::degree_stats(&rho),
        BTreeMap::from([(2, 1), (6, 3)])
    );
}

#[test]
fn multi_component_ordering_is_largest_first() {
    let mut g = WeightedDigraph::new();
    for i in 0..9 {
        g.ensure_node(&format!("n{i}"));
    }
    // one 4-chain, one triangle, one pair
    g.add_edge_weight(0, 1, 1.0);
    g.add_edge_weight(1, 2, 1.0);
    g.add_edge_weight(2, 3, 1.0);
    g.add_edge_weight(4, 5, 1.0);
    g.add_edge_weight(5, 6, 1.0);
    g.add_edge_weight(6, 4, 1.0);
    g.add_edge_weight(7, 8, 1.0);
    let comps = metrics::components(&g);
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    assert_eq!(sizes, vec![4, 3, 2]);
    assert_eq!(comps[0], vec![0, 1, 2, 3]);
}

#[test]
fn small_world_fixture_beats_random_clustering() {
    let ws = common::watts_strogatz(60, 4, 6, 42);
    assert!(ws.is_connected());
    let g = common::as_digraph(&ws);
    let cfg = RandomizationConfig { seed: 7, n_realizations: 100, ..Default::default() };
    let cmp = small_world_comparison(&g, &cfg, 50).unwrap().unwrap();
    assert!(
        cmp.real_clustering > 3.0 * cmp.random_clustering_mean,
        "clustering {} vs null {}",
        cmp.real_clustering,
        cmp.random_clustering_mean
    );
    assert!(
        cmp.real_avg_path <= 2.0 * cmp.random_avg_path_mean,
        "path {} vs null {}",
        cmp.real_avg_path,
        cmp.random_avg_path_mean
    );
}

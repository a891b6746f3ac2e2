//! The per-network metric battery: degree statistics, density, self-loop
//! prevalence, community structure, components, path lengths, centralities,
//! clustering, maximal cliques, and tail fits, assembled into one
//! serializable report per network.

pub mod basic;
pub mod cliques;
pub mod clustering;
pub mod louvain;
pub mod paths;
pub mod powerlaw;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{SimpleUgraph, UndirectedWeighted, WeightedDigraph};
use crate::nullmodel::NullModelsSection;
use crate::resilience::ResilienceSection;

pub use basic::{degree_stats, density, selfloop_only_ratio, total_degrees};
pub use cliques::{clique_size_histogram, full_clique_histogram, maximal_cliques, DEFAULT_CLIQUE_BUDGET};
pub use clustering::clustering;
pub use louvain::{louvain, modularity, LouvainResult};
pub use paths::{avg_path_length, betweenness, diameter};
pub use powerlaw::{fit_powerlaw, hurwitz_zeta, PowerLawFit, PowerLawSampler};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("maximal clique enumeration exceeded the budget of {0}")]
    CliqueBudgetExceeded(usize),
    #[error("power-law fit needs at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("power-law samples must be >= 1")]
    NonPositiveSample,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NodeScore {
    pub betweenness: f64,
    pub clustering: f64,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: String,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub density: f64,
    pub selfloop_only_ratio: f64,
    pub modularity: f64,
    pub n_communities: usize,
    pub n_components: usize,
    pub largest_component_size: usize,
    /// diameter of the largest component (undirected hops)
    pub diameter: usize,
    /// transitivity of the largest component
    pub global_clustering: f64,
    pub avg_path_length: f64,
    /// false when the largest component is a singleton
    pub avg_path_length_defined: bool,
    pub node_scores: BTreeMap<String, NodeScore>,
    /// node label -> community id from the modularity partition
    pub communities: BTreeMap<String, usize>,
    /// degree histogram restricted to the largest component (pooled across
    /// networks for the corpus-level tail fit)
    pub largest_component_degree_histogram: BTreeMap<usize, usize>,
    /// maximal clique sizes >= 3
    pub clique_size_histogram: BTreeMap<usize, usize>,
    pub powerlaw: Option<PowerLawFit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub null_models: Option<NullModelsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resilience: Option<ResilienceSection>,
}

pub const METRICS_SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone)]
pub struct MetricsConfig {
    pub louvain_seed: u64,
    pub clique_budget: usize,
    /// attempt a power-law fit on the largest component's degree sequence
    pub fit_powerlaw: bool,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        MetricsConfig {
            louvain_seed: 0,
            clique_budget: DEFAULT_CLIQUE_BUDGET,
            fit_powerlaw: false,
        }
    }
}

/// Weak components of the directed graph (the undirected view's components),
/// largest first.
pub fn components(g: &WeightedDigraph) -> Vec<Vec<usize>> {
    SimpleUgraph::from_digraph(g).components()
}

/// Run the whole battery over one network.
pub fn compute_metrics(
    g: &WeightedDigraph,
    cfg: &MetricsConfig,
) -> Result<MetricsReport, MetricsError> {
    let degree_histogram = degree_stats(g);
    let degrees = total_degrees(g);
    let simple = SimpleUgraph::from_digraph(g);
    let comps = simple.components();
    let n_components = comps.len();
    let largest_component_size = comps.first().map_or(0, Vec::len);

    let louvain_result = louvain(&UndirectedWeighted::from_digraph(g), cfg.louvain_seed);
    let communities: BTreeMap<String, usize> = louvain_result
        .partition
        .iter()
        .enumerate()
        .map(|(i, &c)| (g.label(i).to_string(), c))
        .collect();

    let (local_clustering, _) = clustering(&simple);

    // per-component betweenness, normalized within the component
    let mut node_betweenness = vec![0.0f64; g.node_count()];
    for comp in &comps {
        if comp.len() < 3 {
            continue;
        }
        let (sub, original) = simple.induced_subgraph(comp);
        for (local_id, score) in betweenness(&sub).into_iter().enumerate() {
            node_betweenness[original[local_id]] = score;
        }
    }

    let (diameter_value, avg, avg_defined, global_clustering) = match comps.first() {
        Some(comp) => {
            let (sub, _) = simple.induced_subgraph(comp);
            let (avg, defined) = avg_path_length(&sub);
            let (_, transitivity) = clustering(&sub);
            (diameter(&sub), avg, defined, transitivity)
        }
        None => (0, 0.0, false, 0.0),
    };

    let node_scores: BTreeMap<String, NodeScore> = (0..g.node_count())
        .map(|i| {
            (
                g.label(i).to_string(),
                NodeScore {
                    betweenness: node_betweenness[i],
                    clustering: local_clustering[i],
                    degree: degrees[i],
                },
            )
        })
        .collect();

    let clique_hist = clique_size_histogram(&simple, cfg.clique_budget)?;

    let mut largest_component_degree_histogram = BTreeMap::new();
    if let Some(comp) = comps.first() {
        for &i in comp {
            *largest_component_degree_histogram.entry(degrees[i]).or_insert(0) += 1;
        }
    }

    let powerlaw = if cfg.fit_powerlaw {
        match comps.first() {
            Some(comp) => {
                let samples: Vec<u64> = comp.iter().map(|&i| degrees[i] as u64).collect();
                fit_powerlaw(&samples).ok()
            }
            None => None,
        }
    } else {
        None
    };

    Ok(MetricsReport {
        schema_version: METRICS_SCHEMA_VERSION.to_string(),
        n_nodes: g.node_count(),
        n_edges: g.edge_count(),
        degree_histogram,
        density: density(g),
        selfloop_only_ratio: selfloop_only_ratio(g),
        modularity: louvain_result.modularity,
        n_communities: louvain_result.n_communities,
        n_components,
        largest_component_size,
        diameter: diameter_value,
        global_clustering,
        avg_path_length: avg,
        avg_path_length_defined: avg_defined,
        node_scores,
        communities,
        largest_component_degree_histogram,
        clique_size_histogram: clique_hist,
        powerlaw,
        null_models: None,
        resilience: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_on_small_graph() {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("A");
        let b = g.ensure_node("B");
        let c = g.ensure_node("C");
        let d = g.ensure_node("D");
        g.add_edge_weight(a, b, 2.0);
        g.add_edge_weight(b, c, 1.0);
        g.add_edge_weight(c, a, 1.0);
        g.add_edge_weight(d, d, 5.0);
        let report = compute_metrics(&g, &MetricsConfig::default()).unwrap();
        assert_eq!(report.n_nodes, 4);
        assert_eq!(report.n_components, 2);
        assert_eq!(report.largest_component_size, 3);
        assert_eq!(report.diameter, 1);
        assert!((report.selfloop_only_ratio - 0.25).abs() < 1e-12);
        assert_eq!(report.clique_size_histogram, BTreeMap::from([(3, 1)]));
        // histogram sums to node count
        let total: usize = report.degree_histogram.values().sum();
        assert_eq!(total, 4);
        assert!(report.modularity >= -0.5 && report.modularity <= 1.0);
    }

    #[test]
    fn empty_graph_battery() {
        let g = WeightedDigraph::new();
        let report = compute_metrics(&g, &MetricsConfig::default()).unwrap();
        assert_eq!(report.n_components, 0);
        assert_eq!(report.largest_component_size, 0);
        assert!(!report.avg_path_length_defined);
    }

    #[test]
    fn report_serializes_deterministically() {
        let mut g = WeightedDigraph::new();
        let a = g.ensure_node("x");
        let b = g.ensure_node("y");
        g.add_edge_weight(a, b, 1.0);
        let report = compute_metrics(&g, &MetricsConfig::default()).unwrap();
        let one = serde_json::to_string_pretty(&report).unwrap();
        let two = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(one, two);
        assert!(one.contains("\"schema_version\": \"v1\""));
    }
}

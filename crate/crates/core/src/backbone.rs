//! Disparity-filter backbone extraction for weighted directed networks.
//!
//! Each edge is tested against a null model in which a node's strength is
//! spread uniformly over its edges: with p the normalized weight at an
//! endpoint of degree k, the significance is alpha = (1 - p)^(k - 1). Small
//! alpha means the edge carries a disproportionate share of that node's
//! strength. Degree-1 endpoints have a degenerate null model; a single edge
//! is that node's whole backbone and survives on that side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::WeightedDigraph;

#[derive(Debug, Error)]
pub enum BackboneError {
    #[error("weight {weight} exceeds strength {strength}")]
    WeightExceedsStrength { weight: f64, strength: f64 },
    #[error("weight and strength must be positive (got w={weight}, s={strength})")]
    NonPositive { weight: f64, strength: f64 },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("alpha threshold must lie in (0, 1), got {0}")]
    BadThreshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// Keep an edge significant from either its source's out-distribution or
    /// its target's in-distribution (the permissive variant, default).
    EitherDirection,
    /// Keep only edges significant in the source's out-distribution.
    OutOnly,
}

/// Significance of one edge weight within a node's local weight distribution.
/// `None` marks the degenerate degree-1 case.
pub fn edge_alpha(
    weight: f64,
    strength: f64,
    degree: usize,
) -> Result<Option<f64>, BackboneError> {
    if degree == 0 {
        return Err(BackboneError::ZeroDegree);
    }
    if weight <= 0.0 || strength <= 0.0 {
        return Err(BackboneError::NonPositive { weight, strength });
    }
    if weight > strength {
        return Err(BackboneError::WeightExceedsStrength { weight, strength });
    }
    if degree == 1 {
        return Ok(None);
    }
    let p = weight / strength;
    Ok(Some((1.0 - p).powi(degree as i32 - 1)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackboneResult {
    #[serde(skip)]
    pub filtered: WeightedDigraph,
    pub alpha_threshold: f64,
    pub mode: FilterMode,
    pub pre_nodes: usize,
    pub pre_edges: usize,
    pub post_nodes: usize,
    pub post_edges: usize,
    /// post/pre node count ratio (1.0 for an empty input)
    pub retention_nodes: f64,
    pub retention_edges: f64,
}

/// Apply the disparity filter. Self-loops count as one out-edge of and one
/// in-edge to their node and are filtered by the same rule. Nodes left with
/// no incident edge are dropped.
pub fn filter_graph(
    g: &WeightedDigraph,
    alpha_threshold: f64,
    mode: FilterMode,
) -> Result<BackboneResult, BackboneError> {
    if !(alpha_threshold > 0.0 && alpha_threshold < 1.0) {
        return Err(BackboneError::BadThreshold(alpha_threshold));
    }
    let out_adj = g.out_adjacency();
    let in_adj = g.in_adjacency();
    let out_strength: Vec<f64> = out_adj.iter().map(|a| a.iter().map(|&(_, w)| w).sum()).collect();
    let in_strength: Vec<f64> = in_adj.iter().map(|a| a.iter().map(|&(_, w)| w).sum()).collect();
    let out_degree: Vec<usize> = out_adj.iter().map(Vec::len).collect();
    let in_degree: Vec<usize> = in_adj.iter().map(Vec::len).collect();

    let significant = |alpha: Option<f64>| match alpha {
        None => true, // degree-1 endpoint: the edge is that node's backbone
        Some(a) => a < alpha_threshold,
    };

    let filtered = g.filter_edges(|s, t, w| {
        let out_side = significant(
            edge_alpha(w, out_strength[s], out_degree[s]).expect("weight bounded by strength"),
        );
        match mode {
            FilterMode::OutOnly => out_side,
            FilterMode::EitherDirection => {
                out_side
                    || significant(
                        edge_alpha(w, in_strength[t], in_degree[t])
                            .expect("weight bounded by strength"),
                    )
            }
        }
    });

    let (pre_nodes, pre_edges) = (g.node_count(), g.edge_count());
    let (post_nodes, post_edges) = (filtered.node_count(), filtered.edge_count());
    let ratio = |post: usize, pre: usize| if pre == 0 { 1.0 } else { post as f64 / pre as f64 };
    Ok(BackboneResult {
        filtered,
        alpha_threshold,
        mode,
        pre_nodes,
        pre_edges,
        post_nodes,
        post_edges,
        retention_nodes: ratio(post_nodes, pre_nodes),
        retention_edges: ratio(post_edges, pre_edges),
    })
}

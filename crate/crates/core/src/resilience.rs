//! Node-removal experiments on a connected component: targeted removal by
//! static betweenness or degree ranking versus random removal, tracking the
//! average path length of the largest surviving piece over a removal grid
//! and detecting the disconnection point.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{SimpleUgraph, WeightedDigraph};
use crate::metrics::{avg_path_length, betweenness};
use crate::seed::derive_seed;

#[derive(Debug, Error)]
pub enum ResilienceError {
    #[error("removal grid must be increasing and lie within [0, 0.2]")]
    BadGrid,
    #[error("component must be connected")]
    Disconnected,
    #[error("random strategy needs at least one trial")]
    NoTrials,
    #[error("no betweenness-static trace present")]
    MissingTargetedTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalStrategy {
    BetweennessStatic,
    DegreeStatic,
    Random,
}

impl std::fmt::Display for RemovalStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RemovalStrategy::BetweennessStatic => "betweenness-static",
            RemovalStrategy::DegreeStatic => "degree-static",
            RemovalStrategy::Random => "random",
        };
        f.write_str(s)
    }
}

/// When does a surviving subgraph count as disconnected: when the largest
/// piece covers less than `giant_fraction` of survivors, or when the
/// second-largest piece has at least `min_secondary` nodes. The compound rule
/// keeps single stranded leaves from tripping the marker while still
/// catching a hub shattering the component into singletons.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DisconnectionRule {
    pub giant_fraction: f64,
    pub min_secondary: usize,
}

impl Default for DisconnectionRule {
    fn default() -> Self {
        DisconnectionRule { giant_fraction: 0.9, min_secondary: 2 }
    }
}

impl DisconnectionRule {
    fn is_disconnected(&self, largest: usize, second: Option<usize>, survivors: usize) -> bool {
        if survivors == 0 {
            return false;
        }
        if (largest as f64) < self.giant_fraction * survivors as f64 {
            return true;
        }
        matches!(second, Some(s) if s >= self.min_secondary)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RemovalTrace {
    pub strategy: RemovalStrategy,
    /// initial component size
    pub n: usize,
    pub fractions: Vec<f64>,
    /// average path length of the largest surviving piece (trial mean for
    /// the random strategy)
    pub avg_path_lengths: Vec<f64>,
    /// standard error of the path length over trials (0 for targeted)
    pub stderr: Vec<f64>,
    /// mean share of survivors covered by the largest piece
    pub giant_share: Vec<f64>,
    /// share of trials disconnected per the rule at each grid point
    pub disconnect_prob: Vec<f64>,
    /// share of trials whose giant piece stayed above the rule's fraction at
    /// every grid point up to and including this one
    pub keep_prob: Vec<f64>,
    /// first grid fraction at which the rule fires (majority of trials for
    /// the random strategy)
    pub disconnected_at: Option<f64>,
    /// full removal ranking (targeted strategies only)
    pub removal_order: Vec<String>,
    pub trials: usize,
    pub seed: u64,
}

/// Grid default: 0 to 0.20 in steps of 0.01.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 100.0).collect()
}

fn removed_count(fraction: f64, n: usize) -> usize {
    (fraction * n as f64 + 1e-9).floor() as usize
}

fn validate_grid(grid: &[f64]) -> Result<(), ResilienceError> {
    if grid.is_empty() {
        return Err(ResilienceError::BadGrid);
    }
    let mut prev = -1.0f64;
    for &f in grid {
        if !(0.0..=0.2).contains(&f) || f <= prev {
            return Err(ResilienceError::BadGrid);
        }
        prev = f;
    }
    Ok(())
}

struct SurvivorStats {
    avg_path: f64,
    giant_share: f64,
    disconnected: bool,
}

fn survivor_stats(
    simple: &SimpleUgraph,
    removed: &[usize],
    rule: &DisconnectionRule,
) -> SurvivorStats {
    let mut keep = vec![true; simple.node_count()];
    for &r in removed {
        keep[r] = false;
    }
    let survivors: Vec<usize> = (0..simple.node_count()).filter(|&i| keep[i]).collect();
    let n_superv = survivors.len();
    if n_superv == 0 {
        return SurvivorStats { avg_path: 0.0, giant_share: 0.0, disconnected: false };
    }
    let (sub, _) = simple.induced_subgraph(&survivors);
    let comps = sub.components();
    let largest = comps[0].len();
    let second = comps.get(1).map(Vec::len);
    let (lsub, _) = sub.induced_subgraph(&comps[0]);
    let (avg_path, _) = avg_path_length(&lsub);
    SurvivorStats {
        avg_path,
        giant_share: largest as f64 / n_superv as f64,
        disconnected: rule.is_disconnected(largest, second, n_superv),
    }
}

/// Rank nodes for a static targeted strategy: score descending, label
/// ascending on ties.
fn static_ranking(simple: &SimpleUgraph, strategy: RemovalStrategy) -> Vec<usize> {
    let scores: Vec<f64> = match strategy {
        RemovalStrategy::BetweennessStatic => betweenness(simple),
        RemovalStrategy::DegreeStatic => {
            (0..simple.node_count()).map(|i| simple.degree(i) as f64).collect()
        }
        RemovalStrategy::Random => unreachable!("random strategy has no static ranking"),
    };
    let mut order: Vec<usize> = (0..simple.node_count()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap()
            .then_with(|| simple.label(a).cmp(simple.label(b)))
    });
    order
}

/// Run one removal experiment over the grid. The component must be
/// connected; ranking happens once, never after removals.
pub fn removal_experiment(
    component: &WeightedDigraph,
    strategy: RemovalStrategy,
    grid: &[f64],
    trials: usize,
    seed: u64,
    rule: &DisconnectionRule,
) -> Result<RemovalTrace, ResilienceError> {
    validate_grid(grid)?;
    let simple = SimpleUgraph::from_digraph(component);
    if !simple.is_connected() {
        return Err(ResilienceError::Disconnected);
    }
    let n = simple.node_count();

    match strategy {
        RemovalStrategy::BetweennessStatic | RemovalStrategy::DegreeStatic => {
            let order = static_ranking(&simple, strategy);
            let mut trace = RemovalTrace {
                strategy,
                n,
                fractions: grid.to_vec(),
                avg_path_lengths: Vec::new(),
                stderr: Vec::new(),
                giant_share: Vec::new(),
                disconnect_prob: Vec::new(),
                keep_prob: Vec::new(),
                disconnected_at: None,
                removal_order: order.iter().map(|&i| simple.label(i).to_string()).collect(),
                trials: 1,
                seed,
            };
            let mut kept_so_far = true;
            for &f in grid {
                let k = removed_count(f, n);
                let stats = survivor_stats(&simple, &order[..k.min(n)], rule);
                if stats.giant_share < rule.giant_fraction {
                    kept_so_far = false;
                }
                if stats.disconnected && trace.disconnected_at.is_none() {
                    trace.disconnected_at = Some(f);
                }
                trace.avg_path_lengths.push(stats.avg_path);
                trace.stderr.push(0.0);
                trace.giant_share.push(stats.giant_share);
                trace.disconnect_prob.push(if stats.disconnected { 1.0 } else { 0.0 });
                trace.keep_prob.push(if kept_so_far { 1.0 } else { 0.0 });
            }
            Ok(trace)
        }
        RemovalStrategy::Random => {
            if trials == 0 {
                return Err(ResilienceError::NoTrials);
            }
            let points = grid.len();
            let mut path_sums = vec![0.0f64; points];
            let mut path_sq_sums = vec![0.0f64; points];
            let mut share_sums = vec![0.0f64; points];
            let mut disc_counts = vec![0usize; points];
            let mut keep_counts = vec![0usize; points];
            for t in 0..trials {
                let mut order: Vec<usize> = (0..n).collect();
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(seed, &["trial", &t.to_string()]));
                order.shuffle(&mut rng);
                let mut kept = true;
                for (i, &f) in grid.iter().enumerate() {
                    let k = removed_count(f, n);
                    let stats = survivor_stats(&simple, &order[..k.min(n)], rule);
                    path_sums[i] += stats.avg_path;
                    path_sq_sums[i] += stats.avg_path * stats.avg_path;
                    share_sums[i] += stats.giant_share;
                    if stats.disconnected {
                        disc_counts[i] += 1;
                    }
                    if stats.giant_share < rule.giant_fraction {
                        kept = false;
                    }
                    if kept {
                        keep_counts[i] += 1;
                    }
                }
            }
            let tf = trials as f64;
            let stderr: Vec<f64> = (0..points)
                .map(|i| {
                    if trials < 2 {
                        return 0.0;
                    }
                    let mean = path_sums[i] / tf;
                    let var = (path_sq_sums[i] / tf - mean * mean).max(0.0);
                    (var / (tf - 1.0)).sqrt()
                })
                .collect();
            let disconnect_prob: Vec<f64> =
                disc_counts.iter().map(|&c| c as f64 / tf).collect();
            let disconnected_at = grid
                .iter()
                .zip(&disconnect_prob)
                .find(|(_, &p)| p >= 0.5)
                .map(|(&f, _)| f);
            Ok(RemovalTrace {
                strategy,
                n,
                fractions: grid.to_vec(),
                avg_path_lengths: path_sums.iter().map(|s| s / tf).collect(),
                stderr,
                giant_share: share_sums.iter().map(|s| s / tf).collect(),
                disconnect_prob,
                keep_prob: keep_counts.iter().map(|&c| c as f64 / tf).collect(),
                disconnected_at,
                removal_order: Vec::new(),
                trials,
                seed,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalThreshold {
    pub dapp: String,
    /// absent when the targeted trace never disconnects on the grid
    pub threshold_fraction: Option<f64>,
    /// nodes removed up to and including the disconnection point
    pub removed_nodes: Vec<String>,
}

/// Threshold = disconnection fraction of the betweenness-static trace.
pub fn critical_threshold(
    dapp: &str,
    traces: &[RemovalTrace],
) -> Result<CriticalThreshold, ResilienceError> {
    let trace = traces
        .iter()
        .find(|t| t.strategy == RemovalStrategy::BetweennessStatic)
        .ok_or(ResilienceError::MissingTargetedTrace)?;
    let removed_nodes = match trace.disconnected_at {
        Some(f) => {
            let k = removed_count(f, trace.n);
            trace.removal_order[..k.min(trace.removal_order.len())].to_vec()
        }
        None => Vec::new(),
    };
    Ok(CriticalThreshold {
        dapp: dapp.to_string(),
        threshold_fraction: trace.disconnected_at,
        removed_nodes,
    })
}

/// The `resilience` section embedded in a network's metrics report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResilienceSection {
    pub traces: Vec<RemovalTrace>,
    pub critical_threshold: Option<CriticalThreshold>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two cliques of `a` and `b` nodes, attachment nodes joined through one
    /// bridge node. Node count a + b + 1; the bridge label sorts last.
    pub fn barbell(a: usize, b: usize) -> WeightedDigraph {
        let mut g = WeightedDigraph::new();
        for i in 0..a {
            g.ensure_node(&format!("a{i:03}"));
        }
        for i in 0..b {
            g.ensure_node(&format!("b{i:03}"));
        }
        let bridge = g.ensure_node("zbridge");
        for i in 0..a {
            for j in (i + 1)..a {
                g.add_edge_weight(i, j, 1.0);
            }
        }
        for i in 0..b {
            for j in (i + 1)..b {
                g.add_edge_weight(a + i, a + j, 1.0);
            }
        }
        g.add_edge_weight(0, bridge, 1.0);
        g.add_edge_weight(bridge, a, 1.0);
        g
    }

    fn complete(n: usize) -> WeightedDigraph {
        let mut g = WeightedDigraph::new();
        for i in 0..n {
            g.ensure_node(&format!("n{i:03}"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge_weight(i, j, 1.0);
            }
        }
        g
    }

    #[test]
    fn barbell_disconnects_at_first_effective_point() {
        let g = barbell(10, 10);
        let grid = vec![0.0, 0.05, 0.10, 0.15, 0.20];
        let trace = removal_experiment(
            &g,
            RemovalStrategy::BetweennessStatic,
            &grid,
            1,
            0,
            &DisconnectionRule::default(),
        )
        .unwrap();
        // bridge has the highest betweenness (10*10 pairs beats the 9*11 of
        // the attachment nodes) and is removed by the first point with
        // floor(f*21) >= 1
        assert_eq!(trace.removal_order[0], "zbridge");
        assert_eq!(trace.disconnected_at, Some(0.05));
        let ct = critical_threshold("toy", std::slice::from_ref(&trace)).unwrap();
        assert_eq!(ct.threshold_fraction, Some(0.05));
        assert_eq!(ct.removed_nodes, vec!["zbridge".to_string()]);
    }

    #[test]
    fn complete_graph_never_disconnects() {
        let g = complete(60);
        let trace = removal_experiment(
            &g,
            RemovalStrategy::BetweennessStatic,
            &default_grid(),
            1,
            0,
            &DisconnectionRule::default(),
        )
        .unwrap();
        assert_eq!(trace.disconnected_at, None);
        assert!(trace.avg_path_lengths.iter().all(|&p| p == 1.0));
        let ct = critical_threshold("k60", std::slice::from_ref(&trace)).unwrap();
        assert_eq!(ct.threshold_fraction, None);
        assert!(ct.removed_nodes.is_empty());
    }

    #[test]
    fn star_hub_removal_disconnects_immediately() {
        let mut g = WeightedDigraph::new();
        let hub = g.ensure_node("hub");
        for i in 0..100 {
            let leaf = g.ensure_node(&format!("leaf{i:03}"));
            g.add_edge_weight(hub, leaf, 1.0);
        }
        let trace = removal_experiment(
            &g,
            RemovalStrategy::DegreeStatic,
            &default_grid(),
            1,
            0,
            &DisconnectionRule::default(),
        )
        .unwrap();
        assert_eq!(trace.removal_order[0], "hub");
        // first nonzero grid point removes floor(0.01 * 101) = 1 node
        assert_eq!(trace.disconnected_at, Some(0.01));
        // survivors are all singletons: avg path 0
        assert_eq!(trace.avg_path_lengths[1], 0.0);
    }

    #[test]
    fn grid_validation() {
        let g = complete(10);
        let rule = DisconnectionRule::default();
        for bad in [
            vec![0.0, 0.3],
            vec![-0.1, 0.1],
            vec![0.1, 0.1],
            vec![0.2, 0.1],
            Vec::new(),
        ] {
            assert!(
                removal_experiment(&g, RemovalStrategy::Random, &bad, 5, 0, &rule).is_err(),
                "grid {bad:?} accepted"
            );
        }
    }

    #[test]
    fn disconnected_component_is_rejected() {
        let mut g = WeightedDigraph::new();
        g.ensure_node("a");
        g.ensure_node("b");
        g.ensure_node("c");
        g.add_edge_weight(0, 1, 1.0);
        let err = removal_experiment(
            &g,
            RemovalStrategy::Random,
            &default_grid(),
            5,
            0,
            &DisconnectionRule::default(),
        );
        assert!(matches!(err, Err(ResilienceError::Disconnected)));
    }

    #[test]
    fn removal_counts_are_monotone_and_prefix_stable() {
        let g = barbell(10, 10);
        let grid = default_grid();
        let rule = DisconnectionRule::default();
        let full = removal_experiment(&g, RemovalStrategy::BetweennessStatic, &grid, 1, 0, &rule)
            .unwrap();
        let partial = removal_experiment(
            &g,
            RemovalStrategy::BetweennessStatic,
            &grid[..10],
            1,
            0,
            &rule,
        )
        .unwrap();
        // static ranking is a pure function of the component
        assert_eq!(full.removal_order, partial.removal_order);
        let mut prev = 0usize;
        for &f in &grid {
            let k = super::removed_count(f, full.n);
            assert!(k >= prev);
            prev = k;
        }
    }

    #[test]
    fn self_loops_do_not_affect_traces() {
        let plain = complete(20);
        let mut loopy = complete(20);
        for i in 0..20 {
            loopy.add_edge_weight(i, i, 9.0);
        }
        let rule = DisconnectionRule::default();
        let a = removal_experiment(&plain, RemovalStrategy::BetweennessStatic, &default_grid(), 1, 7, &rule).unwrap();
        let b = removal_experiment(&loopy, RemovalStrategy::BetweennessStatic, &default_grid(), 1, 7, &rule).unwrap();
        assert_eq!(a.avg_path_lengths, b.avg_path_lengths);
        assert_eq!(a.disconnected_at, b.disconnected_at);
    }

    #[test]
    fn random_matches_targeted_on_vertex_transitive_cycle() {
        // on a cycle every single-node removal is equivalent, so the random
        // estimator must approach the targeted trace
        let mut g = WeightedDigraph::new();
        let n = 50;
        for i in 0..n {
            g.ensure_node(&format!("c{i:02}"));
        }
        for i in 0..n {
            g.add_edge_weight(i, (i + 1) % n, 1.0);
        }
        let rule = DisconnectionRule::default();
        let grid = vec![0.0, 0.02]; // removes exactly one node
        let targeted =
            removal_experiment(&g, RemovalStrategy::DegreeStatic, &grid, 1, 0, &rule).unwrap();
        let random =
            removal_experiment(&g, RemovalStrategy::Random, &grid, 200, 0, &rule).unwrap();
        assert!((targeted.avg_path_lengths[0] - random.avg_path_lengths[0]).abs() < 1e-9);
        let t = targeted.avg_path_lengths[1];
        let r = random.avg_path_lengths[1];
        assert!((t - r).abs() <= 0.10 * t, "targeted {t} vs random {r}");
    }

    #[test]
    fn random_trace_is_deterministic_under_seed() {
        let g = barbell(10, 10);
        let rule = DisconnectionRule::default();
        let a = removal_experiment(&g, RemovalStrategy::Random, &default_grid(), 20, 3, &rule).unwrap();
        let b = removal_experiment(&g, RemovalStrategy::Random, &default_grid(), 20, 3, &rule).unwrap();
        assert_eq!(a.avg_path_lengths, b.avg_path_lengths);
        assert_eq!(a.keep_prob, b.keep_prob);
    }

    #[test]
    fn missing_targeted_trace_is_an_error() {
        let g = complete(10);
        let trace = removal_experiment(
            &g,
            RemovalStrategy::Random,
            &vec![0.0, 0.1],
            5,
            0,
            &DisconnectionRule::default(),
        )
        .unwrap();
        assert!(critical_threshold("x", &[trace]).is_err());
    }
}

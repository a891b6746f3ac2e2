//! Turn call-record tables into networks: the weighted directed contract
//! graph, the function-contract bipartite count matrix, and the one-mode
//! projection onto the function layer.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::CallRecord;
use crate::graph::WeightedDigraph;

#[derive(Debug, Error)]
pub enum NetbuildError {
    #[error("contract count must be at least 1")]
    NoContracts,
}

pub const SENTINEL_LABEL: &str = "None";

/// Separator used to qualify a function by its source contract.
pub const FN_QUALIFIER: &str = "::";

pub fn qualify(contract: &str, function: &str) -> String {
    format!("{contract}{FN_QUALIFIER}{function}")
}

/// Contract interaction network: edge weight = number of records with that
/// (source, target) pair. Sentinel targets become a `None` node when
/// `include_sentinel` is set; contracts declared but never observed in a
/// record are added as isolated nodes.
pub fn build_contract_graph(
    records: &[CallRecord],
    declared_contracts: &[String],
    include_sentinel: bool,
) -> WeightedDigraph {
    let mut g = WeightedDigraph::new();
    for r in records {
        let target = match &r.target_contract {
            Some(t) => t.as_str(),
            None if include_sentinel => SENTINEL_LABEL,
            None => continue,
        };
        let s = g.ensure_node(&r.source_contract);
        let t = g.ensure_node(target);
        g.add_edge_weight(s, t, 1.0);
    }
    for c in declared_contracts {
        g.ensure_node(c);
    }
    g
}

/// Nonnegative integer count matrix over (qualified function, contract)
/// pairs. Row sums are the per-function outgoing call mass.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BipartiteCallMatrix {
    functions: Vec<String>,
    contracts: Vec<String>,
    fn_index: HashMap<String, usize>,
    c_index: HashMap<String, usize>,
    counts: BTreeMap<(usize, usize), u64>,
}

impl BipartiteCallMatrix {
    pub fn functions(&self) -> &[String] {
        &self.functions
    }

    pub fn contracts(&self) -> &[String] {
        &self.contracts
    }

    pub fn count(&self, function: &str, contract: &str) -> u64 {
        match (self.fn_index.get(function), self.c_index.get(contract)) {
            (Some(&f), Some(&c)) => self.counts.get(&(f, c)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().map(|(&(f, c), &n)| (f, c, n))
    }

    /// s_f: total outgoing count of function row `f`.
    pub fn row_sum(&self, f: usize) -> u64 {
        self.counts
            .range((f, 0)..(f + 1, 0))
            .map(|(_, &n)| n)
            .sum()
    }

    fn insert(&mut self, function: &str, contract: &str, n: u64) {
        let fi = match self.fn_index.get(function) {
            Some(&i) => i,
            None => {
                let i = self.functions.len();
                self.functions.push(function.to_string());
                self.fn_index.insert(function.to_string(), i);
                i
            }
        };
        let ci = match self.c_index.get(contract) {
            Some(&i) => i,
            None => {
                let i = self.contracts.len();
                self.contracts.push(contract.to_string());
                self.c_index.insert(contract.to_string(), i);
                i
            }
        };
        *self.counts.entry((fi, ci)).or_insert(0) += n;
    }
}

/// Build the bipartite matrix; rows are qualified source functions, columns
/// target contracts. Occurrences are not deduplicated.
pub fn build_bipartite(records: &[CallRecord], include_sentinel: bool) -> BipartiteCallMatrix {
    let mut m = BipartiteCallMatrix::default();
    for r in records {
        let target = match &r.target_contract {
            Some(t) => t.as_str(),
            None if include_sentinel => SENTINEL_LABEL,
            None => continue,
        };
        let f = qualify(&r.source_contract, &r.source_function);
        m.insert(&f, target, 1);
    }
    m
}

/// One-mode projection onto the function layer.
///
/// Edge weight from f1 to f2 sums, over every contract c both call, the
/// probability of leaving f1 through c times the probability of arriving at
/// f2 from c:
///
/// ```text
/// rho(f1 -> f2) = sum_c  M[f1,c]/s_f1 * M[f2,c]/t_c
/// ```
///
/// with s_f the row sum and t_c the column sum. Rows of the result sum to 1;
/// self-edges are retained; zero entries are absent.
pub fn project_functions(m: &BipartiteCallMatrix) -> WeightedDigraph {
    let mut g = WeightedDigraph::new();
    for f in &m.functions {
        g.ensure_node(f);
    }
    let nf = m.functions.len();
    let mut row_sums = vec![0u64; nf];
    let mut columns: Vec<Vec<(usize, u64)>> = vec![Vec::new(); m.contracts.len()];
    for (f, c, n) in m.entries() {
        row_sums[f] += n;
        columns[c].push((f, n));
    }
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for col in &columns {
        let t_c: u64 = col.iter().map(|&(_, n)| n).sum();
        if t_c == 0 {
            continue;
        }
        debug_assert!(t_c > 0, "column with entries must have positive sum");
        for &(f1, n1) in col {
            let s_f1 = row_sums[f1];
            debug_assert!(s_f1 >= 1);
            let leave = n1 as f64 / s_f1 as f64;
            for &(f2, n2) in col {
                let arrive = n2 as f64 / t_c as f64;
                *weights.entry((f1, f2)).or_insert(0.0) += leave * arrive;
            }
        }
    }
    for ((f1, f2), w) in weights {
        if w > 0.0 {
            g.add_edge_weight(f1, f2, w);
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

impl std::fmt::Display for SizeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SizeClass::Small => "Small",
            SizeClass::Medium => "Medium",
            SizeClass::Large => "Large",
        };
        f.write_str(s)
    }
}

/// Size class from the contract count: 1-23 Small, 24-45 Medium, 46+ Large
/// (counts below the nominal Small lower bound clamp to Small).
pub fn classify_size(n_contracts: usize) -> Result<SizeClass, NetbuildError> {
    match n_contracts {
        0 => Err(NetbuildError::NoContracts),
        1..=23 => Ok(SizeClass::Small),
        24..=45 => Ok(SizeClass::Medium),
        _ => Ok(SizeClass::Large),
    }
}

/// Distinct qualified functions per distinct source contract.
pub fn function_contract_ratio(records: &[CallRecord]) -> Result<f64, NetbuildError> {
    let mut functions: Vec<(&str, &str)> = records
        .iter()
        .map(|r| (r.source_contract.as_str(), r.source_function.as_str()))
        .collect();
    functions.sort_unstable();
    functions.dedup();
    let mut contracts: Vec<&str> = records.iter().map(|r| r.source_contract.as_str()).collect();
    contracts.sort_unstable();
    contracts.dedup();
    if contracts.is_empty() {
        return Err(NetbuildError::NoContracts);
    }
    Ok(functions.len() as f64 / contracts.len() as f64)
}

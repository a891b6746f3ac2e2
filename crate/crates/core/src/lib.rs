//! dApp source-structure analysis.
//!
//! The pipeline this crate supports: extract call records from a Solidity
//! source tree, build the weighted contract network and the probabilistically
//! projected function network, filter the significant backbone, compute the
//! per-network metric battery, compare against randomized references, and run
//! targeted node-removal experiments.

pub mod backbone;
pub mod export;
pub mod extract;
pub mod graph;
pub mod metrics;
pub mod netbuild;
pub mod nullmodel;
pub mod resilience;
pub mod seed;

pub use extract::{CallRecord, ContractDecl, ContractKind, FunctionDecl, SourceUnit};
pub use graph::{NodeId, SimpleUgraph, UndirectedWeighted, WeightedDigraph};
pub use metrics::{MetricsReport, PowerLawFit};
pub use netbuild::{BipartiteCallMatrix, SizeClass};

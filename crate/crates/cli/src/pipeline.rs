//! Per-dApp stage execution and gating.
//!
//! Stages run in a fixed order (extract, build, filter, metrics, nullmodels,
//! resilience); each reads its inputs from the dApp's output directory, so a
//! later stage can run alone against pre-built files. When a requested
//! stage's input artifact is missing, the producing stage is enabled
//! automatically. The corpus-level report stage lives in [`crate::aggregate`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};

use dappnet_core::backbone::{filter_graph, BackboneResult};
use dappnet_core::export;
use dappnet_core::extract::{emit_call_table, extract_project, read_call_table, CallRecord};
use dappnet_core::graph::{SimpleUgraph, WeightedDigraph};
use dappnet_core::metrics::{compute_metrics, MetricsConfig, MetricsReport};
use dappnet_core::netbuild::{
    build_bipartite, build_contract_graph, classify_size, function_contract_ratio,
    project_functions, BipartiteCallMatrix, SizeClass,
};
use dappnet_core::nullmodel::{
    block_rewire_summary, small_world_comparison, NullModelsSection, RandomizationConfig,
};
use dappnet_core::resilience::{
    critical_threshold, removal_experiment, DisconnectionRule, RemovalStrategy, RemovalTrace,
    ResilienceSection,
};
use dappnet_core::seed::derive_seed;

use crate::config::{PipelineConfig, Stage};
use crate::manifest::DappManifest;

pub mod files {
    pub const CALLS: &str = "calls.csv";
    pub const CONTRACTS: &str = "contracts.csv";
    pub const FUNCTIONS: &str = "functions.csv";
    pub const CONTRACT_NODES: &str = "contract_nodes.csv";
    pub const CONTRACT_EDGES: &str = "contract_edges.csv";
    pub const CONTRACT_MATRIX: &str = "contract_matrix.csv";
    pub const FUNCTION_NODES: &str = "function_nodes.csv";
    pub const FUNCTION_EDGES: &str = "function_edges.csv";
    pub const FUNCTION_MATRIX: &str = "function_matrix.csv";
    pub const BIPARTITE_MATRIX: &str = "bipartite_matrix.csv";
    pub const BACKBONE_NODES: &str = "backbone_nodes.csv";
    pub const BACKBONE_EDGES: &str = "backbone_edges.csv";
    pub const BACKBONE_JSON: &str = "backbone.json";
    pub const REPORT: &str = "report.json";
    pub const CONTRACT_DEGREE_HIST: &str = "contract_degree_hist.csv";
    pub const FUNCTION_DEGREE_HIST: &str = "function_degree_hist.csv";
    pub const CLIQUE_HIST: &str = "clique_hist.csv";
    pub const RESILIENCE_TRACES: &str = "resilience_traces.csv";
    pub const CONTRACT_DOT: &str = "graph_contract.dot";
    pub const CONTRACT_GRAPHML: &str = "graph_contract.graphml";
    pub const FUNCTION_DOT: &str = "graph_function.dot";
    pub const FUNCTION_GRAPHML: &str = "graph_function.graphml";
}

pub const REPORT_SCHEMA_VERSION: &str = "v1";

/// The complete per-dApp results bundle, one JSON document per dApp.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DappReport {
    pub schema_version: String,
    pub name: String,
    pub blockchain: String,
    pub category: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_contracts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_functions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_call_records: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_class: Option<SizeClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_contract_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backbone: Option<BackboneResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contract_network: Option<MetricsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_network: Option<MetricsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_backbone: Option<MetricsReport>,
}

impl DappReport {
    fn shell(manifest: &DappManifest) -> DappReport {
        DappReport {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            name: manifest.name.clone(),
            blockchain: manifest.blockchain.clone(),
            category: manifest.category.clone(),
            notes: manifest.notes.clone(),
            n_contracts: None,
            n_functions: None,
            n_call_records: None,
            size_class: None,
            function_contract_ratio: None,
            backbone: None,
            contract_network: None,
            function_network: None,
            function_backbone: None,
        }
    }
}

pub struct DappContext<'a> {
    pub manifest: &'a DappManifest,
    pub dir: PathBuf,
    pub cfg: &'a PipelineConfig,
    pub notices: Vec<String>,
}

impl<'a> DappContext<'a> {
    pub fn new(manifest: &'a DappManifest, cfg: &'a PipelineConfig) -> DappContext<'a> {
        DappContext {
            manifest,
            dir: cfg.output_dir.join(manifest.dir_name()),
            cfg,
            notices: Vec::new(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn has(&self, name: &str) -> bool {
        self.path(name).is_file()
    }

    fn notice(&mut self, msg: impl Into<String>) {
        self.notices.push(format!("[{}] {}", self.manifest.name, msg.into()));
    }

    fn write(&self, name: &str, content: &str) -> Result<()> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    fn read(&self, name: &str) -> Result<String> {
        fs::read_to_string(self.path(name))
            .with_context(|| format!("reading {}", self.path(name).display()))
    }

    pub fn load_report(&self) -> Result<DappReport> {
        if self.has(files::REPORT) {
            Ok(serde_json::from_str(&self.read(files::REPORT)?)?)
        } else {
            Ok(DappReport::shell(self.manifest))
        }
    }

    fn save_report(&self, report: &DappReport) -> Result<()> {
        let mut text = serde_json::to_string_pretty(report)?;
        text.push('\n');
        self.write(files::REPORT, &text)
    }

    fn load_records(&self) -> Result<Vec<CallRecord>> {
        Ok(read_call_table(&self.read(files::CALLS)?)?)
    }

    fn load_graph(&self, nodes: &str, edges: &str) -> Result<WeightedDigraph> {
        Ok(export::from_csvs(&self.read(nodes)?, &self.read(edges)?)?)
    }

    fn seed_for(&self, labels: &[&str]) -> u64 {
        let mut all = vec![self.manifest.name.as_str()];
        all.extend_from_slice(labels);
        derive_seed(self.cfg.seed, &all)
    }
}

/// Which stages must actually run so that everything in `requested` can.
pub fn resolve_stages(ctx: &DappContext, requested: &BTreeSet<Stage>) -> BTreeSet<Stage> {
    let mut effective: BTreeSet<Stage> = requested
        .iter()
        .copied()
        .filter(|s| *s != Stage::Report)
        .collect();
    if requested.contains(&Stage::Report) && !ctx.has(files::REPORT) {
        effective.insert(Stage::Metrics);
    }
    loop {
        let mut grew = false;
        let mut add = |set: &mut BTreeSet<Stage>, stage: Stage| {
            if set.insert(stage) {
                grew = true;
            }
        };
        let graphs_present = ctx.has(files::FUNCTION_EDGES)
            && ctx.has(files::FUNCTION_NODES)
            && ctx.has(files::CONTRACT_EDGES)
            && ctx.has(files::CONTRACT_NODES);
        let needs_graphs = [Stage::Filter, Stage::Metrics, Stage::Nullmodels, Stage::Resilience]
            .iter()
            .any(|s| effective.contains(s));
        if needs_graphs && !graphs_present && !effective.contains(&Stage::Build) {
            add(&mut effective, Stage::Build);
        }
        if effective.contains(&Stage::Build)
            && !ctx.has(files::CALLS)
            && !effective.contains(&Stage::Extract)
        {
            add(&mut effective, Stage::Extract);
        }
        let needs_report_shell =
            effective.contains(&Stage::Nullmodels) || effective.contains(&Stage::Resilience);
        let report_has_function_network = ctx
            .load_report()
            .ok()
            .map(|r| r.function_network.is_some())
            .unwrap_or(false);
        if needs_report_shell
            && !report_has_function_network
            && !effective.contains(&Stage::Metrics)
        {
            add(&mut effective, Stage::Metrics);
        }
        if !grew {
            break;
        }
    }
    effective
}

/// Run every applicable stage for one dApp. Returns the stages that ran.
pub fn run_dapp(ctx: &mut DappContext, requested: &BTreeSet<Stage>) -> Result<Vec<Stage>> {
    fs::create_dir_all(&ctx.dir)?;
    let effective = resolve_stages(ctx, requested);
    let mut ran = Vec::new();
    for stage in Stage::ALL {
        if !effective.contains(&stage) || stage == Stage::Report {
            continue;
        }
        match stage {
            Stage::Extract => stage_extract(ctx)?,
            Stage::Build => stage_build(ctx)?,
            Stage::Filter => stage_filter(ctx)?,
            Stage::Metrics => stage_metrics(ctx)?,
            Stage::Nullmodels => stage_nullmodels(ctx)?,
            Stage::Resilience => stage_resilience(ctx)?,
            Stage::Report => unreachable!(),
        }
        ran.push(stage);
    }
    Ok(ran)
}

fn stage_extract(ctx: &mut DappContext) -> Result<()> {
    let project = extract_project(&ctx.manifest.source_root)?;
    for w in &project.warnings {
        ctx.notice(w.clone());
    }
    ctx.write(files::CALLS, &emit_call_table(&project.records))?;

    let mut contracts = String::from("name,kind,file\n");
    for c in &project.contracts {
        let _ = writeln!(contracts, "{},{},{}", c.name, c.kind, c.file);
    }
    ctx.write(files::CONTRACTS, &contracts)?;

    let mut functions = String::from("contract,name,visibility\n");
    for f in &project.functions {
        let _ = writeln!(functions, "{},{},{}", f.contract, f.name, f.visibility);
    }
    ctx.write(files::FUNCTIONS, &functions)?;
    Ok(())
}

fn read_declared_contracts(ctx: &DappContext) -> Vec<String> {
    match ctx.read(files::CONTRACTS) {
        Ok(text) => text
            .lines()
            .skip(1)
            .filter(|l| !l.is_empty())
            .filter_map(|l| l.split(',').next().map(str::to_string))
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// Bare function name when unique within the matrix, qualified otherwise
/// (reports display bare names like the published tables).
fn display_labels(qualified: &[String]) -> Vec<String> {
    let mut bare_counts: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
    let bare_of = |q: &str| q.rsplit_once("::").map(|(_, b)| b.to_string()).unwrap_or_else(|| q.to_string());
    let bares: Vec<String> = qualified.iter().map(|q| bare_of(q)).collect();
    for b in &bares {
        *bare_counts.entry(b.as_str()).or_insert(0) += 1;
    }
    qualified
        .iter()
        .zip(&bares)
        .map(|(q, b)| if bare_counts[b.as_str()] == 1 { b.clone() } else { q.clone() })
        .collect()
}

fn bipartite_matrix_csv(m: &BipartiteCallMatrix) -> String {
    let row_labels = display_labels(m.functions());
    let mut rows: Vec<(usize, &String)> = row_labels.iter().enumerate().collect();
    rows.sort_by(|a, b| a.1.cmp(b.1));
    let mut cols: Vec<(usize, &String)> = m.contracts().iter().enumerate().collect();
    cols.sort_by(|a, b| a.1.cmp(b.1));
    let mut out = String::new();
    for (_, c) in &cols {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (fi, flabel) in &rows {
        out.push_str(flabel);
        for (ci, _) in &cols {
            let _ = write!(out, ",{}", m.count(&m.functions()[*fi], &m.contracts()[*ci]));
        }
        out.push('\n');
    }
    out
}

/// Copy of `g` with function labels replaced by their display form.
fn relabel_for_display(g: &WeightedDigraph) -> WeightedDigraph {
    let display = display_labels(g.labels());
    let mut out = WeightedDigraph::new();
    for label in &display {
        out.ensure_node(label);
    }
    for (s, t, w) in g.edges() {
        let ns = out.node_id(&display[s]).expect("label");
        let nt = out.node_id(&display[t]).expect("label");
        out.add_edge_weight(ns, nt, w);
    }
    out
}

fn stage_build(ctx: &mut DappContext) -> Result<()> {
    let records = ctx.load_records()?;
    let declared = read_declared_contracts(ctx);
    let include_sentinel = ctx.cfg.include_sentinel;

    let contract_graph = build_contract_graph(&records, &declared, include_sentinel);
    let bipartite = build_bipartite(&records, include_sentinel);
    let function_graph = project_functions(&bipartite);

    ctx.write(files::CONTRACT_NODES, &export::to_node_csv(&contract_graph))?;
    ctx.write(files::CONTRACT_EDGES, &export::to_edge_csv(&contract_graph))?;
    ctx.write(files::CONTRACT_MATRIX, &export::to_matrix_csv(&contract_graph, None))?;
    ctx.write(files::FUNCTION_NODES, &export::to_node_csv(&function_graph))?;
    ctx.write(files::FUNCTION_EDGES, &export::to_edge_csv(&function_graph))?;
    ctx.write(
        files::FUNCTION_MATRIX,
        &export::to_matrix_csv(&relabel_for_display(&function_graph), Some(3)),
    )?;
    ctx.write(files::BIPARTITE_MATRIX, &bipartite_matrix_csv(&bipartite))?;

    let mut report = ctx.load_report()?;
    report.n_call_records = Some(records.len());
    let n_contracts = if declared.is_empty() {
        let mut sources: Vec<&str> = records.iter().map(|r| r.source_contract.as_str()).collect();
        sources.sort_unstable();
        sources.dedup();
        sources.len()
    } else {
        declared.len()
    };
    report.n_contracts = Some(n_contracts);
    report.n_functions = Some(bipartite.functions().len());
    match classify_size(n_contracts) {
        Ok(class) => report.size_class = Some(class),
        Err(e) => ctx.notice(format!("size class unavailable: {e}")),
    }
    match function_contract_ratio(&records) {
        Ok(r) => report.function_contract_ratio = Some(r),
        Err(e) => ctx.notice(format!("function/contract ratio unavailable: {e}")),
    }
    ctx.save_report(&report)
}

fn stage_filter(ctx: &mut DappContext) -> Result<()> {
    let function_graph = ctx.load_graph(files::FUNCTION_NODES, files::FUNCTION_EDGES)?;
    let result = filter_graph(&function_graph, ctx.cfg.alpha_threshold, ctx.cfg.filter_mode)?;
    ctx.write(files::BACKBONE_NODES, &export::to_node_csv(&result.filtered))?;
    ctx.write(files::BACKBONE_EDGES, &export::to_edge_csv(&result.filtered))?;
    let mut json = serde_json::to_string_pretty(&result)?;
    json.push('\n');
    ctx.write(files::BACKBONE_JSON, &json)?;
    let mut report = ctx.load_report()?;
    report.backbone = Some(result);
    ctx.save_report(&report)
}

fn histogram_csv(hist: &std::collections::BTreeMap<usize, usize>, key: &str) -> String {
    let mut out = format!("{key},count\n");
    for (k, v) in hist {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

fn node_attrs_of(report: &MetricsReport) -> std::collections::BTreeMap<String, export::NodeAttrs> {
    report
        .node_scores
        .iter()
        .map(|(label, score)| {
            (
                label.clone(),
                export::NodeAttrs {
                    betweenness: score.betweenness,
                    clustering: score.clustering,
                    degree: score.degree,
                    community: report.communities.get(label).copied().unwrap_or(0),
                },
            )
        })
        .collect()
}

fn stage_metrics(ctx: &mut DappContext) -> Result<()> {
    let contract_graph = ctx.load_graph(files::CONTRACT_NODES, files::CONTRACT_EDGES)?;
    let function_graph = ctx.load_graph(files::FUNCTION_NODES, files::FUNCTION_EDGES)?;

    let contract_metrics = compute_metrics(
        &contract_graph,
        &MetricsConfig {
            louvain_seed: ctx.seed_for(&["louvain", "contract"]),
            clique_budget: ctx.cfg.clique_budget,
            fit_powerlaw: false,
        },
    )?;
    let function_metrics = compute_metrics(
        &function_graph,
        &MetricsConfig {
            louvain_seed: ctx.seed_for(&["louvain", "function"]),
            clique_budget: ctx.cfg.clique_budget,
            fit_powerlaw: true,
        },
    )?;
    if function_metrics.powerlaw.is_none() && function_metrics.largest_component_size > 0 {
        ctx.notice("power-law fit skipped (largest component below sample minimum)");
    }

    let backbone_metrics = if ctx.has(files::BACKBONE_NODES) && ctx.has(files::BACKBONE_EDGES) {
        let backbone_graph = ctx.load_graph(files::BACKBONE_NODES, files::BACKBONE_EDGES)?;
        Some(compute_metrics(
            &backbone_graph,
            &MetricsConfig {
                louvain_seed: ctx.seed_for(&["louvain", "backbone"]),
                clique_budget: ctx.cfg.clique_budget,
                fit_powerlaw: false,
            },
        )?)
    } else {
        None
    };

    ctx.write(
        files::CONTRACT_DEGREE_HIST,
        &histogram_csv(&contract_metrics.degree_histogram, "degree"),
    )?;
    ctx.write(
        files::FUNCTION_DEGREE_HIST,
        &histogram_csv(&function_metrics.degree_histogram, "degree"),
    )?;
    ctx.write(
        files::CLIQUE_HIST,
        &histogram_csv(&function_metrics.clique_size_histogram, "size"),
    )?;

    let cattrs = node_attrs_of(&contract_metrics);
    ctx.write(files::CONTRACT_DOT, &export::to_dot(&contract_graph, Some(&cattrs)))?;
    ctx.write(files::CONTRACT_GRAPHML, &export::to_graphml(&contract_graph, Some(&cattrs)))?;
    let fattrs = node_attrs_of(&function_metrics);
    ctx.write(files::FUNCTION_DOT, &export::to_dot(&function_graph, Some(&fattrs)))?;
    ctx.write(files::FUNCTION_GRAPHML, &export::to_graphml(&function_graph, Some(&fattrs)))?;

    let mut report = ctx.load_report()?;
    // carry null-model and resilience sections across a metrics re-run
    let mut function_metrics = function_metrics;
    if let Some(prev) = &report.function_network {
        if function_metrics.null_models.is_none() {
            function_metrics.null_models = prev.null_models.clone();
        }
        if function_metrics.resilience.is_none() {
            function_metrics.resilience = prev.resilience.clone();
        }
    }
    report.contract_network = Some(contract_metrics);
    report.function_network = Some(function_metrics);
    report.function_backbone = backbone_metrics;
    ctx.save_report(&report)
}

fn stage_nullmodels(ctx: &mut DappContext) -> Result<()> {
    let function_graph = ctx.load_graph(files::FUNCTION_NODES, files::FUNCTION_EDGES)?;
    let rand_cfg = RandomizationConfig {
        seed: ctx.seed_for(&["nullmodel"]),
        n_realizations: ctx.cfg.realizations,
        preserve_degree: ctx.cfg.preserve_degree,
        partition_source: ctx.cfg.partition_source,
    };
    let small_world = small_world_comparison(&function_graph, &rand_cfg, ctx.cfg.min_component)?;
    let skipped_reason = if small_world.is_none() {
        let msg = format!(
            "small-world comparison skipped: largest component has <= {} nodes",
            ctx.cfg.min_component
        );
        ctx.notice(msg.clone());
        Some(msg)
    } else {
        None
    };
    let block_rewire = block_rewire_summary(&function_graph, &rand_cfg)?;

    let mut report = ctx.load_report()?;
    let function_network = report
        .function_network
        .as_mut()
        .ok_or_else(|| anyhow!("metrics must run before null models"))?;
    function_network.null_models = Some(NullModelsSection {
        small_world,
        block_rewire: Some(block_rewire),
        skipped_reason,
    });
    ctx.save_report(&report)
}

fn traces_csv(traces: &[RemovalTrace]) -> String {
    let mut out = String::from("fraction,value,strategy,trial_mean,stderr\n");
    for t in traces {
        for (i, &f) in t.fractions.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                f, t.avg_path_lengths[i], t.strategy, t.avg_path_lengths[i], t.stderr[i]
            );
        }
    }
    out
}

fn stage_resilience(ctx: &mut DappContext) -> Result<()> {
    let function_graph = ctx.load_graph(files::FUNCTION_NODES, files::FUNCTION_EDGES)?;
    let simple = SimpleUgraph::from_digraph(&function_graph);
    let comps = simple.components();
    let section = match comps.first() {
        Some(comp) if comp.len() > ctx.cfg.min_component => {
            let component = function_graph.induced_subgraph(comp);
            let grid = ctx.cfg.removal_grid();
            let rule = DisconnectionRule {
                giant_fraction: ctx.cfg.giant_fraction,
                min_secondary: ctx.cfg.min_secondary,
            };
            let mut traces = Vec::new();
            for strategy in [
                RemovalStrategy::BetweennessStatic,
                RemovalStrategy::DegreeStatic,
                RemovalStrategy::Random,
            ] {
                traces.push(removal_experiment(
                    &component,
                    strategy,
                    &grid,
                    ctx.cfg.trials,
                    ctx.seed_for(&["resilience", &strategy.to_string()]),
                    &rule,
                )?);
            }
            ctx.write(files::RESILIENCE_TRACES, &traces_csv(&traces))?;
            let threshold = critical_threshold(&ctx.manifest.name, &traces)?;
            ResilienceSection {
                traces,
                critical_threshold: Some(threshold),
                skipped_reason: None,
            }
        }
        _ => {
            let msg = format!(
                "removal experiments skipped: largest component has <= {} nodes",
                ctx.cfg.min_component
            );
            ctx.notice(msg.clone());
            ResilienceSection {
                traces: Vec::new(),
                critical_threshold: None,
                skipped_reason: Some(msg),
            }
        }
    };
    let mut report = ctx.load_report()?;
    let function_network = report
        .function_network
        .as_mut()
        .ok_or_else(|| anyhow!("metrics must run before resilience"))?;
    function_network.resilience = Some(section);
    ctx.save_report(&report)
}

/// Outcome of one dApp's stage run.
#[derive(Debug)]
pub enum DappOutcome {
    Completed { ran: Vec<Stage> },
    Failed { message: String },
}

pub struct PipelineSummary {
    pub outcomes: Vec<(String, DappOutcome)>,
    pub notices: Vec<String>,
}

impl PipelineSummary {
    pub fn all_failed(&self) -> bool {
        !self.outcomes.is_empty()
            && self
                .outcomes
                .iter()
                .all(|(_, o)| matches!(o, DappOutcome::Failed { .. }))
    }
}

/// Run the per-dApp stages for the whole corpus, then the corpus report if
/// requested. Failing dApps are reported and skipped.
pub fn run_pipeline(dapps: &[DappManifest], cfg: &PipelineConfig) -> Result<PipelineSummary> {
    cfg.validate()?;
    if dapps.is_empty() {
        return Err(anyhow!("manifest lists no dApps"));
    }
    fs::create_dir_all(&cfg.output_dir)?;

    let run_one = |manifest: &DappManifest| -> (String, DappOutcome, Vec<String>) {
        let mut ctx = DappContext::new(manifest, cfg);
        match run_dapp(&mut ctx, &cfg.stages) {
            Ok(ran) => (manifest.name.clone(), DappOutcome::Completed { ran }, ctx.notices),
            Err(e) => {
                let message = format!("{e:#}");
                let mut notices = ctx.notices;
                notices.push(format!("[{}] failed: {message}", manifest.name));
                (manifest.name.clone(), DappOutcome::Failed { message }, notices)
            }
        }
    };

    let results: Vec<(String, DappOutcome, Vec<String>)> = if cfg.jobs == 1 || dapps.len() == 1 {
        dapps.iter().map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .context("building worker pool")?;
        pool.install(|| {
            use rayon::prelude::*;
            dapps.par_iter().map(run_one).collect()
        })
    };

    let mut outcomes = Vec::new();
    let mut notices = Vec::new();
    for (name, outcome, mut dapp_notices) in results {
        notices.append(&mut dapp_notices);
        outcomes.push((name, outcome));
    }

    if cfg.stages.contains(&Stage::Report) {
        let mut report_notices = crate::aggregate::corpus_report(dapps, cfg)?;
        notices.append(&mut report_notices);
    }

    Ok(PipelineSummary { outcomes, notices })
}

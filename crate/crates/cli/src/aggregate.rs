//! Corpus-level reporting: aggregate tables over every dApp's report, the
//! pooled tail fit, the corpus JSON summary, and all charts (per-dApp and
//! corpus). Aggregation iterates dApps sorted by name, so results are
//! invariant to manifest order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use dappnet_core::metrics::{fit_powerlaw, PowerLawFit};
use dappnet_core::netbuild::SizeClass;

use crate::charts;
use crate::config::PipelineConfig;
use crate::manifest::DappManifest;
use crate::pipeline::{files, DappReport};

pub const CORPUS_DIR: &str = "corpus";

#[derive(Debug, Serialize, Deserialize)]
pub struct DappSummaryRow {
    pub name: String,
    pub blockchain: String,
    pub category: String,
    pub n_contracts: Option<usize>,
    pub n_functions: Option<usize>,
    pub size_class: Option<SizeClass>,
    pub function_contract_ratio: Option<f64>,
    pub backbone_retention_nodes: Option<f64>,
    pub critical_threshold: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CorpusReport {
    pub schema_version: String,
    /// sole timestamp in the artifact tree; everything else is a pure
    /// function of inputs and the root seed
    pub generated_at_unix: u64,
    pub n_dapps: usize,
    pub size_class_counts: BTreeMap<String, usize>,
    pub function_contract_ratio_mean: Option<f64>,
    pub function_contract_ratio_std: Option<f64>,
    pub contract_modularity_mean: Option<f64>,
    pub function_modularity_mean: Option<f64>,
    pub backbone_retention_nodes_mean: Option<f64>,
    pub pooled_function_powerlaw: Option<PowerLawFit>,
    pub dapps: Vec<DappSummaryRow>,
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

fn sample_std(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    Some(var.sqrt())
}

/// Build the corpus tables, JSON, and all charts. Returns notices.
pub fn corpus_report(dapps: &[DappManifest], cfg: &PipelineConfig) -> Result<Vec<String>> {
    let mut notices = Vec::new();
    let corpus_dir = cfg.output_dir.join(CORPUS_DIR);
    fs::create_dir_all(corpus_dir.join("charts"))?;

    // load per-dApp reports, sorted by name for permutation invariance
    let mut sorted: Vec<&DappManifest> = dapps.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let mut loaded: Vec<(&DappManifest, DappReport)> = Vec::new();
    for m in sorted {
        let path = cfg.output_dir.join(m.dir_name()).join(files::REPORT);
        match fs::read_to_string(&path) {
            Ok(text) => match serde_json::from_str::<DappReport>(&text) {
                Ok(report) => loaded.push((m, report)),
                Err(e) => notices.push(format!("[{}] unreadable report: {e}", m.name)),
            },
            Err(_) => notices.push(format!("[{}] no report; excluded from corpus tables", m.name)),
        }
    }
    if loaded.is_empty() {
        notices.push("corpus report: no dApp reports available".to_string());
    }

    // per-dApp charts
    for (m, report) in &loaded {
        let chart_dir = cfg.output_dir.join(m.dir_name()).join("charts");
        fs::create_dir_all(&chart_dir)?;
        let mut emitted = 0usize;
        let mut write_chart = |name: &str, svg: String| -> Result<()> {
            fs::write(chart_dir.join(name), svg)
                .with_context(|| format!("writing chart {name}"))?;
            Ok(())
        };
        if let Some(cn) = &report.contract_network {
            if !cn.degree_histogram.is_empty() {
                write_chart(
                    "contract_degree_pdf.svg",
                    charts::render_degree_pdf(
                        &cn.degree_histogram,
                        &format!("{} contract network degree PDF", m.name),
                    ),
                )?;
                emitted += 1;
            }
        }
        if let Some(fnet) = &report.function_network {
            if !fnet.degree_histogram.is_empty() {
                write_chart(
                    "function_degree_pdf.svg",
                    charts::render_degree_pdf(
                        &fnet.degree_histogram,
                        &format!("{} function network degree PDF", m.name),
                    ),
                )?;
                emitted += 1;
            }
            if !fnet.clique_size_histogram.is_empty() {
                write_chart(
                    "clique_sizes.svg",
                    charts::render_clique_bars(
                        &fnet.clique_size_histogram,
                        &format!("{} maximal clique sizes", m.name),
                    ),
                )?;
                emitted += 1;
            }
            if let Some(res) = &fnet.resilience {
                if !res.traces.is_empty() {
                    write_chart(
                        "resilience.svg",
                        charts::render_resilience(
                            &res.traces,
                            &format!("{} targeted vs random removal", m.name),
                        ),
                    )?;
                    emitted += 1;
                }
            }
        }
        if emitted == 0 {
            notices.push(format!("[{}] no chartable sections in report", m.name));
        }
    }

    // aggregate tables
    let mut size_classes_csv = String::from("dapp,blockchain,category,n_contracts,size_class\n");
    let mut ratio_csv = String::from("dapp,category,ratio\n");
    let mut density_csv = String::from("dapp,network,density\n");
    let mut selfloop_csv = String::from("dapp,network,selfloop_only_ratio\n");
    let mut thresholds_csv = String::from("dapp,threshold_fraction,removed_nodes\n");
    let mut contract_degree_pool: BTreeMap<usize, usize> = BTreeMap::new();
    let mut function_degree_pool: BTreeMap<usize, usize> = BTreeMap::new();
    let mut largest_component_pool: BTreeMap<usize, usize> = BTreeMap::new();
    let mut ratios = Vec::new();
    let mut contract_modularities = Vec::new();
    let mut function_modularities = Vec::new();
    let mut retentions = Vec::new();
    let mut size_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut densities = Vec::new();
    let mut selfloop_items: Vec<(String, f64)> = Vec::new();
    let mut smallworld_items: Vec<(String, f64, f64)> = Vec::new();

    for (m, report) in &loaded {
        let class_text = report.size_class.map(|c| c.to_string()).unwrap_or_default();
        if let Some(c) = report.size_class {
            *size_counts.entry(c.to_string()).or_insert(0) += 1;
        }
        let _ = writeln!(
            size_classes_csv,
            "{},{},{},{},{}",
            m.name,
            m.blockchain,
            m.category,
            report.n_contracts.map(|n| n.to_string()).unwrap_or_default(),
            class_text
        );
        if let Some(r) = report.function_contract_ratio {
            let _ = writeln!(ratio_csv, "{},{},{}", m.name, m.category, r);
            ratios.push(r);
        }
        if let Some(cn) = &report.contract_network {
            let _ = writeln!(density_csv, "{},contract,{}", m.name, cn.density);
            let _ = writeln!(selfloop_csv, "{},contract,{}", m.name, cn.selfloop_only_ratio);
            contract_modularities.push(cn.modularity);
            for (&d, &c) in &cn.degree_histogram {
                *contract_degree_pool.entry(d).or_insert(0) += c;
            }
        }
        if let Some(fnet) = &report.function_network {
            let _ = writeln!(density_csv, "{},function,{}", m.name, fnet.density);
            let _ = writeln!(selfloop_csv, "{},function,{}", m.name, fnet.selfloop_only_ratio);
            function_modularities.push(fnet.modularity);
            densities.push(fnet.density);
            selfloop_items.push((m.name.clone(), fnet.selfloop_only_ratio));
            for (&d, &c) in &fnet.degree_histogram {
                *function_degree_pool.entry(d).or_insert(0) += c;
            }
            for (&d, &c) in &fnet.largest_component_degree_histogram {
                *largest_component_pool.entry(d).or_insert(0) += c;
            }
            if let Some(nm) = &fnet.null_models {
                if let Some(sw) = &nm.small_world {
                    smallworld_items.push((m.name.clone(), sw.real_avg_path, sw.random_avg_path_mean));
                }
            }
        }
        if let Some(b) = &report.backbone {
            retentions.push(b.retention_nodes);
        }
        let threshold = report
            .function_network
            .as_ref()
            .and_then(|f| f.resilience.as_ref())
            .and_then(|r| r.critical_threshold.as_ref());
        if let Some(ct) = threshold {
            let _ = writeln!(
                thresholds_csv,
                "{},{},{}",
                m.name,
                ct.threshold_fraction.map(|f| f.to_string()).unwrap_or_default(),
                ct.removed_nodes.join(";")
            );
        }
        rows.push(DappSummaryRow {
            name: m.name.clone(),
            blockchain: m.blockchain.clone(),
            category: m.category.clone(),
            n_contracts: report.n_contracts,
            n_functions: report.n_functions,
            size_class: report.size_class,
            function_contract_ratio: report.function_contract_ratio,
            backbone_retention_nodes: report.backbone.as_ref().map(|b| b.retention_nodes),
            critical_threshold: threshold.and_then(|ct| ct.threshold_fraction),
        });
    }

    let write = |name: &str, content: &str| -> Result<()> {
        fs::write(corpus_dir.join(name), content)
            .with_context(|| format!("writing corpus {name}"))?;
        Ok(())
    };
    write("size_classes.csv", &size_classes_csv)?;
    write("ratio_box.csv", &ratio_csv)?;
    write("density.csv", &density_csv)?;
    write("selfloop_ratio.csv", &selfloop_csv)?;
    write("thresholds.csv", &thresholds_csv)?;
    write("contract_degree_pooled.csv", &pool_csv(&contract_degree_pool))?;
    write("function_degree_pooled.csv", &pool_csv(&function_degree_pool))?;

    // pooled tail fit over the largest components of the function networks
    let pooled_samples: Vec<u64> = largest_component_pool
        .iter()
        .flat_map(|(&d, &c)| std::iter::repeat(d as u64).take(c))
        .collect();
    let pooled_fit = match fit_powerlaw(&pooled_samples) {
        Ok(fit) => Some(fit),
        Err(e) => {
            notices.push(format!("pooled power-law fit unavailable: {e}"));
            None
        }
    };
    if let Some(fit) = &pooled_fit {
        let mut json = serde_json::to_string_pretty(fit)?;
        json.push('\n');
        write("powerlaw_pooled.json", &json)?;
    }

    // corpus charts
    let chart = |name: &str, svg: String| -> Result<()> {
        fs::write(corpus_dir.join("charts").join(name), svg)
            .with_context(|| format!("writing corpus chart {name}"))?;
        Ok(())
    };
    if !densities.is_empty() {
        chart(
            "density_pdf.svg",
            charts::render_scalar_pdf(&densities, "function network density PDF", "density"),
        )?;
    } else {
        notices.push("density chart skipped: no data".to_string());
    }
    if !selfloop_items.is_empty() {
        chart(
            "selfloop_bars.svg",
            charts::render_ratio_bars(
                &selfloop_items,
                "nodes connected only by self-loops",
                "fraction of nodes",
            ),
        )?;
    }
    if !smallworld_items.is_empty() {
        chart(
            "smallworld.svg",
            charts::render_smallworld_scatter(&smallworld_items, "real vs random path length"),
        )?;
    } else {
        notices.push("small-world chart skipped: no comparisons available".to_string());
    }

    let report = CorpusReport {
        schema_version: crate::pipeline::REPORT_SCHEMA_VERSION.to_string(),
        generated_at_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        n_dapps: loaded.len(),
        size_class_counts: size_counts,
        function_contract_ratio_mean: mean(&ratios),
        function_contract_ratio_std: sample_std(&ratios),
        contract_modularity_mean: mean(&contract_modularities),
        function_modularity_mean: mean(&function_modularities),
        backbone_retention_nodes_mean: mean(&retentions),
        pooled_function_powerlaw: pooled_fit,
        dapps: rows,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    write("corpus_report.json", &json)?;
    Ok(notices)
}

fn pool_csv(pool: &BTreeMap<usize, usize>) -> String {
    let mut out = String::from("degree,count\n");
    for (d, c) in pool {
        let _ = writeln!(out, "{d},{c}");
    }
    out
}

/// Corpus directory path for an output root.
pub fn corpus_dir(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join(CORPUS_DIR)
}

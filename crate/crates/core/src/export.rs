//! Graph serialization: DOT, GraphML, and the edge/node CSVs used to hand
//! graphs between pipeline stages. All emitters iterate nodes and edges in
//! id order, so output bytes are deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::extract::ExtractError;
use crate::graph::WeightedDigraph;

/// Node annotations carried by DOT and GraphML exports.
#[derive(Debug, Clone, Copy, Default)]
pub struct NodeAttrs {
    pub betweenness: f64,
    pub clustering: f64,
    pub degree: usize,
    pub community: usize,
}

fn dot_escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(label: &str) -> String {
    label
        .replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn to_dot(g: &WeightedDigraph, attrs: Option<&BTreeMap<String, NodeAttrs>>) -> String {
    let mut out = String::from("digraph G {\n");
    for id in 0..g.node_count() {
        let label = g.label(id);
        match attrs.and_then(|a| a.get(label)) {
            Some(a) => {
                let _ = writeln!(
                    out,
                    "  \"{}\" [betweenness={:.6}, clustering={:.6}, degree={}, community={}];",
                    dot_escape(label),
                    a.betweenness,
                    a.clustering,
                    a.degree,
                    a.community
                );
            }
            None => {
                let _ = writeln!(out, "  \"{}\";", dot_escape(label));
            }
        }
    }
    for (s, t, w) in g.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [weight={}];",
            dot_escape(g.label(s)),
            dot_escape(g.label(t)),
            w
        );
    }
    out.push_str("}\n");
    out
}

pub fn to_graphml(g: &WeightedDigraph, attrs: Option<&BTreeMap<String, NodeAttrs>>) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
         <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n\
         <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n\
         <key id=\"clustering\" for=\"node\" attr.name=\"clustering\" attr.type=\"double\"/>\n\
         <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n\
         <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n\
         <graph id=\"G\" edgedefault=\"directed\">\n",
    );
    for id in 0..g.node_count() {
        let label = g.label(id);
        match attrs.and_then(|a| a.get(label)) {
            Some(a) => {
                let _ = writeln!(
                    out,
                    "  <node id=\"{}\">\
                     <data key=\"betweenness\">{:.6}</data>\
                     <data key=\"clustering\">{:.6}</data>\
                     <data key=\"degree\">{}</data>\
                     <data key=\"community\">{}</data>\
                     </node>",
                    xml_escape(label),
                    a.betweenness,
                    a.clustering,
                    a.degree,
                    a.community
                );
            }
            None => {
                let _ = writeln!(out, "  <node id=\"{}\"/>", xml_escape(label));
            }
        }
    }
    for (s, t, w) in g.edges() {
        let _ = writeln!(
            out,
            "  <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data></edge>",
            xml_escape(g.label(s)),
            xml_escape(g.label(t)),
            w
        );
    }
    out.push_str("</graph>\n</graphml>\n");
    out
}

pub const EDGE_CSV_HEADER: &str = "source,target,weight";
pub const NODE_CSV_HEADER: &str = "node";

/// `source,target,weight` rows; weights use the shortest round-trip float
/// form so reloading is exact.
pub fn to_edge_csv(g: &WeightedDigraph) -> String {
    let mut out = String::from(EDGE_CSV_HEADER);
    out.push('\n');
    for (s, t, w) in g.edges() {
        let _ = writeln!(out, "{},{},{}", g.label(s), g.label(t), w);
    }
    out
}

/// One node label per row, in graph insertion order; keeps isolated nodes
/// alive across a file round trip.
pub fn to_node_csv(g: &WeightedDigraph) -> String {
    let mut out = String::from(NODE_CSV_HEADER);
    out.push('\n');
    for id in 0..g.node_count() {
        out.push_str(g.label(id));
        out.push('\n');
    }
    out
}

/// Rebuild a graph from the node and edge CSVs.
pub fn from_csvs(node_csv: &str, edge_csv: &str) -> Result<WeightedDigraph, ExtractError> {
    let mut g = WeightedDigraph::new();
    let mut lines = node_csv.lines();
    match lines.next() {
        Some(h) if h.trim_end() == NODE_CSV_HEADER => {}
        other => {
            return Err(ExtractError::Table(format!(
                "bad node csv header: {other:?}"
            )))
        }
    }
    for line in lines {
        if !line.is_empty() {
            g.ensure_node(line);
        }
    }
    let mut lines = edge_csv.lines();
    match lines.next() {
        Some(h) if h.trim_end() == EDGE_CSV_HEADER => {}
        other => {
            return Err(ExtractError::Table(format!(
                "bad edge csv header: {other:?}"
            )))
        }
    }
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(ExtractError::Table(format!(
                "edge row {}: expected 3 columns",
                i + 2
            )));
        }
        let w: f64 = cols[2]
            .parse()
            .map_err(|e| ExtractError::Table(format!("edge row {}: {e}", i + 2)))?;
        let s = g.ensure_node(cols[0]);
        let t = g.ensure_node(cols[1]);
        g.add_edge_weight(s, t, w);
    }
    Ok(g)
}

/// Square weight-matrix CSV with sorted row/column labels; `decimals` rounds
/// the report like the published tables, `None` keeps full precision.
pub fn to_matrix_csv(g: &WeightedDigraph, decimals: Option<usize>) -> String {
    let mut labels: Vec<&str> = g.labels().iter().map(String::as_str).collect();
    labels.sort_unstable();
    let mut out = String::new();
    for l in &labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for row in &labels {
        out.push_str(row);
        let r = g.node_id(row).expect("label");
        for col in &labels {
            let c = g.node_id(col).expect("label");
            let w = g.edge_weight(r, c).unwrap_or(0.0);
            match decimals {
                Some(d) => {
                    let _ = write!(out, ",{w:.d$}");
                }
                None => {
                    let _ = write!(out, ",{w}");
                }
            }
        }
        out.push('\n');
    }
    out
}

//! JSON documents describing a computed backbone.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::graph::{label_cmp, Backbone, WeightedGraph};
use crate::solver::{BackboneResult, Traces};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeRow {
    pub src: String,
    pub dst: String,
    pub weight: f64,
}

/// The edges of `bb`, labelled and sorted like the edge-list output.
pub fn edge_rows(g: &WeightedGraph, bb: &Backbone) -> Vec<EdgeRow> {
    let mut rows: Vec<EdgeRow> = bb
        .edge_indices()
        .map(|i| {
            let e = g.edge(i);
            EdgeRow { src: g.label(e.src).to_string(), dst: g.label(e.dst).to_string(), weight: e.weight }
        })
        .collect();
    rows.sort_by(|a, b| label_cmp(&a.src, &b.src).then_with(|| label_cmp(&a.dst, &b.dst)));
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackboneReport {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    /// Method parameters, including any seed.
    pub parameters: Map<String, Value>,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "E_b")]
    pub e_b: usize,
    #[serde(rename = "W_b")]
    pub w_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dl_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dl_empty_global_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dl_empty_local_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    pub edges: Vec<EdgeRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<f64>>,
}

impl BackboneReport {
    /// Report for a backbone without description lengths (the baselines).
    pub fn new(method: &str, g: &WeightedGraph, bb: &Backbone) -> Self {
        BackboneReport {
            method: method.to_string(),
            objective: None,
            parameters: Map::new(),
            e: g.num_edges(),
            w: g.total_weight(),
            e_b: bb.edge_count(),
            w_b: bb.weight(),
            dl_bits: None,
            dl_empty_global_bits: None,
            dl_empty_local_bits: None,
            eta: None,
            edges: edge_rows(g, bb),
            trace: None,
        }
    }

    /// Report for a description-length optimum. Only the global scope has a
    /// single trace to include.
    pub fn from_result(method: &str, g: &WeightedGraph, result: &BackboneResult) -> Self {
        let mut report = Self::new(method, g, &result.backbone);
        report.objective = Some(result.spec.to_string());
        report.dl_bits = Some(result.dl);
        report.dl_empty_global_bits = Some(result.dl_empty_global);
        report.dl_empty_local_bits = Some(result.dl_empty_local);
        report.eta = Some(result.eta);
        if let Traces::Global(t) = &result.traces {
            report.trace = Some(t.values.clone());
        }
        report
    }

    pub fn with_parameter(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }
}

//! The per-run summary written by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::class::class_check;
use crate::coloring::{verify_strong, Color};
use crate::graph::Graph;
use crate::params::Params;
use crate::reducer::{Certificate, RunResult};

/// Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub degeneracy: usize,
    pub capacity: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub eps: String,
    #[serde(rename = "K")]
    pub k: Color,
    pub colors_used: Color,
    pub budget_met: bool,
    pub valid: bool,
    pub runtime_ms: Option<u64>,
    pub trace_path: Option<String>,
    pub diagnostics: Option<Vec<Certificate>>,
}

impl Report {
    pub fn new(
        g: &Graph,
        p: &Params,
        r: &RunResult,
        runtime_ms: Option<u64>,
        trace_path: Option<String>,
    ) -> Self {
        let class = class_check(g, p);
        Report {
            n: g.vertex_count(),
            m: g.edge_count(),
            delta: class.max_degree,
            degeneracy: class.degeneracy,
            capacity: class.capacity,
            d: p.d(),
            eps: p.eps().to_string(),
            k: p.palette(),
            colors_used: r.colors_used,
            budget_met: r.budget_met,
            valid: matches!(verify_strong(g, &r.coloring), Ok(Ok(()))),
            runtime_ms,
            trace_path,
            diagnostics: (!r.diagnostics.is_empty()).then(|| r.diagnostics.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

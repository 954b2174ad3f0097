//! Reduction trace records and their line-delimited JSON encoding.
//!
//! A trace file starts with one [`TraceHeader`] line followed by one
//! [`ReductionStep`] per line, in reduction order. The base step is last.
//! Extension data (swaps, recolorings, checks) is stored on the step whose
//! graph surgery it undoes.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::Color;
use crate::graph::{Edge, VertexId};
use crate::params::{Params, Ratio};
use crate::structure::SpecialContext;

use super::certify::CountReport;

pub const TRACE_FORMAT: &str = "strongcolor-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    Case1,
    Case2,
    PendantPeel,
    Base,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwapReason {
    /// Group edge shared a color with `u u1` or `u u2`.
    Case1Step1,
    /// Imports a color already used around `u1`/`u2` onto a group edge.
    Case1Step2,
    /// Moves a color repeated on pendants of several sharers onto group edges.
    Case1Step3,
    /// `v11 w1` shared a color with `u u1` or `u u2`.
    Case2Pendant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Swap {
    pub a: Edge,
    pub b: Edge,
    pub reason: SwapReason,
}

/// How the color of `v11 w1` related to the edges at `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case2Subcase {
    /// Differs from every color at `u`.
    Fresh,
    /// Equal to `c(u u1)` or `c(u u2)`; fixed by a pendant swap.
    BigNeighborClash,
    /// Equal to `c(u v_ij)`; the affected group edges are recolored.
    GroupEdgeClash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct N2BoundCheck {
    pub edge: Edge,
    pub group_size: usize,
    /// `|N2(e)|` in the graph being extended.
    pub n2: usize,
    /// `5D + 1 - t_i`.
    pub bound: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CertificateKind {
    /// An extension step found every color of the palette blocked.
    NoAvailableColor,
    /// Pendant quota at a sharer could not be met under the degree cap.
    QuotaShortfall,
    /// No pendant donor with a usable color; the edge was recolored directly.
    DonorShortfall,
    /// An intermediate graph left the class.
    ClassClosure,
    /// A line of the Case 1 counting chain failed numerically.
    CountingChain,
    /// `|N2(u v_ij)| > 5D + 1 - t_i` at a Case 2 assignment.
    N2Bound,
    /// `c(v11 w1)` matched a group edge of the first group.
    Exhaustiveness,
    /// A peeled pendant edge had a conflict set larger than `4 Delta - 4`.
    PeelBound,
    /// A reduction step failed to shrink the measure.
    MeasureNotDecreasing,
    /// No base, peel or special context applied to a graph with edges.
    Stuck,
    /// The reduction ran past its step limit.
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub step: usize,
    pub kind: CertificateKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub index: usize,
    pub kind: StepKind,
    /// Fingerprint of the graph before this step.
    pub pre_graph: u64,
    pub measure_before: usize,
    pub measure_after: usize,
    pub edges_before: usize,
    pub edges_after: usize,
    pub context: Option<SpecialContext>,
    /// Rounds of pendant edges at special vertices removed before the
    /// surgery. A later round may only exist because an earlier one ran.
    pub peeled: Vec<Vec<Edge>>,
    pub removed_edges: Vec<Edge>,
    /// `(sharer, new leaf)` pairs, in creation order.
    pub added_pendants: Vec<(VertexId, VertexId)>,
    /// Class membership of the graph after this step.
    pub class_ok: bool,
    pub class_reasons: Vec<String>,
    /// The base coloring came from the greedy fallback rather than a matching.
    pub fallback: bool,
    pub case2: Vec<Case2Subcase>,
    pub swaps: Vec<Swap>,
    pub uncolored: Vec<Edge>,
    pub colored: Vec<(Edge, Color)>,
    /// Colors given to `peeled` once the surgery is undone, last round first.
    pub peel_colored: Vec<(Edge, Color)>,
    pub n2_bound: Vec<N2BoundCheck>,
    pub counts: Vec<CountReport>,
    pub certificates: Vec<Certificate>,
    /// Fingerprint of the coloring of the pre-step graph once extended.
    pub post_coloring: u64,
}

impl ReductionStep {
    pub(crate) fn new(index: usize, kind: StepKind) -> Self {
        ReductionStep {
            index,
            kind,
            pre_graph: 0,
            measure_before: 0,
            measure_after: 0,
            edges_before: 0,
            edges_after: 0,
            context: None,
            peeled: Vec::new(),
            removed_edges: Vec::new(),
            added_pendants: Vec::new(),
            class_ok: true,
            class_reasons: Vec::new(),
            fallback: false,
            case2: Vec::new(),
            swaps: Vec::new(),
            uncolored: Vec::new(),
            colored: Vec::new(),
            peel_colored: Vec::new(),
            n2_bound: Vec::new(),
            counts: Vec::new(),
            certificates: Vec::new(),
            post_coloring: 0,
        }
    }

    pub(crate) fn certify(&mut self, kind: CertificateKind, detail: impl Into<String>) {
        self.certificates.push(Certificate {
            step: self.index,
            kind,
            detail: detail.into(),
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub format: String,
    pub version: u32,
    pub d: u32,
    pub eps: String,
    pub palette: u32,
    pub steps: usize,
}

impl TraceHeader {
    pub fn new(p: &Params, steps: usize) -> Self {
        TraceHeader {
            format: TRACE_FORMAT.to_string(),
            version: TRACE_VERSION,
            d: p.d(),
            eps: p.eps().to_string(),
            palette: p.palette(),
            steps,
        }
    }

    pub fn params(&self) -> Result<Params, TraceError> {
        let eps: Ratio = self
            .eps
            .parse()
            .map_err(|e| TraceError::Header(format!("{e}")))?;
        Params::new(self.d, eps).map_err(|e| TraceError::Header(format!("{e}")))
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("bad trace header: {0}")]
    Header(String),
}

pub fn write_trace<W: Write>(
    mut out: W,
    p: &Params,
    steps: &[ReductionStep],
) -> Result<(), TraceError> {
    let header = TraceHeader::new(p, steps.len());
    let line = serde_json::to_string(&header).map_err(|source| TraceError::Json { line: 1, source })?;
    writeln!(out, "{line}")?;
    for (i, step) in steps.iter().enumerate() {
        let line = serde_json::to_string(step).map_err(|source| TraceError::Json {
            line: i + 2,
            source,
        })?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_trace<R: BufRead>(input: R) -> Result<(TraceHeader, Vec<ReductionStep>), TraceError> {
    let mut header: Option<TraceHeader> = None;
    let mut steps = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            let h: TraceHeader = serde_json::from_str(&line)
                .map_err(|source| TraceError::Json { line: i + 1, source })?;
            if h.format != TRACE_FORMAT || h.version != TRACE_VERSION {
                return Err(TraceError::Header(format!("{} v{}", h.format, h.version)));
            }
            header = Some(h);
            continue;
        }
        let step: ReductionStep =
            serde_json::from_str(&line).map_err(|source| TraceError::Json { line: i + 1, source })?;
        steps.push(step);
    }
    let header = header.ok_or_else(|| TraceError::Header("empty trace".into()))?;
    if header.steps != steps.len() {
        return Err(TraceError::Header(format!(
            "header announces {} steps, found {}",
            header.steps,
            steps.len()
        )));
    }
    Ok((header, steps))
}

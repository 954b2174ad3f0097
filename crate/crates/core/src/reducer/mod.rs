//! Strong edge-coloring by reduction on the number of vertices of degree at
//! least two.
//!
//! The reduction runs iteratively: each round either peels pendant edges at
//! special vertices, or picks the special vertex realizing the capacity and
//! performs the Case 1 or Case 2 surgery, until only a matching is left.
//! The matching gets color 1, and the steps are then unwound in reverse,
//! each one extending the coloring of the smaller graph to the larger one.
//! Every step is recorded in a [`ReductionStep`] so the run can be replayed
//! and audited with [`replay_trace`].
//!
//! All color choices take the least available color. When a step finds the
//! palette exhausted it keeps going past `K` and files a certificate, so the
//! output is always a valid strong edge-coloring and `budget_met` reports
//! whether it stayed within `K`.

mod case1;
mod case2;
pub mod certify;
mod replay;
pub mod trace;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class::class_check;
use crate::coloring::{
    blocked_colors, greedy_color_default, verify_strong, Color, Coloring,
};
use crate::graph::{Edge, Graph, GraphError};
use crate::params::Params;
use crate::structure::{capacity_context, is_special, n2_size, SpecialContext};

pub use case1::{build_gprime_case1, extend_case1};
pub use case2::{build_gprime_case2, extend_case2};
pub use certify::{certify_case1_counts, Case1CountState, CountReport};
pub use replay::{replay_run, replay_trace, ReplayError, ReplaySummary};
pub use trace::{
    read_trace, write_trace, Case2Subcase, Certificate, CertificateKind, N2BoundCheck,
    ReductionStep, StepKind, Swap, SwapReason, TraceError, TraceHeader,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("graph is outside the class for these parameters: {}", .0.join("; "))]
    NotInClass(Vec<String>),
    #[error("context calls for {found:?}, not {expected:?}")]
    WrongCase { expected: StepKind, found: StepKind },
    #[error("context does not match the graph: {0}")]
    BadContext(String),
    #[error("input coloring is not a valid strong coloring of the reduced graph: {0}")]
    BadColoring(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub coloring: Coloring,
    /// Largest color used. The final coloring is compacted, so this is
    /// also the number of distinct colors.
    pub colors_used: Color,
    pub palette: Color,
    pub budget_met: bool,
    pub trace: Vec<ReductionStep>,
    pub diagnostics: Vec<Certificate>,
}

impl RunResult {
    pub fn steps_of(&self, kind: StepKind) -> usize {
        self.trace.iter().filter(|s| s.kind == kind).count()
    }

    pub fn certificates_of(&self, kind: CertificateKind) -> usize {
        self.diagnostics.iter().filter(|c| c.kind == kind).count()
    }
}

/// Which surgery a context calls for: Case 1 iff `t1 < tau`.
pub fn dispatch(ctx: &SpecialContext, p: &Params) -> StepKind {
    if p.reaches_tau(ctx.t1()) {
        StepKind::Case2
    } else {
        StepKind::Case1
    }
}

/// Colors every edge of a class member, reducing then extending.
pub fn strong_color(g: &Graph, p: &Params) -> Result<RunResult, ReduceError> {
    let report = class_check(g, p);
    if !report.in_class {
        return Err(ReduceError::NotInClass(report.reasons));
    }
    let mut work = g.clone();
    let mut steps: Vec<ReductionStep> = Vec::new();
    let limit = 4 * (g.vertex_count() + g.edge_count()) + 64;

    loop {
        let index = steps.len();
        if work.max_degree() <= 1 {
            steps.push(base_step(&work, index, false));
            break;
        }
        if index >= limit {
            let mut step = base_step(&work, index, true);
            step.certify(
                CertificateKind::StepLimit,
                format!("no base graph after {limit} steps"),
            );
            steps.push(step);
            break;
        }
        let pre = begin_step(&work, index, StepKind::PendantPeel);
        let peeled = peel_to_fixpoint(&mut work);
        let context = if work.max_degree() > 1 {
            capacity_context(&work)
        } else {
            None
        };
        let step = if let Some(ctx) = context {
            let mut step = match dispatch(&ctx, p) {
                StepKind::Case1 => case1::apply(&mut work, ctx, p, index)?,
                _ => case2::apply(&mut work, ctx, p, index)?,
            };
            step.pre_graph = pre.pre_graph;
            step.measure_before = pre.measure_before;
            step.edges_before = pre.edges_before;
            step.peeled = peeled;
            step
        } else if !peeled.is_empty() {
            let mut step = pre;
            step.peeled = peeled;
            step
        } else {
            let mut step = base_step(&work, index, true);
            step.certify(
                CertificateKind::Stuck,
                format!(
                    "max degree {} but no special vertex with a leaf or a shared 2-neighbor",
                    work.max_degree()
                ),
            );
            steps.push(step);
            break;
        };
        steps.push(finish_step(&work, step, p));
    }

    // Unwind: the last step is the base, whose coloring is already recorded.
    let mut coloring: Coloring = steps.last().unwrap().colored.iter().copied().collect();
    steps.last_mut().unwrap().post_coloring = coloring.fingerprint();
    for step in steps.iter_mut().rev().skip(1) {
        revert(&mut work, step)?;
        match step.kind {
            StepKind::Case1 => case1::extend_in(&work, &mut coloring, step, p),
            StepKind::Case2 => case2::extend_in(&work, &mut coloring, step, p),
            StepKind::PendantPeel => {}
            StepKind::Base => unreachable!("base is only the last step"),
        }
        let start = step.colored.len();
        for round in step.peeled.clone().iter().rev() {
            restore(&mut work, round)?;
            extend_peel(&work, &mut coloring, step, round, g.id_bound(), p);
        }
        step.peel_colored = step.colored.split_off(start);
        step.post_coloring = coloring.fingerprint();
    }
    debug_assert_eq!(work.fingerprint(), g.fingerprint());
    debug_assert!(matches!(verify_strong(g, &coloring), Ok(Ok(()))));

    let diagnostics: Vec<Certificate> = steps
        .iter()
        .flat_map(|s| s.certificates.iter().cloned())
        .collect();
    // Colors held only by padding pendants leave gaps once those are gone.
    let coloring = coloring.compacted();
    let colors_used = coloring.max_color();
    Ok(RunResult {
        colors_used,
        palette: p.palette(),
        budget_met: colors_used <= p.palette(),
        coloring,
        trace: steps,
        diagnostics,
    })
}

fn begin_step(g: &Graph, index: usize, kind: StepKind) -> ReductionStep {
    let mut step = ReductionStep::new(index, kind);
    step.pre_graph = g.fingerprint();
    step.measure_before = g.measure();
    step.edges_before = g.edge_count();
    step
}

/// Records the post-surgery measure and class membership of `g`.
fn finish_step(g: &Graph, mut step: ReductionStep, p: &Params) -> ReductionStep {
    step.measure_after = g.measure();
    step.edges_after = g.edge_count();
    if step.kind != StepKind::Base && step.measure_after >= step.measure_before
    {
        let detail = format!(
            "measure {} -> {}",
            step.measure_before, step.measure_after
        );
        step.certify(CertificateKind::MeasureNotDecreasing, detail);
    }
    let report = class_check(g, p);
    step.class_ok = report.in_class;
    if !report.in_class {
        let detail = report.reasons.join("; ");
        step.class_reasons = report.reasons;
        step.certify(CertificateKind::ClassClosure, detail);
    }
    step
}

fn base_step(g: &Graph, index: usize, fallback: bool) -> ReductionStep {
    let mut step = begin_step(g, index, StepKind::Base);
    step.measure_after = step.measure_before;
    step.edges_after = step.edges_before;
    step.fallback = fallback;
    step.colored = if fallback {
        greedy_color_default(g).iter().collect()
    } else {
        g.edges().map(|e| (e, 1)).collect()
    };
    step
}

/// Undoes the Case 1/2 surgery of `step` on the post-step graph `g`;
/// peeled edges are left out.
fn revert(g: &mut Graph, step: &ReductionStep) -> Result<(), GraphError> {
    for &(_, leaf) in step.added_pendants.iter().rev() {
        g.remove_vertex(leaf)?;
    }
    restore(g, &step.removed_edges)
}

fn restore(g: &mut Graph, edges: &[Edge]) -> Result<(), GraphError> {
    for &e in edges {
        g.add_edge(e.lo(), e.hi())?;
    }
    Ok(())
}

/// Pendant edges whose non-leaf end (or either end, for an isolated edge)
/// is a special vertex.
pub fn pendant_edges_at_special(g: &Graph) -> Vec<Edge> {
    let mut out = BTreeSet::new();
    for u in g.vertices().filter(|&u| is_special(g, u)) {
        for leaf in g.leaf_neighbors(u) {
            out.insert(Edge::new(u, leaf));
        }
    }
    out.into_iter().collect()
}

fn apply_peel(g: &mut Graph, index: usize) -> Option<ReductionStep> {
    let edges = pendant_edges_at_special(g);
    if edges.is_empty() {
        return None;
    }
    let mut step = begin_step(g, index, StepKind::PendantPeel);
    for &e in &edges {
        g.remove_edge(e).expect("collected from the graph");
    }
    step.peeled = vec![edges];
    Some(step)
}

/// Peels repeatedly until no special vertex has a leaf; returns the rounds.
fn peel_to_fixpoint(g: &mut Graph) -> Vec<Vec<Edge>> {
    let mut rounds = Vec::new();
    loop {
        let edges = pendant_edges_at_special(g);
        if edges.is_empty() {
            return rounds;
        }
        for &e in &edges {
            g.remove_edge(e).expect("collected from the graph");
        }
        rounds.push(edges);
    }
}

/// Removes every pendant edge at a special vertex. `None` when there is none.
pub fn pendant_peel(g: &Graph, p: &Params) -> Option<(Graph, ReductionStep)> {
    let mut out = g.clone();
    let step = apply_peel(&mut out, 0)?;
    let step = finish_step(&out, step, p);
    Some((out, step))
}

/// Colors one restored round of pendant edges of `g`. Edges of the input
/// graph go first, in order; padding pendants (ids from `first_padding` up)
/// only exist in reduced graphs and go last.
fn extend_peel(
    g: &Graph,
    c: &mut Coloring,
    step: &mut ReductionStep,
    edges: &[Edge],
    first_padding: usize,
    p: &Params,
) {
    let bound = (4 * g.max_degree()).saturating_sub(4);
    let (real, padding): (Vec<Edge>, Vec<Edge>) =
        edges.iter().partition(|e| e.hi().index() < first_padding);
    for e in real.into_iter().chain(padding) {
        let n2 = n2_size(g, e);
        if n2 > bound {
            step.certify(
                CertificateKind::PeelBound,
                format!("pendant edge {e}: |N2| = {n2} > 4Δ - 4 = {bound}"),
            );
        }
        assign(g, c, e, p, step);
    }
}

/// Gives `e` its least available color, filing a certificate if that color
/// lies outside the palette.
fn assign(g: &Graph, c: &mut Coloring, e: Edge, p: &Params, step: &mut ReductionStep) -> Color {
    let blocked = blocked_colors(g, c, e);
    let color = (1..).find(|x| !blocked.contains(x)).unwrap();
    if color > p.palette() {
        let in_palette = blocked.iter().filter(|&&x| x <= p.palette()).count();
        let detail = format!(
            "edge {e}: all {} palette colors blocked ({in_palette} distinct in palette), used overflow color {color}",
            p.palette()
        );
        step.certify(CertificateKind::NoAvailableColor, detail);
    }
    c.set(e, color).expect("positive color");
    step.colored.push((e, color));
    color
}

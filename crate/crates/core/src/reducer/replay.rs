//! Independent re-execution of a recorded reduction.
//!
//! The forward pass rebuilds every intermediate graph from the input graph,
//! recomputing the peel set or capacity context at each step and comparing
//! it with the record. The backward pass starts from the recorded base
//! coloring and re-applies swaps, uncolorings and assignments, checking each
//! one against the graph it acts on and the recorded fingerprints.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class::class_check;
use crate::coloring::{least_available, locally_valid, verify_strong, Color, Coloring};
use crate::graph::{Edge, Graph};
use crate::params::Params;
use crate::structure::capacity_context;

use super::trace::{CertificateKind, ReductionStep, StepKind};
use super::{case1, case2, dispatch, peel_to_fixpoint, restore, revert, RunResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {clause}")]
pub struct ReplayError {
    pub step: usize,
    pub clause: String,
}

fn fail<T>(step: usize, clause: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError {
        step,
        clause: clause.into(),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplaySummary {
    pub steps: usize,
    pub case1: usize,
    pub case2: usize,
    pub peel: usize,
    /// Base colored greedily because the reduction stopped early.
    pub fallback_base: bool,
    pub swaps: usize,
    /// Steps whose reduced graph left the class (each carried a certificate).
    pub class_violations: usize,
    /// Steps that did not lower the measure (each carried a certificate).
    pub flat_measure: usize,
    pub n2_bound_checks: usize,
    pub n2_bound_violations: usize,
    pub count_reports: usize,
    pub count_failures: usize,
    pub certificates: usize,
    pub colors_used: Color,
}

fn has_cert(step: &ReductionStep, kind: CertificateKind) -> bool {
    step.certificates.iter().any(|c| c.kind == kind)
}

/// Replays `steps` against `g` and returns the coloring they produce,
/// compacted to colors `1..=k` as `strong_color` reports it.
pub fn replay_trace(
    g: &Graph,
    steps: &[ReductionStep],
    p: &Params,
) -> Result<(ReplaySummary, Coloring), ReplayError> {
    let Some(base) = steps.last() else {
        return fail(0, "empty trace");
    };
    if base.kind != StepKind::Base {
        return fail(base.index, "last step is not the base");
    }
    let mut summary = ReplaySummary {
        steps: steps.len(),
        ..ReplaySummary::default()
    };
    let mut work = g.clone();

    for (i, step) in steps.iter().enumerate() {
        if step.index != i {
            return fail(i, format!("recorded index {}", step.index));
        }
        if step.pre_graph != work.fingerprint() {
            return fail(i, "pre-step graph fingerprint differs");
        }
        if step.measure_before != work.measure() || step.edges_before != work.edge_count() {
            return fail(i, "pre-step measure or edge count differs");
        }
        summary.certificates += step.certificates.len();
        if step.kind == StepKind::Base {
            if i + 1 != steps.len() {
                return fail(i, "base step before the end of the trace");
            }
            forward_base(&work, step)?;
            summary.fallback_base = step.fallback;
            continue;
        }
        let peeled = peel_to_fixpoint(&mut work);
        if step.kind == StepKind::PendantPeel {
            summary.peel += 1;
            if peeled.is_empty() {
                return fail(i, "no pendant edge at a special vertex");
            }
            if peeled != step.peeled {
                return fail(i, "peeled edges differ");
            }
            if !step.removed_edges.is_empty() || !step.added_pendants.is_empty() || step.context.is_some() {
                return fail(i, "peel step records surgery");
            }
            if work.max_degree() > 1 && capacity_context(&work).is_some() {
                return fail(i, "peel recorded alone although a special context follows");
            }
        } else {
            if peeled != step.peeled {
                return fail(i, "peeled edges differ");
            }
            let Some(ctx) = capacity_context(&work) else {
                return fail(i, "no capacity context");
            };
            if step.context.as_ref() != Some(&ctx) {
                return fail(i, "recorded context differs from the capacity context");
            }
            if dispatch(&ctx, p) != step.kind {
                return fail(i, "dispatch disagrees with the recorded case");
            }
            let applied = if step.kind == StepKind::Case1 {
                summary.case1 += 1;
                case1::apply(&mut work, ctx, p, i)
            } else {
                summary.case2 += 1;
                case2::apply(&mut work, ctx, p, i)
            };
            let redo = applied.map_err(|e| ReplayError {
                step: i,
                clause: e.to_string(),
            })?;
            if redo.removed_edges != step.removed_edges {
                return fail(i, "removed edges differ");
            }
            if redo.added_pendants != step.added_pendants {
                return fail(i, "added pendants differ");
            }
        }
        let after = work.measure();
        if step.measure_after != after || step.edges_after != work.edge_count() {
            return fail(i, "post-step measure or edge count differs");
        }
        if after >= step.measure_before {
            if !has_cert(step, CertificateKind::MeasureNotDecreasing) {
                return fail(i, "measure did not decrease and no certificate was filed");
            }
            summary.flat_measure += 1;
        }
        let report = class_check(&work, p);
        if report.in_class != step.class_ok {
            return fail(i, "class membership of the reduced graph differs");
        }
        if !report.in_class {
            if !has_cert(step, CertificateKind::ClassClosure) {
                return fail(i, "reduced graph left the class without a certificate");
            }
            summary.class_violations += 1;
        }
    }

    // Backward: `work` is now the base graph.
    let mut c: Coloring = base.colored.iter().copied().collect();
    if c.len() != base.colored.len() {
        return fail(base.index, "base colors an edge twice");
    }
    match verify_strong(&work, &c) {
        Ok(Ok(())) => {}
        Ok(Err(v)) => return fail(base.index, format!("base coloring invalid: {v:?}")),
        Err(e) => return fail(base.index, format!("base coloring: {e}")),
    }
    if c.fingerprint() != base.post_coloring {
        return fail(base.index, "base coloring fingerprint differs");
    }
    for step in steps.iter().rev().skip(1) {
        backward(&mut work, &mut c, step, &mut summary)?;
    }
    if work.fingerprint() != g.fingerprint() {
        return fail(0, "unwinding did not restore the input graph");
    }
    let c = c.compacted();
    match verify_strong(g, &c) {
        Ok(Ok(())) => {}
        Ok(Err(v)) => return fail(0, format!("final coloring invalid: {v:?}")),
        Err(e) => return fail(0, format!("final coloring: {e}")),
    }
    summary.colors_used = c.max_color();
    Ok((summary, c))
}

/// Replays `r.trace` and checks it reproduces `r.coloring`.
pub fn replay_run(g: &Graph, r: &RunResult, p: &Params) -> Result<ReplaySummary, ReplayError> {
    if r.palette != p.palette() {
        return fail(0, "run used a different palette");
    }
    let (summary, c) = replay_trace(g, &r.trace, p)?;
    if c != r.coloring {
        return fail(0, "replayed coloring differs from the reported one");
    }
    if summary.colors_used != r.colors_used || r.budget_met != (r.colors_used <= r.palette) {
        return fail(0, "reported color count or budget flag differs");
    }
    Ok(summary)
}

fn forward_base(g: &Graph, step: &ReductionStep) -> Result<(), ReplayError> {
    let i = step.index;
    if !step.fallback && g.max_degree() > 1 {
        return fail(i, "base graph is not a matching");
    }
    if step.fallback && !has_cert(step, CertificateKind::Stuck) && !has_cert(step, CertificateKind::StepLimit)
    {
        return fail(i, "fallback base without a certificate");
    }
    let colored: BTreeSet<Edge> = step.colored.iter().map(|&(e, _)| e).collect();
    let edges: BTreeSet<Edge> = g.edges().collect();
    if colored != edges {
        return fail(i, "base coloring does not cover exactly the base edges");
    }
    Ok(())
}

fn backward(
    g: &mut Graph,
    c: &mut Coloring,
    step: &ReductionStep,
    summary: &mut ReplaySummary,
) -> Result<(), ReplayError> {
    let i = step.index;
    for s in &step.swaps {
        if !g.contains_edge(s.a) || !g.contains_edge(s.b) {
            return fail(i, format!("swap {} <-> {} names an edge outside the graph", s.a, s.b));
        }
        if c.swap(s.a, s.b).is_err() {
            return fail(i, format!("swap {} <-> {} touches an uncolored edge", s.a, s.b));
        }
        if !locally_valid(g, c, &[s.a, s.b]) {
            return fail(i, format!("swap {} <-> {} breaks validity", s.a, s.b));
        }
        summary.swaps += 1;
    }
    let revert_err = |e: crate::graph::GraphError| ReplayError {
        step: i,
        clause: format!("revert: {e}"),
    };
    revert(g, step).map_err(revert_err)?;
    for &e in &step.uncolored {
        if c.unset(e).is_none() {
            return fail(i, format!("uncolors {e}, which has no color"));
        }
    }
    c.retain_graph(g);
    assign_all(g, c, i, &step.colored, &step.removed_edges)?;
    let total: usize = step.peeled.iter().map(Vec::len).sum();
    if total != step.peel_colored.len() {
        return fail(i, "peel assignments do not match the peeled edges");
    }
    let mut at = 0;
    for round in step.peeled.iter().rev() {
        restore(g, round).map_err(revert_err)?;
        assign_all(g, c, i, &step.peel_colored[at..at + round.len()], round)?;
        at += round.len();
    }
    if c.len() != g.edge_count() {
        return fail(i, "extended coloring does not cover the graph");
    }
    if c.fingerprint() != step.post_coloring {
        return fail(i, "extended coloring fingerprint differs");
    }
    summary.n2_bound_checks += step.n2_bound.len();
    summary.n2_bound_violations += step.n2_bound.iter().filter(|x| !x.holds).count();
    summary.count_reports += step.counts.len();
    summary.count_failures += step.counts.iter().filter(|x| !x.ok).count();
    Ok(())
}

/// Re-applies the recorded assignments after `restored` edges came back,
/// then checks every edge whose conflicts they could have changed.
fn assign_all(
    g: &Graph,
    c: &mut Coloring,
    i: usize,
    colored: &[(Edge, Color)],
    restored: &[Edge],
) -> Result<(), ReplayError> {
    for &(e, col) in colored {
        if !g.contains_edge(e) {
            return fail(i, format!("colors {e}, which is not an edge"));
        }
        if c.is_colored(e) {
            return fail(i, format!("colors {e} twice"));
        }
        let least = least_available(g, c, e);
        if col != least {
            return fail(i, format!("colors {e} with {col}; least available is {least}"));
        }
        c.set(e, col).expect("positive color");
    }
    // Restored edges create the only new conflicts, all among edges at
    // their endpoints; the rest was valid on the smaller graph.
    let mut touched: BTreeSet<Edge> = colored.iter().map(|&(e, _)| e).collect();
    for e in restored {
        for v in e.endpoints() {
            touched.extend(g.incident_edges(v));
        }
    }
    let touched: Vec<Edge> = touched.into_iter().collect();
    if let Some(&e) = touched.iter().find(|&&e| !c.is_colored(e)) {
        return fail(i, format!("{e} left uncolored"));
    }
    if !locally_valid(g, c, &touched) {
        return fail(i, "extended coloring is not a strong coloring");
    }
    Ok(())
}

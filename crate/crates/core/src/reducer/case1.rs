//! Case 1 (`t1 < tau`): detach every group from `u` at once, pad each
//! sharer with pendant leaves, and on the way back rearrange colors among
//! the pendant edges of each sharer before coloring `u v_ij` in reverse.

use std::collections::{BTreeMap, BTreeSet};

use crate::coloring::{blocked_colors, verify_strong, Color, Coloring};
use crate::graph::{Edge, Graph, VertexId};
use crate::params::Params;
use crate::structure::SpecialContext;

use super::certify::{certify_case1_counts, Case1CountState};
use super::trace::{CertificateKind, ReductionStep, StepKind, Swap, SwapReason};
use super::{assign, begin_step, dispatch, finish_step, ReduceError};

pub(super) fn check_context(g: &Graph, ctx: &SpecialContext) -> Result<(), ReduceError> {
    if !ctx.leaves.is_empty() {
        return Err(ReduceError::BadContext(format!(
            "special vertex {} still has leaf neighbors",
            ctx.u
        )));
    }
    if ctx.groups.is_empty() {
        return Err(ReduceError::BadContext("no groups".into()));
    }
    for gr in &ctx.groups {
        for &v in &gr.members {
            if g.degree(v) != 2 || !g.is_adjacent(v, ctx.u) || !g.is_adjacent(v, gr.sharer) {
                return Err(ReduceError::BadContext(format!(
                    "{v} is not a common 2-neighbor of {} and {}",
                    ctx.u, gr.sharer
                )));
            }
        }
    }
    Ok(())
}

pub(super) fn apply(
    g: &mut Graph,
    ctx: SpecialContext,
    p: &Params,
    index: usize,
) -> Result<ReductionStep, ReduceError> {
    check_context(g, &ctx)?;
    let found = dispatch(&ctx, p);
    if found != StepKind::Case1 {
        return Err(ReduceError::WrongCase {
            expected: StepKind::Case1,
            found,
        });
    }
    let mut step = begin_step(g, index, StepKind::Case1);
    let removed = ctx.group_edges();
    for &e in &removed {
        g.remove_edge(e)?;
    }
    let members: BTreeSet<VertexId> = ctx
        .groups
        .iter()
        .flat_map(|gr| gr.members.iter().copied())
        .collect();
    let quota = p.tau_ceil() as usize;
    let cap = p.low_capacity_degree_cap();
    for gr in &ctx.groups {
        let w = gr.sharer;
        if members.contains(&w) {
            step.certify(
                CertificateKind::QuotaShortfall,
                format!("sharer {w} is itself a 2-neighbor of {}; no pendants added", ctx.u),
            );
            continue;
        }
        // The group's own members are leaves of w now; they do not count.
        let have = g.leaf_neighbors(w).filter(|l| !gr.members.contains(l)).count();
        let need = quota.saturating_sub(have);
        let room = cap.saturating_sub(g.degree(w));
        let add = need.min(room);
        if add < need {
            step.certify(
                CertificateKind::QuotaShortfall,
                format!(
                    "sharer {w}: degree {} with {have} pendants, needs {need} more under cap {cap}",
                    g.degree(w)
                ),
            );
        }
        for _ in 0..add {
            let leaf = g.add_vertex();
            g.add_edge(w, leaf)?;
            step.added_pendants.push((w, leaf));
        }
    }
    step.removed_edges = removed;
    step.context = Some(ctx);
    Ok(step)
}

/// Builds the reduced graph for a Case 1 context, leaving `g` untouched.
pub fn build_gprime_case1(
    g: &Graph,
    ctx: &SpecialContext,
    p: &Params,
) -> Result<(Graph, ReductionStep), ReduceError> {
    let mut out = g.clone();
    let step = apply(&mut out, ctx.clone(), p, 0)?;
    let step = finish_step(&out, step, p);
    Ok((out, step))
}

/// Extends a valid coloring of the Case 1 reduced graph `gprime` to `g`.
/// The returned step carries the swaps, assignments and certificates.
pub fn extend_case1(
    g: &Graph,
    gprime: &Graph,
    cprime: &Coloring,
    ctx: &SpecialContext,
    p: &Params,
) -> Result<(Coloring, ReductionStep), ReduceError> {
    match verify_strong(gprime, cprime) {
        Ok(Ok(())) => {}
        Ok(Err(v)) => return Err(ReduceError::BadColoring(format!("{v:?}"))),
        Err(e) => return Err(ReduceError::BadColoring(e.to_string())),
    }
    let mut step = ReductionStep::new(0, StepKind::Case1);
    step.context = Some(ctx.clone());
    step.removed_edges = ctx.group_edges();
    step.added_pendants = added_pendants(g, gprime);
    let mut c = cprime.clone();
    extend_in(g, &mut c, &mut step, p);
    Ok((c, step))
}

/// Pendant edges of `gprime` whose leaf is not a vertex of `g`.
pub(super) fn added_pendants(g: &Graph, gprime: &Graph) -> Vec<(VertexId, VertexId)> {
    gprime
        .edges()
        .filter_map(|e| match (g.contains_vertex(e.lo()), g.contains_vertex(e.hi())) {
            (true, false) => Some((e.lo(), e.hi())),
            (false, true) => Some((e.hi(), e.lo())),
            _ => None,
        })
        .collect()
}

/// `g` is the pre-step graph; `c` colors the post-step graph, including the
/// added pendant edges, which are dropped here.
pub(super) fn extend_in(g: &Graph, c: &mut Coloring, step: &mut ReductionStep, p: &Params) {
    let ctx = step.context.clone().expect("case 1 step has a context");
    let u = ctx.u;
    let big_colors: BTreeSet<Color> = ctx.big_edges().iter().filter_map(|&e| c.get(e)).collect();
    let members: BTreeSet<VertexId> = ctx
        .groups
        .iter()
        .flat_map(|gr| gr.members.iter().copied())
        .collect();
    let group_edges: Vec<Vec<Edge>> = ctx
        .groups
        .iter()
        .map(|gr| gr.members.iter().map(|&v| Edge::new(gr.sharer, v)).collect())
        .collect();
    // Pendant edges at each sharer in the reduced graph, other than its own group.
    let donors: Vec<Vec<Edge>> = ctx
        .groups
        .iter()
        .map(|gr| {
            let w = gr.sharer;
            let mut ds: Vec<Edge> = step
                .added_pendants
                .iter()
                .filter(|&&(s, _)| s == w)
                .map(|&(s, l)| Edge::new(s, l))
                .collect();
            ds.extend(
                g.leaf_neighbors(w)
                    .filter(|l| !members.contains(l))
                    .map(|l| Edge::new(w, l)),
            );
            ds.sort();
            ds
        })
        .collect();
    let color = |c: &Coloring, e: Edge| c.get(e).expect("reduced graph is fully colored");

    // (1) group edges must avoid c(u u1), c(u u2).
    let mut repair: Vec<Edge> = Vec::new();
    for (i, ges) in group_edges.iter().enumerate() {
        for &ge in ges {
            if repair.contains(&ge) || !big_colors.contains(&color(c, ge)) {
                continue;
            }
            match donors[i].iter().copied().find(|&d| !big_colors.contains(&color(c, d))) {
                Some(d) => {
                    c.swap(ge, d).unwrap();
                    step.swaps.push(Swap {
                        a: ge,
                        b: d,
                        reason: SwapReason::Case1Step1,
                    });
                }
                None => {
                    step.certify(
                        CertificateKind::DonorShortfall,
                        format!("group edge {ge} clashes with u's big edges and no pendant donor fits"),
                    );
                    repair.push(ge);
                }
            }
        }
    }

    // (2) pull colors already present around u1, u2 onto group edges.
    let around_big: BTreeSet<Color> = ctx
        .big_neighbors
        .iter()
        .flat_map(|&b| g.incident_edges(b))
        .filter(|e| !e.contains(u))
        .filter_map(|e| c.get(e))
        .collect();
    let mut locked: BTreeSet<Edge> = repair.iter().copied().collect();
    for (i, ges) in group_edges.iter().enumerate() {
        for &d in &donors[i] {
            let dc = color(c, d);
            if !around_big.contains(&dc) || big_colors.contains(&dc) {
                continue;
            }
            let target = ges
                .iter()
                .copied()
                .find(|ge| !locked.contains(ge) && !around_big.contains(&color(c, *ge)));
            if let Some(ge) = target {
                c.swap(ge, d).unwrap();
                locked.insert(ge);
                step.swaps.push(Swap {
                    a: ge,
                    b: d,
                    reason: SwapReason::Case1Step2,
                });
            }
        }
    }

    // (3) a color on pendants of two or more sharers goes onto their group edges.
    let mut holders: BTreeMap<Color, Vec<(usize, Edge)>> = BTreeMap::new();
    for (i, ds) in donors.iter().enumerate() {
        for &d in ds {
            holders.entry(color(c, d)).or_default().push((i, d));
        }
    }
    for (col, hs) in holders {
        let sharers: BTreeSet<usize> = hs.iter().map(|&(i, _)| i).collect();
        if sharers.len() < 2 || big_colors.contains(&col) {
            continue;
        }
        for (i, d) in hs {
            if c.get(d) != Some(col) {
                continue;
            }
            let free = group_edges[i]
                .iter()
                .copied()
                .find(|&ge| !locked.contains(&ge) && color(c, ge) != col);
            if let Some(ge) = free {
                c.swap(ge, d).unwrap();
                locked.insert(ge);
                step.swaps.push(Swap {
                    a: ge,
                    b: d,
                    reason: SwapReason::Case1Step3,
                });
            }
        }
    }

    for &ge in &repair {
        c.unset(ge);
        step.uncolored.push(ge);
    }
    c.retain_graph(g);
    for &ge in &repair {
        assign(g, c, ge, p, step);
    }

    // (4) color u v_{s,t_s}, ..., u v_{1,1}.
    let sizes = ctx.sizes();
    let big_degrees: Vec<usize> = ctx.big_neighbors.iter().map(|&b| g.degree(b)).collect();
    let max_degree = g.max_degree();
    for (i, gr) in ctx.groups.iter().enumerate().rev() {
        for (j, &v) in gr.members.iter().enumerate().rev() {
            let e = Edge::new(u, v);
            let mut colored_n2 = BTreeSet::new();
            crate::structure::for_each_n2(g, e, |f| {
                if c.is_colored(f) {
                    colored_n2.insert(f);
                }
            });
            let state = Case1CountState {
                edge: Some(e),
                d_u: g.degree(u),
                big_degrees: big_degrees.clone(),
                d_w: g.degree(gr.sharer),
                max_degree,
                sizes: sizes.clone(),
                group: i,
                member: j,
                n2_colored: colored_n2.len(),
                distinct_blocked: blocked_colors(g, c, e).len(),
            };
            let report = certify_case1_counts(&state, p);
            if !report.ok {
                step.certify(
                    CertificateKind::CountingChain,
                    format!(
                        "edge {e}: failed at {:?}",
                        report.failed_line.as_deref().unwrap_or("?")
                    ),
                );
            }
            step.counts.push(report);
            assign(g, c, e, p, step);
        }
    }
}

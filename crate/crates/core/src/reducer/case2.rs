//! Case 2 (`t1 >= tau`): detach the single edge `u v11`, make sure the
//! sharer `w1` owns three pendant edges, and on the way back resolve the
//! color of `v11 w1` against the edges at `u` before coloring `u v11`.

use std::collections::BTreeSet;

use crate::coloring::{verify_strong, Color, Coloring};
use crate::graph::{Edge, Graph};
use crate::params::Params;
use crate::structure::{n2_size, SpecialContext};

use super::case1::{added_pendants, check_context};
use super::trace::{
    Case2Subcase, CertificateKind, N2BoundCheck, ReductionStep, StepKind, Swap, SwapReason,
};
use super::{assign, begin_step, dispatch, finish_step, ReduceError};

/// Pendant edges `w1` must own in the reduced graph, `v11 w1` included.
const PENDANT_QUOTA: usize = 3;

pub(super) fn apply(
    g: &mut Graph,
    ctx: SpecialContext,
    p: &Params,
    index: usize,
) -> Result<ReductionStep, ReduceError> {
    check_context(g, &ctx)?;
    let found = dispatch(&ctx, p);
    if found != StepKind::Case2 {
        return Err(ReduceError::WrongCase {
            expected: StepKind::Case2,
            found,
        });
    }
    let mut step = begin_step(g, index, StepKind::Case2);
    let w1 = ctx.groups[0].sharer;
    let v11 = ctx.groups[0].members[0];
    let e11 = Edge::new(ctx.u, v11);
    g.remove_edge(e11)?;
    let have = g.leaf_neighbors(w1).count();
    let need = PENDANT_QUOTA.saturating_sub(have);
    let cap = p.high_capacity_degree_cap();
    let room = cap.saturating_sub(g.degree(w1));
    let add = need.min(room);
    if add < need {
        step.certify(
            CertificateKind::QuotaShortfall,
            format!(
                "sharer {w1}: degree {} with {have} pendant edges, needs {need} more under cap {cap}",
                g.degree(w1)
            ),
        );
    }
    for _ in 0..add {
        let leaf = g.add_vertex();
        g.add_edge(w1, leaf)?;
        step.added_pendants.push((w1, leaf));
    }
    step.removed_edges = vec![e11];
    step.context = Some(ctx);
    Ok(step)
}

/// Builds the reduced graph for a Case 2 context, leaving `g` untouched.
pub fn build_gprime_case2(
    g: &Graph,
    ctx: &SpecialContext,
    p: &Params,
) -> Result<(Graph, ReductionStep), ReduceError> {
    let mut out = g.clone();
    let step = apply(&mut out, ctx.clone(), p, 0)?;
    let step = finish_step(&out, step, p);
    Ok((out, step))
}

/// Extends a valid coloring of the Case 2 reduced graph `gprime` to `g`.
pub fn extend_case2(
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
    let mut step = ReductionStep::new(0, StepKind::Case2);
    step.context = Some(ctx.clone());
    step.removed_edges = vec![Edge::new(ctx.u, ctx.groups[0].members[0])];
    step.added_pendants = added_pendants(g, gprime);
    let mut c = cprime.clone();
    extend_in(g, &mut c, &mut step, p);
    Ok((c, step))
}

pub(super) fn extend_in(g: &Graph, c: &mut Coloring, step: &mut ReductionStep, p: &Params) {
    let ctx = step.context.clone().expect("case 2 step has a context");
    let u = ctx.u;
    let w1 = ctx.groups[0].sharer;
    let v11 = ctx.groups[0].members[0];
    let e11 = Edge::new(u, v11);
    let vw = Edge::new(v11, w1);
    let u_edges: Vec<Edge> = g.incident_edges(u).filter(|&e| e != e11).collect();
    let big_edges = ctx.big_edges();
    let clash_at_u = |c: &Coloring| -> Option<Edge> {
        let cv = c.get(vw)?;
        u_edges.iter().copied().find(|&e| c.get(e) == Some(cv))
    };
    let first_group: Vec<Edge> = ctx.groups[0]
        .members
        .iter()
        .map(|&v| Edge::new(u, v))
        .collect();

    let mut clash = clash_at_u(c);
    let mut repair_vw = false;
    if let Some(e) = clash.filter(|e| big_edges.contains(e)) {
        step.case2.push(Case2Subcase::BigNeighborClash);
        let u_colors: BTreeSet<Color> = u_edges.iter().filter_map(|&e| c.get(e)).collect();
        let big_colors: BTreeSet<Color> = big_edges.iter().filter_map(|&e| c.get(e)).collect();
        let mut donors: Vec<Edge> = step
            .added_pendants
            .iter()
            .map(|&(s, l)| Edge::new(s, l))
            .chain(g.leaf_neighbors(w1).map(|l| Edge::new(w1, l)))
            .collect();
        donors.sort();
        let colour = |d: &Edge| c.get(*d).expect("pendant edges are colored");
        let pick = donors
            .iter()
            .find(|d| !u_colors.contains(&colour(d)))
            .or_else(|| donors.iter().find(|d| !big_colors.contains(&colour(d))))
            .copied();
        match pick {
            Some(d) => {
                c.swap(vw, d).unwrap();
                step.swaps.push(Swap {
                    a: vw,
                    b: d,
                    reason: SwapReason::Case2Pendant,
                });
                clash = clash_at_u(c);
            }
            None => {
                step.certify(
                    CertificateKind::DonorShortfall,
                    format!("{vw} shares a color with {e} and no pendant of {w1} can take it"),
                );
                repair_vw = true;
                clash = None;
            }
        }
    }

    let mut order = vec![e11];
    match clash {
        None if step.case2.is_empty() => step.case2.push(Case2Subcase::Fresh),
        None => {}
        Some(e) => {
            step.case2.push(Case2Subcase::GroupEdgeClash);
            if first_group.contains(&e) {
                step.certify(
                    CertificateKind::Exhaustiveness,
                    format!("{vw} shares a color with {e} of the first group"),
                );
                order.clear();
            } else {
                order = vec![e];
            }
            order.extend(first_group.iter().copied());
            for &f in &order {
                if c.unset(f).is_some() {
                    step.uncolored.push(f);
                }
            }
        }
    }
    if repair_vw {
        c.unset(vw);
        step.uncolored.push(vw);
    }
    c.retain_graph(g);

    let d = i64::from(p.d());
    for e in order {
        let v = e.other(u).unwrap();
        let group_size = ctx
            .groups
            .iter()
            .find(|gr| gr.members.contains(&v))
            .map_or(0, |gr| gr.members.len());
        let n2 = n2_size(g, e);
        let bound = 5 * d + 1 - group_size as i64;
        let holds = n2 as i64 <= bound;
        if !holds {
            step.certify(
                CertificateKind::N2Bound,
                format!("edge {e}: |N2| = {n2} > 5D + 1 - t = {bound}"),
            );
        }
        step.n2_bound.push(N2BoundCheck {
            edge: e,
            group_size,
            n2,
            bound,
            holds,
        });
        assign(g, c, e, p, step);
    }
    if repair_vw {
        assign(g, c, vw, p, step);
    }
}

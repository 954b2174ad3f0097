//! Membership test for the graph class the reduction is guaranteed to
//! handle: 2-degenerate, high-degree vertices carry enough leaves, and the
//! maximum degree respects the cap for the current capacity regime.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::params::Params;
use crate::structure::{capacity, degeneracy};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub in_class: bool,
    pub degeneracy: usize,
    pub max_degree: usize,
    pub capacity: usize,
    /// Whether the capacity reaches `tau`, which selects the degree cap.
    pub high_capacity: bool,
    pub reasons: Vec<String>,
}

pub fn class_check(g: &Graph, p: &Params) -> ClassReport {
    let mut reasons = Vec::new();
    let k = degeneracy(g).k;
    if k > 2 {
        reasons.push(format!("not 2-degenerate (degeneracy {k})"));
    }
    let d = p.d() as usize;
    for v in g.vertices() {
        let deg = g.degree(v);
        if deg > d {
            let leaves = g.leaf_neighbors(v).count();
            if leaves < deg - d {
                reasons.push(format!(
                    "vertex {v} has degree {deg} > D = {d} but only {leaves} leaves (needs {})",
                    deg - d
                ));
            }
        }
    }
    let cap = capacity(g);
    let high = p.reaches_tau(cap);
    let max_degree = g.max_degree();
    let limit = if high {
        p.high_capacity_degree_cap()
    } else {
        p.low_capacity_degree_cap()
    };
    if max_degree > limit {
        let regime = if high { ">= tau" } else { "< tau" };
        reasons.push(format!(
            "max degree {max_degree} exceeds {limit} allowed when capacity {cap} {regime} ({:.4})",
            p.tau()
        ));
    }
    ClassReport {
        in_class: reasons.is_empty(),
        degeneracy: k,
        max_degree,
        capacity: cap,
        high_capacity: high,
        reasons,
    }
}

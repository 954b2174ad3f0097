//! Runtime evaluation of the Case 1 counting argument.
//!
//! At each final-stage assignment of `u v_ij` the reducer snapshots the
//! local degrees and counts into a [`Case1CountState`]. The report checks
//! the raw bound on colored conflict edges and, when that count is large
//! enough to matter, walks the chain of upper bounds on distinct blocked
//! colors down to `5D - tau + 1`, flagging the first link that fails.

use serde::{Deserialize, Serialize};

use crate::graph::Edge;
use crate::params::Params;

const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case1CountState {
    pub edge: Option<Edge>,
    pub d_u: usize,
    /// Degrees of the big neighbors `u1`, `u2` (zero, one or two entries).
    pub big_degrees: Vec<usize>,
    pub d_w: usize,
    pub max_degree: usize,
    /// Group sizes `t_1 >= ... >= t_s`.
    pub sizes: Vec<usize>,
    /// Zero-based group index `i - 1`.
    pub group: usize,
    /// Zero-based member index `j - 1`.
    pub member: usize,
    /// Colored edges in the conflict set of `u v_ij`.
    pub n2_colored: usize,
    /// Distinct colors on those edges.
    pub distinct_blocked: usize,
}

impl Case1CountState {
    /// `sum d(B) + d(w_i) + (d(u) - b - 1) + (d(u) - b - t_i) - sum_{p<i} t_p - (j - 1)`,
    /// which for two big neighbors is `d(u1)+d(u2)+d(w_i)+d(u)-3+d(u)-2-t_i-...`.
    pub fn raw_bound(&self) -> i64 {
        let b = self.big_degrees.len() as i64;
        let du = self.d_u as i64;
        let ti = self.sizes[self.group] as i64;
        let before: i64 = self.sizes[..self.group].iter().sum::<usize>() as i64;
        self.big_degrees.iter().sum::<usize>() as i64 + self.d_w as i64 + (du - b - 1)
            + (du - b - ti)
            - before
            - self.member as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLine {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub edge: Option<Edge>,
    pub n2_colored: usize,
    pub raw_bound: i64,
    pub distinct_blocked: usize,
    /// Fewer colored conflict edges than the palette size: no chain needed.
    pub directly_colorable: bool,
    pub chain: Vec<ChainLine>,
    pub failed_line: Option<String>,
    pub ok: bool,
}

pub const RAW_LINE: &str = "n2 <= d(u1)+d(u2)+d(wi)+2d(u)-5-ti-sum(t_p, p<i)-(j-1)";

pub fn certify_case1_counts(state: &Case1CountState, p: &Params) -> CountReport {
    let raw_bound = state.raw_bound();
    let raw_ok = state.n2_colored as i64 <= raw_bound;
    let k = i64::from(p.palette());
    let directly = (state.n2_colored as i64) < k;
    let mut failed_line = (!raw_ok).then(|| RAW_LINE.to_string());
    let mut chain = Vec::new();
    if !directly {
        chain = chain_lines(state, p);
        if failed_line.is_none() {
            failed_line = chain
                .windows(2)
                .find(|w| w[0].value > w[1].value + SLACK)
                .map(|w| w[0].label.clone());
        }
    }
    CountReport {
        edge: state.edge,
        n2_colored: state.n2_colored,
        raw_bound,
        distinct_blocked: state.distinct_blocked,
        directly_colorable: directly,
        ok: failed_line.is_none(),
        chain,
        failed_line,
    }
}

fn chain_lines(state: &Case1CountState, p: &Params) -> Vec<ChainLine> {
    let tau = p.tau();
    let d = f64::from(p.d());
    let dt = p.d_over_tau();
    let n2 = state.n2_colored as f64;
    let s = state.sizes.len() as f64;
    let t1 = state.sizes[0] as f64;
    let du = state.d_u as f64;
    let delta = state.max_degree as f64;
    let b = state.big_degrees.len() as f64;
    let sum_big = state.big_degrees.iter().sum::<usize>() as f64;
    let dw = state.d_w as f64;
    let shrink = 1.0 - 1.0 / tau;
    // The raw bound with -t_i - sum_{p<i} t_p - (j-1) relaxed to -t1.
    let relaxed = sum_big + 2.0 * du - 2.0 * b - 1.0 + dw - t1;
    let line = |label: &str, value: f64| ChainLine {
        label: label.to_string(),
        value,
    };
    vec![
        line("observed distinct blocked colors", state.distinct_blocked as f64),
        line(
            "n2 - (n2 + τ(s-1) - (5D - τ + 2))/τ",
            n2 - (n2 + tau * (s - 1.0) - (5.0 * d - tau + 2.0)) / tau,
        ),
        line(
            "n2(1 - 1/τ) - (s-1) + 5D^(1/2+ε) - 1 + 2/τ",
            n2 * shrink - (s - 1.0) + 5.0 * dt - 1.0 + 2.0 / tau,
        ),
        line(
            "(d(u1)+d(u2)+2d(u)-5+d(wi)-t1)(1 - 1/τ) - (d(u)-2)/τ + 5D^(1/2+ε) + 2/τ",
            relaxed * shrink - (du - 2.0) / tau + 5.0 * dt + 2.0 / tau,
        ),
        line(
            "3Δ(1 - 1/τ) + d(u)(2 - 3/τ) + 5D^(1/2+ε) - 5 + 9/τ",
            3.0 * delta * shrink + du * (2.0 - 3.0 / tau) + 5.0 * dt - 5.0 + 9.0 / tau,
        ),
        line(
            "3(D + τ)(1 - 1/τ) + D(2 - 3/τ) + 5D^(1/2+ε) - 5 + 9/τ",
            3.0 * (d + tau) * shrink + d * (2.0 - 3.0 / tau) + 5.0 * dt - 5.0 + 9.0 / tau,
        ),
        line(
            "5D + 3τ - D^(1/2+ε) - 8 + 9/τ",
            5.0 * d + 3.0 * tau - dt - 8.0 + 9.0 / tau,
        ),
        line("5D - τ + 1", 5.0 * d - tau + 1.0),
    ]
}

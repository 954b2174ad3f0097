//! Exact strong chromatic index for small graphs, by branch and bound on
//! the conflict graph.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::graph::{Edge, Graph};

/// Vertices are the edges of the source graph; two are adjacent when they
/// may not share a color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub vertices: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

pub fn conflict_graph(g: &Graph) -> ConflictGraph {
    let vertices: Vec<Edge> = g.edges().collect();
    let adj = vertices
        .iter()
        .map(|&e| {
            let mut ns: Vec<usize> = Vec::new();
            crate::structure::for_each_n2(g, e, |f| {
                ns.push(vertices.binary_search(&f).expect("edge of g"));
            });
            ns.sort_unstable();
            ns.dedup();
            ns
        })
        .collect();
    ConflictGraph { vertices, adj }
}

/// Largest pairwise-conflicting edge set found by growing a clique greedily
/// from every seed edge. Always a lower bound on the strong chromatic index.
pub fn conflict_clique_lower_bound(g: &Graph) -> usize {
    clique_bound(&conflict_graph(g))
}

fn clique_bound(cg: &ConflictGraph) -> usize {
    let mut best = 0;
    for seed in 0..cg.len() {
        let mut clique = vec![seed];
        let mut cand: Vec<usize> = cg.neighbors(seed).to_vec();
        while !cand.is_empty() {
            // Keep the candidate with most neighbors among the other candidates.
            let &pick = cand
                .iter()
                .max_by_key(|&&x| {
                    let inside = cand.iter().filter(|&&y| cg.is_adjacent(x, y)).count();
                    (inside, std::cmp::Reverse(x))
                })
                .unwrap();
            clique.push(pick);
            cand.retain(|&y| y != pick && cg.is_adjacent(pick, y));
        }
        best = best.max(clique.len());
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_edges: usize,
    pub time_budget: Option<Duration>,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_edges: 16,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{reason}; strong chromatic index is between {lower} and {upper}")]
    Resource {
        reason: String,
        lower: usize,
        upper: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub index: usize,
    pub witness: Coloring,
    /// Search nodes expanded.
    pub nodes: u64,
}

struct Search<'a> {
    cg: &'a ConflictGraph,
    color: Vec<Color>,
    best: Vec<Color>,
    best_k: usize,
    lower: usize,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_> {
    fn saturation(&self, v: usize) -> usize {
        let mut seen: Vec<Color> = self
            .cg
            .neighbors(v)
            .iter()
            .map(|&x| self.color[x])
            .filter(|&c| c != 0)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Uncolored vertex of highest saturation, then conflict degree, then lowest id.
    fn pick(&self) -> Option<usize> {
        (0..self.cg.len())
            .filter(|&v| self.color[v] == 0)
            .max_by_key(|&v| (self.saturation(v), self.cg.degree(v), std::cmp::Reverse(v)))
    }

    fn run(&mut self, used: usize) {
        if self.best_k <= self.lower || self.timed_out {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return;
                }
            }
        }
        let Some(v) = self.pick() else {
            self.best_k = used;
            self.best = self.color.clone();
            return;
        };
        // A new color is only worth opening while it stays below the incumbent.
        let top = (used + 1).min(self.best_k - 1);
        for c in 1..=top as Color {
            if self.cg.neighbors(v).iter().any(|&x| self.color[x] == c) {
                continue;
            }
            self.color[v] = c;
            self.run(used.max(c as usize));
            self.color[v] = 0;
            if self.best_k <= self.lower || self.timed_out {
                return;
            }
        }
    }
}

/// Minimum number of colors in a strong edge-coloring of `g`, with a witness.
pub fn exact_strong_index(g: &Graph, limits: OracleLimits) -> Result<ExactResult, OracleError> {
    let cg = conflict_graph(g);
    let lower = clique_bound(&cg);
    let greedy = crate::coloring::greedy_color_default(g);
    let upper = greedy.max_color() as usize;
    if cg.len() > limits.max_edges {
        return Err(OracleError::Resource {
            reason: format!("{} edges exceed the limit of {}", cg.len(), limits.max_edges),
            lower,
            upper,
        });
    }
    let greedy_colors: Vec<Color> = cg.vertices.iter().map(|&e| greedy.get(e).unwrap()).collect();
    let mut s = Search {
        cg: &cg,
        color: vec![0; cg.len()],
        best: greedy_colors,
        best_k: upper,
        lower,
        nodes: 0,
        deadline: limits.time_budget.map(|d| Instant::now() + d),
        timed_out: false,
    };
    s.run(0);
    if s.timed_out {
        return Err(OracleError::Resource {
            reason: "time budget exhausted".into(),
            lower,
            upper: s.best_k,
        });
    }
    let witness = cg.vertices.iter().copied().zip(s.best.iter().copied()).collect();
    Ok(ExactResult {
        index: s.best_k,
        witness,
        nodes: s.nodes,
    })
}

//! Brute-force reference implementations, written from the definitions and
//! sharing no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use strongcolor::graph::{Edge, Graph, VertexId};
use strongcolor::Coloring;

pub type Pair = (u32, u32);

pub fn pairs(g: &Graph) -> Vec<Pair> {
    g.edges().map(|e| (e.lo().0, e.hi().0)).collect()
}

fn adjacency(es: &[Pair]) -> BTreeSet<Pair> {
    es.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect()
}

/// Two distinct edges conflict when they share an endpoint or an endpoint
/// of one is adjacent to an endpoint of the other.
pub fn conflicts(adj: &BTreeSet<Pair>, e: Pair, f: Pair) -> bool {
    if e == f {
        return false;
    }
    let (ea, fa) = ([e.0, e.1], [f.0, f.1]);
    ea.iter()
        .any(|&x| fa.iter().any(|&y| x == y || adj.contains(&(x, y))))
}

pub fn brute_n2(g: &Graph, e: Edge) -> BTreeSet<Edge> {
    let es = pairs(g);
    let adj = adjacency(&es);
    let target = (e.lo().0, e.hi().0);
    g.edges()
        .filter(|f| conflicts(&adj, target, (f.lo().0, f.hi().0)))
        .collect()
}

/// All-pairs scan: every edge colored and no conflicting pair shares a color.
pub fn brute_valid(g: &Graph, c: &Coloring) -> bool {
    let es = pairs(g);
    let adj = adjacency(&es);
    let col: Vec<Option<u32>> = g.edges().map(|e| c.get(e)).collect();
    if col.iter().any(Option::is_none) {
        return false;
    }
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            if col[i] == col[j] && conflicts(&adj, es[i], es[j]) {
                return false;
            }
        }
    }
    true
}

/// Strong chromatic index by trying k = 0, 1, ... with plain backtracking.
pub fn brute_index(g: &Graph) -> usize {
    let es = pairs(g);
    let adj = adjacency(&es);
    let m = es.len();
    let nb: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| conflicts(&adj, es[i], es[j])).collect())
        .collect();
    fn fill(i: usize, k: u32, col: &mut Vec<u32>, nb: &[Vec<usize>]) -> bool {
        if i == col.len() {
            return true;
        }
        for c in 1..=k {
            if nb[i].iter().all(|&j| j >= i || col[j] != c) {
                col[i] = c;
                if fill(i + 1, k, col, nb) {
                    return true;
                }
            }
        }
        col[i] = 0;
        false
    }
    (0..=m)
        .find(|&k| fill(0, k as u32, &mut vec![0; m], &nb))
        .unwrap()
}

pub fn degrees(es: &[Pair]) -> BTreeMap<u32, usize> {
    let mut d = BTreeMap::new();
    for &(a, b) in es {
        *d.entry(a).or_default() += 1;
        *d.entry(b).or_default() += 1;
    }
    d
}

/// Smallest k such that repeatedly deleting a vertex of degree at most k
/// empties the graph.
pub fn brute_degeneracy(g: &Graph) -> usize {
    let es = pairs(g);
    (0..).find(|&k| {
        let mut left = es.clone();
        loop {
            if left.is_empty() {
                return true;
            }
            let d = degrees(&left);
            let Some((&v, _)) = d.iter().find(|&(_, &x)| x <= k) else {
                return false;
            };
            left.retain(|&(a, b)| a != v && b != v);
        }
    })
    .unwrap()
}

/// Largest number of degree-2 vertices adjacent to both a special vertex u
/// (nonisolated, at most two neighbors of degree above two) and some other w.
pub fn brute_capacity(g: &Graph) -> usize {
    let es = pairs(g);
    let adj = adjacency(&es);
    let deg = degrees(&es);
    let dg = |v: u32| deg.get(&v).copied().unwrap_or(0);
    let verts: Vec<u32> = deg.keys().copied().collect();
    let mut best = 0;
    for &u in &verts {
        let big = verts.iter().filter(|&&x| adj.contains(&(u, x)) && dg(x) > 2).count();
        if big > 2 {
            continue;
        }
        for &w in &verts {
            if w == u {
                continue;
            }
            let shared = verts
                .iter()
                .filter(|&&v| dg(v) == 2 && adj.contains(&(u, v)) && adj.contains(&(w, v)))
                .count();
            best = best.max(shared);
        }
    }
    best
}

pub fn graph(es: &[Pair]) -> Graph {
    Graph::from_edges(es.iter().copied(), &[]).unwrap()
}

pub fn v(i: u32) -> VertexId {
    VertexId(i)
}

pub fn e(a: u32, b: u32) -> Edge {
    Edge::new(VertexId(a), VertexId(b))
}

/// Random simple graph on up to `n` vertices with at most `m` edges, from a
/// list of candidate pairs.
pub fn from_candidates(n: u32, cands: &[Pair]) -> Graph {
    let mut seen = BTreeSet::new();
    let mut es = Vec::new();
    for &(a, b) in cands {
        let (a, b) = (a % n, b % n);
        if a != b && seen.insert((a.min(b), a.max(b))) {
            es.push((a, b));
        }
    }
    graph(&es)
}

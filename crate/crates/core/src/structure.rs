//! Structural queries: degeneracy, distance-two edge neighborhoods,
//! special vertices and the capacity of special vertices.
//!
//! Isolated vertices are ignored throughout.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneracy {
    pub k: usize,
    /// Elimination order: every vertex has at most `k` neighbors later in the order.
    pub order: Vec<VertexId>,
}

/// Min-degree peeling with a bucket queue; within a bucket the most
/// recently touched vertex goes first, which keeps the order deterministic.
pub fn degeneracy(g: &Graph) -> Degeneracy {
    let bound = g.id_bound();
    let mut deg: Vec<usize> = (0..bound).map(|i| g.degree(VertexId(i as u32))).collect();
    let mut gone = vec![true; bound];
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); g.max_degree() + 1];
    for v in g.vertices().filter(|&v| g.degree(v) > 0) {
        gone[v.index()] = false;
        buckets[deg[v.index()]].push(v);
    }
    let live = gone.iter().filter(|x| !**x).count();
    let mut order = Vec::with_capacity(live);
    let mut k = 0;
    let mut low = 0;
    while order.len() < live {
        // Entries are lazy: skip ones whose degree has since dropped.
        let Some(v) = buckets[low].pop() else {
            low += 1;
            continue;
        };
        if gone[v.index()] || deg[v.index()] != low {
            continue;
        }
        k = k.max(low);
        order.push(v);
        gone[v.index()] = true;
        for w in g.neighbors(v) {
            let i = w.index();
            if !gone[i] {
                deg[i] -= 1;
                buckets[deg[i]].push(w);
                low = low.min(deg[i]);
            }
        }
    }
    Degeneracy { k, order }
}

pub fn is_two_degenerate(g: &Graph) -> bool {
    degeneracy(g).k <= 2
}

/// Calls `f` on every edge with an endpoint adjacent to an endpoint of `e`,
/// other than `e` itself. Edges may be reported more than once.
pub(crate) fn for_each_n2(g: &Graph, e: Edge, mut f: impl FnMut(Edge)) {
    let [a, b] = e.endpoints();
    for x in g.neighbors(a).chain(g.neighbors(b)) {
        for y in g.neighbors(x) {
            let f_edge = Edge::new(x, y);
            if f_edge != e {
                f(f_edge);
            }
        }
    }
}

/// The conflict set of `e`: every edge `xy != e` with `x` or `y` adjacent to
/// an endpoint of `e`.
pub fn n2_edges(g: &Graph, e: Edge) -> Result<BTreeSet<Edge>, GraphError> {
    if !g.contains_edge(e) {
        return Err(GraphError::UnknownEdge(e));
    }
    let mut out = BTreeSet::new();
    for_each_n2(g, e, |f| {
        out.insert(f);
    });
    Ok(out)
}

pub(crate) fn n2_size(g: &Graph, e: Edge) -> usize {
    let mut out = BTreeSet::new();
    for_each_n2(g, e, |f| {
        out.insert(f);
    });
    out.len()
}

fn big_neighbor_count(g: &Graph, v: VertexId) -> usize {
    g.neighbors(v).filter(|&w| g.degree(w) > 2).count()
}

pub fn is_special(g: &Graph, v: VertexId) -> bool {
    g.degree(v) > 0 && big_neighbor_count(g, v) <= 2
}

/// Vertices with at most two neighbors of degree more than two.
pub fn special_vertices(g: &Graph) -> BTreeSet<VertexId> {
    g.vertices().filter(|&v| is_special(g, v)).collect()
}

/// For each vertex `w`, the degree-2 neighbors of `u` whose other neighbor is `w`.
fn shared_two_neighbors(g: &Graph, u: VertexId) -> BTreeMap<VertexId, Vec<VertexId>> {
    let mut by_sharer: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for v in g.neighbors(u) {
        if g.degree(v) != 2 {
            continue;
        }
        let w = g.neighbors(v).find(|&w| w != u).expect("degree-2 vertex");
        by_sharer.entry(w).or_default().push(v);
    }
    by_sharer
}

/// Largest number of common 2-neighbors between a special vertex and any
/// other vertex; zero when no special vertex has a degree-2 neighbor.
pub fn capacity(g: &Graph) -> usize {
    g.vertices()
        .filter(|&u| is_special(g, u))
        .flat_map(|u| shared_two_neighbors(g, u).into_values().map(|vs| vs.len()))
        .max()
        .unwrap_or(0)
}

/// One sharer `w` of the special vertex together with the 2-neighbors it
/// has in common with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub sharer: VertexId,
    pub members: Vec<VertexId>,
}

/// A special vertex `u` realizing the capacity, with its neighborhood split
/// into big neighbors (degree > 2), sharer groups, and leaves.
///
/// Groups are sorted by size, largest first, ties by sharer id; members are
/// sorted by id. `leaves` is empty whenever the caller has peeled pendant
/// edges at special vertices, which the reducer always does first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialContext {
    pub u: VertexId,
    pub big_neighbors: Vec<VertexId>,
    pub groups: Vec<Group>,
    pub leaves: Vec<VertexId>,
    /// Some sharer is also a big neighbor of `u`.
    pub overlap: bool,
}

impl SpecialContext {
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|gr| gr.members.len()).collect()
    }

    /// Size of the largest group, i.e. the capacity realized at `u`.
    pub fn t1(&self) -> usize {
        self.groups.first().map_or(0, |gr| gr.members.len())
    }

    pub fn sharers(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.groups.iter().map(|gr| gr.sharer)
    }

    /// Edges `u v_{i,j}` in group order.
    pub fn group_edges(&self) -> Vec<Edge> {
        self.groups
            .iter()
            .flat_map(|gr| gr.members.iter().map(|&v| Edge::new(self.u, v)))
            .collect()
    }

    pub fn big_edges(&self) -> Vec<Edge> {
        self.big_neighbors
            .iter()
            .map(|&b| Edge::new(self.u, b))
            .collect()
    }
}

fn context_at(g: &Graph, u: VertexId) -> SpecialContext {
    let big_neighbors: Vec<VertexId> = g.neighbors(u).filter(|&w| g.degree(w) > 2).collect();
    let leaves: Vec<VertexId> = g.leaf_neighbors(u).collect();
    let mut groups: Vec<Group> = shared_two_neighbors(g, u)
        .into_iter()
        .map(|(sharer, members)| Group { sharer, members })
        .collect();
    groups.sort_by(|a, b| {
        b.members
            .len()
            .cmp(&a.members.len())
            .then(a.sharer.cmp(&b.sharer))
    });
    let overlap = groups.iter().any(|gr| big_neighbors.contains(&gr.sharer));
    SpecialContext {
        u,
        big_neighbors,
        groups,
        leaves,
        overlap,
    }
}

/// The special vertex realizing the capacity, preferring smaller degree and
/// then smaller id. `None` when the capacity is zero.
pub fn capacity_context(g: &Graph) -> Option<SpecialContext> {
    let mut best: Option<(usize, usize, VertexId)> = None;
    for u in g.vertices().filter(|&u| is_special(g, u)) {
        let t1 = shared_two_neighbors(g, u)
            .values()
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        if t1 == 0 {
            continue;
        }
        let key = (t1, g.degree(u), u);
        let better = match best {
            None => true,
            Some((bt, bd, bu)) => t1 > bt || (t1 == bt && (key.1, u) < (bd, bu)),
        };
        if better {
            best = Some(key);
        }
    }
    best.map(|(_, _, u)| context_at(g, u))
}

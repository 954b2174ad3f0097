//! Mutable simple undirected graphs with stable vertex and edge identities.
//!
//! Vertex ids are never reused: removing a vertex leaves a tombstone, and
//! [`Graph::add_vertex`] always hands out the next unused slot. Edges are
//! identified by their normalized endpoint pair, so an [`Edge`] stays valid
//! for as long as both endpoints and the adjacency between them survive.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digest::Fnv64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", try_from = "[u32; 2]")]
pub struct Edge(VertexId, VertexId);

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "self-loop {a}-{b} is not an edge of a simple graph");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn try_new(a: VertexId, b: VertexId) -> Result<Self, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        Ok(Edge::new(a, b))
    }

    pub fn lo(self) -> VertexId {
        self.0
    }

    pub fn hi(self) -> VertexId {
        self.1
    }

    pub fn endpoints(self) -> [VertexId; 2] {
        [self.0, self.1]
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(self, v: VertexId) -> Option<VertexId> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }

    pub fn shares_endpoint(self, other: Edge) -> Option<VertexId> {
        self.endpoints().into_iter().find(|&v| other.contains(v))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl From<Edge> for [u32; 2] {
    fn from(e: Edge) -> Self {
        [e.0 .0, e.1 .0]
    }
}

impl TryFrom<[u32; 2]> for Edge {
    type Error = GraphError;

    fn try_from(pair: [u32; 2]) -> Result<Self, Self::Error> {
        Edge::try_new(VertexId(pair[0]), VertexId(pair[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Option<BTreeSet<VertexId>>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph on vertices `0..n` with no edges.
    pub fn with_vertices(n: usize) -> Self {
        Graph {
            adj: vec![Some(BTreeSet::new()); n],
            edge_count: 0,
        }
    }

    /// Builds a simple graph from a list of pairs, deduplicating repeats.
    /// Vertices listed in `isolated` are created even if no edge touches them.
    pub fn from_edges<I>(pairs: I, isolated: &[u32]) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut g = Graph::new();
        for &v in isolated {
            g.ensure_vertex(VertexId(v));
        }
        for (a, b) in pairs {
            let (a, b) = (VertexId(a), VertexId(b));
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            g.ensure_vertex(a);
            g.ensure_vertex(b);
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Appends a fresh vertex. Ids of removed vertices are never handed out again.
    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.adj.len() as u32);
        self.adj.push(Some(BTreeSet::new()));
        id
    }

    /// Makes `v` a live vertex, growing the id space as needed.
    pub fn ensure_vertex(&mut self, v: VertexId) {
        if v.index() >= self.adj.len() {
            self.adj.resize(v.index() + 1, None);
        }
        if self.adj[v.index()].is_none() {
            self.adj[v.index()] = Some(BTreeSet::new());
        }
    }

    /// Removes `v` together with its incident edges, returning those edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<Vec<Edge>, GraphError> {
        let nbrs: Vec<VertexId> = self.nbr_set(v)?.iter().copied().collect();
        let mut removed = Vec::with_capacity(nbrs.len());
        for w in nbrs {
            let e = Edge::new(v, w);
            self.remove_edge(e)?;
            removed.push(e);
        }
        self.adj[v.index()] = None;
        Ok(removed)
    }

    /// Inserts the edge `ab`; returns `false` if it was already present.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<bool, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.nbr_set(a)?;
        self.nbr_set(b)?;
        let fresh = self.adj[a.index()].as_mut().unwrap().insert(b);
        if fresh {
            self.adj[b.index()].as_mut().unwrap().insert(a);
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        if !self.contains_edge(e) {
            return Err(GraphError::UnknownEdge(e));
        }
        let [a, b] = e.endpoints();
        self.adj[a.index()].as_mut().unwrap().remove(&b);
        self.adj[b.index()].as_mut().unwrap().remove(&a);
        self.edge_count -= 1;
        Ok(())
    }

    fn nbr_set(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj
            .get(v.index())
            .and_then(Option::as_ref)
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.nbr_set(v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.nbr_set(e.lo()).is_ok_and(|n| n.contains(&e.hi()))
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.nbr_set(a).is_ok_and(|n| n.contains(&b))
    }

    /// Degree of `v`; zero for ids that are not live.
    pub fn degree(&self, v: VertexId) -> usize {
        self.nbr_set(v).map_or(0, BTreeSet::len)
    }

    /// Neighbors of `v` in increasing id order (empty for dead ids).
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.nbr_set(v).into_iter().flatten().copied()
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = Edge> + '_ {
        self.neighbors(v).map(move |w| Edge::new(v, w))
    }

    /// Live vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_some())
            .map(|(i, _)| VertexId(i as u32))
    }

    /// Edges in lexicographic order of their normalized endpoints.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |v| {
            self.neighbors(v)
                .filter(move |&w| w > v)
                .map(move |w| Edge::new(v, w))
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.iter().filter(|a| a.is_some()).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// One past the largest id ever allocated.
    pub fn id_bound(&self) -> usize {
        self.adj.len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj
            .iter()
            .flatten()
            .map(BTreeSet::len)
            .max()
            .unwrap_or(0)
    }

    /// Number of vertices of degree at least two: the quantity every
    /// non-trivial reduction step must shrink.
    pub fn measure(&self) -> usize {
        self.adj.iter().flatten().filter(|n| n.len() >= 2).count()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v) == 1
    }

    /// Neighbors of `v` that are leaves.
    pub fn leaf_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors(v).filter(move |&w| self.is_leaf(w))
    }

    /// Stable digest of the live vertex set and edge set.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv64::new();
        for v in self.vertices() {
            h.write_u32(v.0);
        }
        h.write_u32(u32::MAX);
        for e in self.edges() {
            h.write_u32(e.lo().0);
            h.write_u32(e.hi().0);
        }
        h.finish()
    }
}

//! Partial strong edge-colorings, availability queries, the validity
//! checker and the greedy baseline.
//!
//! Colors are positive integers. A coloring does not carry its palette:
//! the reducer may spill past `K` when an extension step runs dry, and the
//! budget is judged on the result.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digest::Fnv64;
use crate::graph::{Edge, Graph, VertexId};
use crate::structure::for_each_n2;

pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("edge {0} is already colored")]
    AlreadyColored(Edge),
    #[error("edge {0} is not colored")]
    Uncolored(Edge),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("color 0 is not a color; colors start at 1")]
    ZeroColor,
    #[error("order is not a permutation of the edge set ({0})")]
    BadOrder(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: BTreeMap<Edge, Color>,
}

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, e: Edge) -> Option<Color> {
        self.colors.get(&e).copied()
    }

    pub fn is_colored(&self, e: Edge) -> bool {
        self.colors.contains_key(&e)
    }

    /// Assigns `color` to `e`, returning the previous color.
    pub fn set(&mut self, e: Edge, color: Color) -> Result<Option<Color>, ColoringError> {
        if color == 0 {
            return Err(ColoringError::ZeroColor);
        }
        Ok(self.colors.insert(e, color))
    }

    pub fn unset(&mut self, e: Edge) -> Option<Color> {
        self.colors.remove(&e)
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, Color)> + '_ {
        self.colors.iter().map(|(&e, &c)| (e, c))
    }

    /// Largest color in use (0 when empty). With least-available choices this
    /// is the palette span the coloring needs.
    pub fn max_color(&self) -> Color {
        self.colors.values().copied().max().unwrap_or(0)
    }

    pub fn distinct_colors(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    /// Renames the colors in use to `1..=k`, keeping their order. Color
    /// classes are unchanged, so validity is preserved.
    pub fn compacted(&self) -> Coloring {
        let used: BTreeSet<Color> = self.colors.values().copied().collect();
        let rank: BTreeMap<Color, Color> = used.into_iter().zip(1..).collect();
        Coloring {
            colors: self.colors.iter().map(|(&e, c)| (e, rank[c])).collect(),
        }
    }

    /// First edge of `g` left uncolored, if any.
    pub fn first_uncolored(&self, g: &Graph) -> Option<Edge> {
        g.edges().find(|&e| !self.is_colored(e))
    }

    /// Drops colors on edges that are not in `g`.
    pub fn retain_graph(&mut self, g: &Graph) {
        self.colors.retain(|&e, _| g.contains_edge(e));
    }

    /// Exchanges the colors of two colored edges in place. No validity check.
    pub fn swap(&mut self, a: Edge, b: Edge) -> Result<(), ColoringError> {
        let ca = self.get(a).ok_or(ColoringError::Uncolored(a))?;
        let cb = self.get(b).ok_or(ColoringError::Uncolored(b))?;
        self.colors.insert(a, cb);
        self.colors.insert(b, ca);
        Ok(())
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv64::new();
        for (e, c) in self.iter() {
            h.write_u32(e.lo().0);
            h.write_u32(e.hi().0);
            h.write_u32(c);
        }
        h.finish()
    }
}

impl FromIterator<(Edge, Color)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (Edge, Color)>>(iter: I) -> Self {
        Coloring {
            colors: iter.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }
}

/// Returns a copy of `c` with the colors of `a` and `b` exchanged.
pub fn swap_colors(c: &Coloring, a: Edge, b: Edge) -> Result<Coloring, ColoringError> {
    let mut out = c.clone();
    out.swap(a, b)?;
    Ok(out)
}

/// Why two edges may not share a color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    SharedEndpoint(VertexId),
    /// An endpoint of the first edge adjacent to an endpoint of the second.
    AdjacentEndpoints(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub first: Edge,
    pub second: Edge,
    pub color: Color,
    pub witness: Witness,
}

impl Violation {
    /// Re-checks the witness against `g`.
    pub fn holds_in(&self, g: &Graph) -> bool {
        if !(g.contains_edge(self.first) && g.contains_edge(self.second)) {
            return false;
        }
        match self.witness {
            Witness::SharedEndpoint(v) => self.first.contains(v) && self.second.contains(v),
            Witness::AdjacentEndpoints(x, y) => {
                self.first.contains(x) && self.second.contains(y) && g.is_adjacent(x, y)
            }
        }
    }
}

/// The reason `a` and `b` conflict in `g`, or `None` if they may share a color.
pub fn conflict_witness(g: &Graph, a: Edge, b: Edge) -> Option<Witness> {
    if a == b {
        return None;
    }
    if let Some(v) = a.shares_endpoint(b) {
        return Some(Witness::SharedEndpoint(v));
    }
    for x in a.endpoints() {
        for y in b.endpoints() {
            if g.is_adjacent(x, y) {
                return Some(Witness::AdjacentEndpoints(x, y));
            }
        }
    }
    None
}

/// Colors on the colored part of the conflict set of `e`.
pub fn blocked_colors(g: &Graph, c: &Coloring, e: Edge) -> BTreeSet<Color> {
    let mut out = BTreeSet::new();
    for_each_n2(g, e, |f| {
        if let Some(col) = c.get(f) {
            out.insert(col);
        }
    });
    out
}

/// Smallest positive color not blocked at `e`; may exceed any palette.
pub fn least_available(g: &Graph, c: &Coloring, e: Edge) -> Color {
    let blocked = blocked_colors(g, c, e);
    (1..).find(|x| !blocked.contains(x)).unwrap()
}

/// `[1..=palette]` minus the colors on the conflict set of the uncolored edge `e`.
pub fn available_colors(
    g: &Graph,
    c: &Coloring,
    e: Edge,
    palette: Color,
) -> Result<Vec<Color>, ColoringError> {
    if !g.contains_edge(e) {
        return Err(ColoringError::UnknownEdge(e));
    }
    if c.is_colored(e) {
        return Err(ColoringError::AlreadyColored(e));
    }
    let blocked = blocked_colors(g, c, e);
    Ok((1..=palette).filter(|x| !blocked.contains(x)).collect())
}

/// Checks that every color class of the total coloring `c` is an induced
/// matching of `g`. Reports the lexicographically first offending pair.
pub fn verify_strong(g: &Graph, c: &Coloring) -> Result<Result<(), Violation>, ColoringError> {
    if let Some(e) = c.first_uncolored(g) {
        return Err(ColoringError::Uncolored(e));
    }
    for e in g.edges() {
        let ce = c.get(e).unwrap();
        let mut clash: Option<Edge> = None;
        for_each_n2(g, e, |f| {
            if f > e && c.get(f) == Some(ce) && clash.is_none_or(|x| f < x) {
                clash = Some(f);
            }
        });
        if let Some(f) = clash {
            let witness = conflict_witness(g, e, f).expect("conflict set member");
            return Ok(Err(Violation {
                first: e,
                second: f,
                color: ce,
                witness,
            }));
        }
    }
    Ok(Ok(()))
}

/// Checks only the edges of `edges` against their conflict sets; colored
/// neighbors are compared, uncolored ones ignored.
pub fn locally_valid(g: &Graph, c: &Coloring, edges: &[Edge]) -> bool {
    edges.iter().all(|&e| match c.get(e) {
        None => true,
        Some(ce) => !blocked_colors(g, c, e).contains(&ce),
    })
}

/// Colors edges in `order`, each with the least color absent from its
/// colored conflict set.
pub fn greedy_color(g: &Graph, order: &[Edge]) -> Result<Coloring, ColoringError> {
    let set: BTreeSet<Edge> = order.iter().copied().collect();
    if set.len() != order.len() || set.len() != g.edge_count() {
        return Err(ColoringError::BadOrder(format!(
            "{} entries, {} distinct, graph has {} edges",
            order.len(),
            set.len(),
            g.edge_count()
        )));
    }
    if let Some(&e) = set.iter().find(|&&e| !g.contains_edge(e)) {
        return Err(ColoringError::UnknownEdge(e));
    }
    let mut c = Coloring::new();
    for &e in order {
        let col = least_available(g, &c, e);
        c.set(e, col)?;
    }
    Ok(c)
}

/// Greedy coloring in the graph's natural edge order.
pub fn greedy_color_default(g: &Graph) -> Coloring {
    let order: Vec<Edge> = g.edges().collect();
    greedy_color(g, &order).expect("natural order is a permutation")
}

/// `2 Delta (Delta - 1) + 1`, the greedy guarantee.
pub fn greedy_bound(max_degree: usize) -> usize {
    2 * max_degree * max_degree.saturating_sub(1) + 1
}

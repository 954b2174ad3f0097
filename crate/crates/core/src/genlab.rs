//! Seeded graph generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so the same
//! `GenSpec` gives the same edge list on every platform.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::class::class_check;
use crate::graph::{Graph, VertexId};
use crate::params::Params;
use crate::structure::{capacity_context, is_two_degenerate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator input: {0}")]
    Input(String),
    #[error("generated graph failed its own check: {0}")]
    Check(String),
}

fn input<T>(msg: impl Into<String>) -> Result<T, GenError> {
    Err(GenError::Input(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenModel {
    Random2Deg,
    Named,
    ClassInstance,
}

impl FromStr for GenModel {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        match s {
            "random2deg" | "random" => Ok(GenModel::Random2Deg),
            "named" => Ok(GenModel::Named),
            "class" | "class-instance" => Ok(GenModel::ClassInstance),
            _ => input(format!("unknown model {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Case1Rich,
    Case2Rich,
}

impl FromStr for Regime {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        match s.to_ascii_lowercase().as_str() {
            "case1" | "case1rich" | "case1-rich" => Ok(Regime::Case1Rich),
            "case2" | "case2rich" | "case2-rich" => Ok(Regime::Case2Rich),
            _ => input(format!("unknown regime {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedKind {
    Path,
    Cycle,
    Star,
    K2n,
    Theta,
    Book,
    Matching,
}

impl FromStr for NamedKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        Ok(match s {
            "path" => NamedKind::Path,
            "cycle" => NamedKind::Cycle,
            "star" => NamedKind::Star,
            "k2n" => NamedKind::K2n,
            "theta" => NamedKind::Theta,
            "book" => NamedKind::Book,
            "matching" => NamedKind::Matching,
            _ => return input(format!("unknown graph kind {s:?}")),
        })
    }
}

impl fmt::Display for NamedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NamedKind::Path => "path",
            NamedKind::Cycle => "cycle",
            NamedKind::Star => "star",
            NamedKind::K2n => "k2n",
            NamedKind::Theta => "theta",
            NamedKind::Book => "book",
            NamedKind::Matching => "matching",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub model: GenModel,
    pub n: usize,
    /// Edge count, for the random model.
    pub m: Option<usize>,
    pub seed: u64,
    pub kind: Option<NamedKind>,
    pub regime: Option<Regime>,
    pub params: Option<Params>,
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    match spec.model {
        GenModel::Random2Deg => {
            let m = spec.m.unwrap_or(if spec.n >= 2 { 2 * spec.n - 3 } else { 0 });
            gen_random_2deg(spec.n, m, spec.seed)
        }
        GenModel::Named => match spec.kind {
            Some(k) => gen_named(k, spec.n),
            None => input("named model needs a kind"),
        },
        GenModel::ClassInstance => match (&spec.params, spec.regime) {
            (Some(p), Some(r)) => gen_class_instance(p, r, spec.n, spec.seed),
            _ => input("class model needs params and a regime"),
        },
    }
}

/// Most edges a 2-degenerate graph on `n` vertices can have.
pub fn max_two_degenerate_edges(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        _ => 2 * n - 3,
    }
}

/// Random 2-degenerate graph: vertex `i` joins at most `min(i, 2)` earlier
/// vertices. The `m` attachment slots are drawn uniformly from all of them.
pub fn gen_random_2deg(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    let cap = max_two_degenerate_edges(n);
    if m > cap {
        return input(format!("{m} edges impossible on {n} vertices (at most {cap})"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<usize> = (1..n).flat_map(|i| std::iter::repeat_n(i, i.min(2))).collect();
    slots.shuffle(&mut rng);
    let mut want = vec![0usize; n];
    for &i in &slots[..m] {
        want[i] += 1;
    }
    let mut g = Graph::with_vertices(n);
    for (i, &k) in want.iter().enumerate() {
        for j in sample(&mut rng, i, k).into_iter() {
            g.add_edge(vid(i), vid(j)).expect("distinct vertices");
        }
    }
    Ok(g)
}

fn vid(i: usize) -> VertexId {
    VertexId(u32::try_from(i).expect("vertex id fits in u32"))
}

pub fn gen_named(kind: NamedKind, n: usize) -> Result<Graph, GenError> {
    let pairs: Vec<(u32, u32)> = match kind {
        NamedKind::Path => {
            if n == 0 {
                return input("path needs at least one vertex");
            }
            (1..n as u32).map(|i| (i - 1, i)).collect()
        }
        NamedKind::Cycle => {
            if n < 3 {
                return input("cycle needs at least 3 vertices");
            }
            (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect()
        }
        NamedKind::Star => (1..=n as u32).map(|i| (0, i)).collect(),
        // Poles 0 and 1, the rest adjacent to both.
        NamedKind::K2n | NamedKind::Book => {
            let mut ps: Vec<(u32, u32)> = (2..n as u32 + 2).flat_map(|i| [(0, i), (1, i)]).collect();
            if kind == NamedKind::Book {
                ps.push((0, 1));
            }
            ps
        }
        // Three internally disjoint paths of length n between 0 and 1.
        NamedKind::Theta => {
            if n < 2 {
                return input("theta paths need length at least 2");
            }
            let mut ps = Vec::new();
            let mut next = 2u32;
            for _ in 0..3 {
                let mut prev = 0;
                for _ in 0..n - 1 {
                    ps.push((prev, next));
                    prev = next;
                    next += 1;
                }
                ps.push((prev, 1));
            }
            ps
        }
        NamedKind::Matching => (0..n as u32).map(|i| (2 * i, 2 * i + 1)).collect(),
    };
    let isolated: &[u32] = if kind == NamedKind::Path && n == 1 { &[0] } else { &[] };
    Ok(Graph::from_edges(pairs, isolated).expect("no self-loops"))
}

/// Skeleton size used for corpus seed `seed` at degree bound `d`; always
/// in `[10, 200]`.
pub fn corpus_size(seed: u64, d: u32) -> usize {
    10 + ((seed % 191) as usize * 7919 + d as usize) % 191
}

/// Graph in the class for `p`, shaped so the reduction meets many contexts
/// of the requested regime. `n` is the size of the random skeleton; planted
/// sites and hub leaves come on top of it.
pub fn gen_class_instance(p: &Params, regime: Regime, n: usize, seed: u64) -> Result<Graph, GenError> {
    let tau_ceil = p.tau_ceil() as usize;
    if regime == Regime::Case1Rich && tau_ceil <= 1 {
        return input(format!(
            "Case1Rich needs tau > 1, but tau = {:.4} for D = {}, eps = {}",
            p.tau(),
            p.d(),
            p.eps()
        ));
    }
    if n < 3 {
        return input("class instances need a skeleton of at least 3 vertices");
    }
    let d = p.d() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::with_vertices(n);

    // Skeleton: each vertex joins up to two earlier vertices with room below D.
    for i in 1..n {
        let room: Vec<usize> = (0..i).filter(|&j| g.degree(vid(j)) < d).collect();
        let k = rng.gen_range(1..=2).min(room.len());
        for j in sample(&mut rng, room.len(), k).into_iter() {
            g.add_edge(vid(i), vid(room[j])).unwrap();
        }
    }

    let sites = (n / 20).max(3);
    for _ in 0..sites {
        match regime {
            Regime::Case2Rich => {
                let t = tau_ceil + rng.gen_range(0..=1);
                plant_site(&mut g, &mut rng, d, &[t]);
            }
            Regime::Case1Rich => {
                let s = rng.gen_range(2..=4);
                let sizes: Vec<usize> = (0..s).map(|_| rng.gen_range(1..tau_ceil)).collect();
                plant_site(&mut g, &mut rng, d, &sizes);
            }
        }
    }

    if regime == Regime::Case1Rich {
        // Break up any shared pair that reaches tau; capacity never grows by this.
        while let Some(ctx) = capacity_context(&g) {
            if !p.reaches_tau(ctx.t1()) {
                break;
            }
            let v = ctx.groups[0].members[0];
            let leaf = g.add_vertex();
            g.add_edge(v, leaf).unwrap();
        }
    }

    // Hubs over D, carrying the leaves the class requires.
    let extra_max = match regime {
        Regime::Case2Rich => 2,
        Regime::Case1Rich => p.tau_floor() as usize,
    };
    let hubs = n / 25 + 1;
    for _ in 0..hubs {
        let cands: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) <= d && g.degree(v) >= 2).collect();
        if cands.is_empty() || extra_max == 0 {
            break;
        }
        let h = cands[rng.gen_range(0..cands.len())];
        let target = d + rng.gen_range(1..=extra_max);
        while g.degree(h) < target {
            let leaf = g.add_vertex();
            g.add_edge(h, leaf).unwrap();
        }
    }

    if !is_two_degenerate(&g) {
        return Err(GenError::Check("not 2-degenerate".into()));
    }
    let report = class_check(&g, p);
    if !report.in_class {
        return Err(GenError::Check(report.reasons.join("; ")));
    }
    Ok(g)
}

/// A fresh special vertex `u` tied to one or two skeleton anchors, sharing
/// `sizes[i]` new degree-2 vertices with a distinct skeleton sharer each.
fn plant_site(g: &mut Graph, rng: &mut ChaCha8Rng, d: usize, sizes: &[usize]) {
    let skeleton: Vec<VertexId> = g.vertices().collect();
    let u = g.add_vertex();
    let mut used = vec![u];
    for &t in sizes {
        let cands: Vec<VertexId> = skeleton
            .iter()
            .copied()
            .filter(|w| g.degree(*w) + t <= d && !used.contains(w))
            .collect();
        if cands.is_empty() {
            continue;
        }
        let w = cands[rng.gen_range(0..cands.len())];
        used.push(w);
        for _ in 0..t {
            let v = g.add_vertex();
            g.add_edge(u, v).unwrap();
            g.add_edge(w, v).unwrap();
        }
    }
    let anchors: Vec<VertexId> = skeleton
        .iter()
        .copied()
        .filter(|a| g.degree(*a) < d && !used.contains(a))
        .collect();
    let k = rng.gen_range(1..=2).min(anchors.len());
    for j in sample(rng, anchors.len(), k).into_iter() {
        if g.degree(u) < d {
            g.add_edge(u, anchors[j]).unwrap();
        }
    }
}

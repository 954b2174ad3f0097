//! Edge-list and coloring file formats.
//!
//! Edge list: one edge per line as two whitespace-separated vertex tokens,
//! `#` starts a comment, and an optional `v <count>` line declares vertices
//! `0..count` so isolated ones survive. When every token is a number the
//! numbers are the vertex ids; otherwise tokens are names, numbered in order
//! of first appearance. Coloring file: `<u> <v> <color>` per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use strongcolor::coloring::{Color, Coloring};
use strongcolor::graph::{Edge, Graph, VertexId};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

fn at<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Line {
        line,
        msg: msg.into(),
    })
}

/// Lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub graph: Graph,
    names: BTreeMap<String, VertexId>,
    labels: BTreeMap<VertexId, String>,
}

impl EdgeList {
    pub fn label(&self, v: VertexId) -> String {
        self.labels.get(&v).cloned().unwrap_or_else(|| v.0.to_string())
    }

    pub fn lookup(&self, tok: &str) -> Option<VertexId> {
        self.names.get(tok).copied()
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList, ParseError> {
    let mut declared: Option<u32> = None;
    let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
    for (line, toks) in content_lines(text) {
        match toks.as_slice() {
            ["v", count] => {
                if declared.is_some() || !pairs.is_empty() {
                    return at(line, "the `v` header must come first and only once");
                }
                match count.parse() {
                    Ok(c) => declared = Some(c),
                    Err(_) => return at(line, format!("bad vertex count {count:?}")),
                }
            }
            [a, b] => pairs.push((line, a, b)),
            _ => return at(line, format!("expected two vertex tokens, found {}", toks.len())),
        }
    }
    let numeric = pairs
        .iter()
        .all(|(_, a, b)| a.parse::<u32>().is_ok() && b.parse::<u32>().is_ok());
    let mut names: BTreeMap<String, VertexId> = BTreeMap::new();
    let mut labels: BTreeMap<VertexId, String> = BTreeMap::new();
    let mut graph = Graph::new();
    for i in 0..declared.unwrap_or(0) {
        let v = VertexId(i);
        graph.ensure_vertex(v);
        if numeric {
            names.insert(i.to_string(), v);
            labels.insert(v, i.to_string());
        }
    }
    let mut next = declared.unwrap_or(0);
    for (line, a, b) in pairs {
        let mut id = |tok: &str| -> VertexId {
            if let Some(&v) = names.get(tok) {
                return v;
            }
            let v = if numeric {
                VertexId(tok.parse().unwrap())
            } else {
                next += 1;
                VertexId(next - 1)
            };
            names.insert(tok.to_string(), v);
            labels.insert(v, tok.to_string());
            v
        };
        let (u, v) = (id(a), id(b));
        if u == v {
            return at(line, format!("self-loop at {a}"));
        }
        graph.ensure_vertex(u);
        graph.ensure_vertex(v);
        if !graph.add_edge(u, v).expect("vertices exist") {
            return at(line, format!("duplicate edge {a} {b}"));
        }
    }
    Ok(EdgeList {
        graph,
        names,
        labels,
    })
}

/// Writes `g` with numeric ids and a `v` header covering every vertex.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "v {}", g.id_bound()).unwrap();
    for e in g.edges() {
        writeln!(out, "{} {}", e.lo(), e.hi()).unwrap();
    }
    out
}

pub fn parse_coloring(text: &str, el: &EdgeList) -> Result<Coloring, ParseError> {
    let mut c = Coloring::new();
    for (line, toks) in content_lines(text) {
        let [a, b, col] = toks.as_slice() else {
            return at(line, format!("expected `u v color`, found {} tokens", toks.len()));
        };
        let (Some(u), Some(v)) = (el.lookup(a), el.lookup(b)) else {
            return at(line, format!("unknown vertex in {a} {b}"));
        };
        let Ok(e) = Edge::try_new(u, v) else {
            return at(line, format!("self-loop at {a}"));
        };
        if !el.graph.contains_edge(e) {
            return at(line, format!("{a} {b} is not an edge of the graph"));
        }
        let col: Color = match col.parse() {
            Ok(x) if x > 0 => x,
            _ => return at(line, format!("bad color {col:?}")),
        };
        if c.set(e, col).expect("positive").is_some() {
            return at(line, format!("edge {a} {b} colored twice"));
        }
    }
    Ok(c)
}

pub fn write_coloring(c: &Coloring, el: &EdgeList) -> String {
    let mut out = String::new();
    for (e, col) in c.iter() {
        writeln!(out, "{} {} {col}", el.label(e.lo()), el.label(e.hi())).unwrap();
    }
    out
}

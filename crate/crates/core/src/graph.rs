use std::fmt::Write as _;

use thiserror::Error;

use crate::connectivity::{self, Adjacency};
use crate::weight::{Scalar, Weight};

/// An undirected edge carrying one weight per direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub u: usize,
    pub v: usize,
    pub w_uv: Weight<T>,
    pub w_vu: Weight<T>,
}

impl<T: Scalar> Edge<T> {
    pub fn undirected(u: usize, v: usize, w: T) -> Self {
        Edge { u, v, w_uv: Weight::Finite(w), w_vu: Weight::Finite(w) }
    }

    pub fn directed(u: usize, v: usize, w_uv: Weight<T>, w_vu: Weight<T>) -> Self {
        Edge { u, v, w_uv, w_vu }
    }

    /// Weight of traversing the edge starting at `from`.
    pub fn weight_from(&self, from: usize) -> Weight<T> {
        if from == self.u {
            self.w_uv
        } else {
            self.w_vu
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} is a self loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge} has a negative weight")]
    NegativeWeight { edge: usize },
    #[error("edge {edge} has different weights per direction in undirected mode")]
    Asymmetric { edge: usize },
    #[error("graph is not connected (vertex {vertex} unreachable from vertex 1)")]
    Disconnected { vertex: usize },
    #[error("graph must have at least one vertex")]
    Empty,
}

/// Weighted multigraph with a set of beer vertices.
///
/// Vertices are `0..n` in the API; the text format is 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct BeerGraph<T> {
    n: usize,
    edges: Vec<Edge<T>>,
    beer: Vec<bool>,
    directed: bool,
}

impl<T: Scalar> BeerGraph<T> {
    pub fn new(
        n: usize,
        edges: Vec<Edge<T>>,
        beer_vertices: &[usize],
        directed: bool,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for (i, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { edge: i, vertex: e.u + 1 });
            }
            for w in [e.w_uv, e.w_vu] {
                if let Weight::Finite(x) = w {
                    if x < T::zero() {
                        return Err(GraphError::NegativeWeight { edge: i });
                    }
                }
            }
            if !directed && e.w_uv != e.w_vu {
                return Err(GraphError::Asymmetric { edge: i });
            }
        }
        let mut beer = vec![false; n];
        for &b in beer_vertices {
            if b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: b + 1, n });
            }
            beer[b] = true;
        }
        let g = BeerGraph { n, edges, beer, directed };
        if let Some(v) = g.unreachable_vertex() {
            return Err(GraphError::Disconnected { vertex: v + 1 });
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge<T> {
        &self.edges[i]
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_beer(&self, v: usize) -> bool {
        self.beer[v]
    }

    pub fn beer_mask(&self) -> &[bool] {
        &self.beer
    }

    pub fn beer_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.beer[v]).collect()
    }

    pub fn endpoints(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub(crate) fn adjacency(&self) -> Adjacency {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    fn unreachable_vertex(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    /// An articulation vertex of the underlying undirected multigraph.
    pub fn articulation_vertex(&self) -> Option<usize> {
        connectivity::find_articulation(&self.adjacency(), 0)
    }

    /// Parses the text format described in the README.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: &str| GraphError::Parse { line, msg: msg.to_string() };

        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header `n m mode`"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(perr(hl, "header must be `n m mode`"));
        }
        let n: usize = h[0].parse().map_err(|_| perr(hl, "invalid vertex count"))?;
        let m: usize = h[1].parse().map_err(|_| perr(hl, "invalid edge count"))?;
        let directed = match h[2] {
            "U" | "u" => false,
            "D" | "d" => true,
            _ => return Err(perr(hl, "mode must be U or D")),
        };
        let vertex = |line: usize, tok: &str| -> Result<usize, GraphError> {
            let v: usize = tok.parse().map_err(|_| perr(line, &format!("invalid vertex `{tok}`")))?;
            if v == 0 || v > n {
                return Err(perr(line, &format!("vertex {v} out of range 1..={n}")));
            }
            Ok(v - 1)
        };
        let weight = |line: usize, tok: &str| -> Result<Weight<T>, GraphError> {
            Weight::parse(tok).ok_or_else(|| perr(line, &format!("invalid weight `{tok}`")))
        };

        let mut edges = Vec::with_capacity(m);
        for k in 0..m {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| perr(hl, &format!("expected {m} edge lines, found {k}")))?;
            let t: Vec<&str> = l.split_whitespace().collect();
            let want = if directed { 4 } else { 3 };
            if t.len() != want || t[0] == "B" {
                let shape = if directed { "`u v w_uv w_vu`" } else { "`u v w`" };
                return Err(perr(ln, &format!("edge line must be {shape}")));
            }
            let (u, v) = (vertex(ln, t[0])?, vertex(ln, t[1])?);
            if u == v {
                return Err(perr(ln, "self loops are not allowed"));
            }
            let w_uv = weight(ln, t[2])?;
            let w_vu = if directed { weight(ln, t[3])? } else { w_uv };
            for w in [w_uv, w_vu] {
                if matches!(w, Weight::Finite(x) if x < T::zero()) {
                    return Err(perr(ln, "negative weight"));
                }
            }
            edges.push(Edge { u, v, w_uv, w_vu });
        }

        let (bl, bline) = lines.next().ok_or_else(|| perr(hl, "missing beer line `B k b1 .. bk`"))?;
        let t: Vec<&str> = bline.split_whitespace().collect();
        if t.first() != Some(&"B") || t.len() < 2 {
            return Err(perr(bl, "beer line must be `B k b1 .. bk`"));
        }
        let k: usize = t[1].parse().map_err(|_| perr(bl, "invalid beer count"))?;
        if t.len() != k + 2 {
            return Err(perr(bl, &format!("beer line lists {} vertices, header says {k}", t.len() - 2)));
        }
        let beer = t[2..].iter().map(|tok| vertex(bl, tok)).collect::<Result<Vec<_>, _>>()?;
        if let Some((ln, _)) = lines.next() {
            return Err(perr(ln, "unexpected content after beer line"));
        }
        BeerGraph::new(n, edges, &beer, directed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mode = if self.directed { 'D' } else { 'U' };
        let _ = writeln!(s, "{} {} {}", self.n, self.m(), mode);
        for e in &self.edges {
            if self.directed {
                let _ = writeln!(s, "{} {} {} {}", e.u + 1, e.v + 1, e.w_uv, e.w_vu);
            } else {
                let _ = writeln!(s, "{} {} {}", e.u + 1, e.v + 1, e.w_uv);
            }
        }
        let b = self.beer_vertices();
        let _ = write!(s, "B {}", b.len());
        for v in b {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
        s
    }
}

/// Whether the underlying multigraph has at least two vertices, is connected
/// and has no articulation vertex. Parallel edges count as a cycle.
pub fn validate_biconnected<T: Scalar>(g: &BeerGraph<T>) -> bool {
    g.n() >= 2 && g.articulation_vertex().is_none()
}

/// Weight domain detected from a graph file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Integer,
    Real,
}

/// Reports `Real` if any weight token is not an integer (or `inf`).
pub fn detect_weight_kind(text: &str) -> WeightKind {
    let mut rows = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let directed = rows
        .next()
        .and_then(|h| h.split_whitespace().nth(2))
        .map(|m| m.eq_ignore_ascii_case("d"))
        .unwrap_or(false);
    for row in rows {
        let t: Vec<&str> = row.split_whitespace().collect();
        if t.first() == Some(&"B") {
            break;
        }
        let ws = if directed { t.iter().skip(2).take(2) } else { t.iter().skip(2).take(1) };
        for tok in ws {
            if !tok.eq_ignore_ascii_case("inf") && tok.parse::<i64>().is_err() {
                return WeightKind::Real;
            }
        }
    }
    WeightKind::Integer
}

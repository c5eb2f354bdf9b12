use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::BeerGraph;
use crate::weight::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum TdError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("decomposition has no bags")]
    Empty,
    #[error("bag tree is not a tree: {0}")]
    NotATree(String),
    #[error("vertex {vertex} lies in no bag")]
    VertexNotCovered { vertex: usize },
    #[error("edge {edge} ({u}, {v}) lies in no bag")]
    EdgeNotCovered { edge: usize, u: usize, v: usize },
    #[error("bags containing vertex {vertex} are not connected")]
    VertexBagsDisconnected { vertex: usize },
    #[error("decomposition is for {found} vertices, graph has {expected}")]
    VertexCount { found: usize, expected: usize },
}

/// A rooted tree decomposition; bag 0 is the root.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeDecomposition {
    /// Sorted vertex lists.
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    /// Roots an unrooted bag tree at bag 0.
    pub fn from_edges(bags: Vec<Vec<usize>>, edges: &[(usize, usize)]) -> Result<Self, TdError> {
        let nb = bags.len();
        if nb == 0 {
            return Err(TdError::Empty);
        }
        if edges.len() != nb - 1 {
            return Err(TdError::NotATree(format!("{} bags need {} tree edges, found {}", nb, nb - 1, edges.len())));
        }
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in edges {
            if a >= nb || b >= nb {
                return Err(TdError::NotATree(format!("edge mentions bag {} of {nb}", a.max(b) + 1)));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; nb];
        let mut seen = vec![false; nb];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        if let Some(b) = seen.iter().position(|&s| !s) {
            return Err(TdError::NotATree(format!("bag {} is unreachable from bag 1", b + 1)));
        }
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Ok(TreeDecomposition { bags, parent })
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (b, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(b);
            }
        }
        ch
    }

    /// Checks coverage of vertices and edges and connectivity of every
    /// vertex's bags.
    pub fn validate<T: Scalar>(&self, g: &BeerGraph<T>) -> Result<(), TdError> {
        let n = g.n();
        for b in &self.bags {
            if let Some(&v) = b.iter().find(|&&v| v >= n) {
                return Err(TdError::VertexCount { found: v + 1, expected: n });
            }
        }
        let mut count = vec![0usize; n];
        let mut links = vec![0usize; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                count[v] += 1;
                if let Some(p) = self.parent[i] {
                    if self.bags[p].binary_search(&v).is_ok() {
                        links[v] += 1;
                    }
                }
            }
        }
        for v in 0..n {
            if count[v] == 0 {
                return Err(TdError::VertexNotCovered { vertex: v + 1 });
            }
            // A vertex's bags induce a subtree iff they span count - 1 tree edges.
            if links[v] + 1 != count[v] {
                return Err(TdError::VertexBagsDisconnected { vertex: v + 1 });
            }
        }
        for (i, e) in g.edges().iter().enumerate() {
            let covered = self
                .bags
                .iter()
                .any(|b| b.binary_search(&e.u).is_ok() && b.binary_search(&e.v).is_ok());
            if !covered {
                return Err(TdError::EdgeNotCovered { edge: i + 1, u: e.u + 1, v: e.v + 1 });
            }
        }
        Ok(())
    }

    /// Parses `s td <bags> <max bag size> <n>`, then `b <id> <v..>` lines and
    /// `<id> <id>` tree edges. Ids and vertices are 1-based; bag 1 is the root.
    pub fn parse(text: &str) -> Result<Self, TdError> {
        let perr = |line: usize, msg: &str| TdError::Parse { line, msg: msg.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header `s td <bags> <width+1> <n>`"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 || h[0] != "s" || h[1] != "td" {
            return Err(perr(hl, "header must be `s td <bags> <max bag size> <n>`"));
        }
        let num = |tok: &str, line: usize| tok.parse::<usize>().map_err(|_| perr(line, &format!("invalid number `{tok}`")));
        let nb = num(h[2], hl)?;
        let max_size = num(h[3], hl)?;
        let n = num(h[4], hl)?;
        let mut bags: Vec<Option<Vec<usize>>> = vec![None; nb];
        let mut edges = Vec::new();
        for (ln, l) in lines {
            let t: Vec<&str> = l.split_whitespace().collect();
            if t[0] == "b" {
                let id = num(t.get(1).copied().unwrap_or(""), ln)?;
                if id == 0 || id > nb {
                    return Err(perr(ln, &format!("bag id {id} out of range 1..={nb}")));
                }
                if bags[id - 1].is_some() {
                    return Err(perr(ln, &format!("bag {id} listed twice")));
                }
                let mut vs = Vec::new();
                for tok in &t[2..] {
                    let v = num(tok, ln)?;
                    if v == 0 || v > n {
                        return Err(perr(ln, &format!("vertex {v} out of range 1..={n}")));
                    }
                    vs.push(v - 1);
                }
                if vs.len() > max_size {
                    return Err(perr(ln, &format!("bag {id} has {} vertices, header allows {max_size}", vs.len())));
                }
                bags[id - 1] = Some(vs);
            } else {
                if t.len() != 2 {
                    return Err(perr(ln, "tree edge must be `<bag> <bag>`"));
                }
                let (a, b) = (num(t[0], ln)?, num(t[1], ln)?);
                if a == 0 || b == 0 || a > nb || b > nb {
                    return Err(perr(ln, "tree edge mentions an unknown bag"));
                }
                edges.push((a - 1, b - 1));
            }
        }
        let bags = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| perr(hl, &format!("bag {} missing", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_edges(bags, &edges)
    }

    pub fn to_text(&self, n: usize) -> String {
        let mut s = String::new();
        let max = self.bags.iter().map(|b| b.len()).max().unwrap_or(0);
        let _ = writeln!(s, "s td {} {} {}", self.len(), max, n);
        for (i, b) in self.bags.iter().enumerate() {
            let _ = write!(s, "b {}", i + 1);
            for v in b {
                let _ = write!(s, " {}", v + 1);
            }
            s.push('\n');
        }
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                let _ = writeln!(s, "{} {}", p + 1, i + 1);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn path3() -> BeerGraph<i64> {
        BeerGraph::new(3, vec![Edge::undirected(0, 1, 1), Edge::undirected(1, 2, 1)], &[1], false).unwrap()
    }

    #[test]
    fn single_bag_triangle() {
        let g = BeerGraph::new(
            3,
            vec![Edge::undirected(0, 1, 1i64), Edge::undirected(1, 2, 1), Edge::undirected(2, 0, 1)],
            &[],
            false,
        )
        .unwrap();
        let td = TreeDecomposition::parse("s td 1 3 3\nb 1 1 2 3\n").unwrap();
        assert_eq!(td.width(), 2);
        td.validate(&g).unwrap();
    }

    #[test]
    fn path_decomposition() {
        let td = TreeDecomposition::parse("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap();
        assert_eq!(td.width(), 1);
        td.validate(&path3()).unwrap();
        assert_eq!(TreeDecomposition::parse(&td.to_text(3)).unwrap(), td);
    }

    #[test]
    fn missing_edge_is_named() {
        let td = TreeDecomposition::parse("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n").unwrap();
        assert_eq!(td.validate(&path3()), Err(TdError::EdgeNotCovered { edge: 2, u: 2, v: 3 }));
    }

    #[test]
    fn disconnected_occurrences() {
        let td = TreeDecomposition::parse("s td 3 2 3\nb 1 1 2\nb 2 3\nb 3 2 3\n1 2\n2 3\n").unwrap();
        assert_eq!(td.validate(&path3()), Err(TdError::VertexBagsDisconnected { vertex: 2 }));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(TreeDecomposition::parse("s td 1 1 3\nb 1 1 2\n"), Err(TdError::Parse { line: 2, .. })));
        assert!(matches!(TreeDecomposition::parse("s td 2 2 3\nb 1 1 2\nb 2 2 3\n"), Err(TdError::NotATree(_))));
    }
}

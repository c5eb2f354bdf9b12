use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::{BeerGraph, Edge};
use crate::weight::{cmp_weight, DistPair, Scalar, Weight};

#[derive(Debug, Error, PartialEq)]
#[error("negative arc weight on {from} -> {to}")]
pub struct NegativeWeight {
    pub from: usize,
    pub to: usize,
}

/// Adjacency-list digraph with finite nonnegative arc weights.
#[derive(Clone, Debug)]
pub struct Digraph<T> {
    adj: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> Digraph<T> {
    pub fn new(n: usize) -> Self {
        Digraph { adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Adds `from -> to`; infinite weights are dropped.
    pub fn add_arc(&mut self, from: usize, to: usize, w: Weight<T>) -> Result<(), NegativeWeight> {
        if let Weight::Finite(x) = w {
            if x < T::zero() {
                return Err(NegativeWeight { from, to });
            }
            self.adj[from].push((to, x));
        }
        Ok(())
    }

    /// Arcs of both directions of every listed edge.
    pub fn from_edges<'a>(n: usize, edges: impl IntoIterator<Item = &'a Edge<T>>) -> Self {
        let mut h = Digraph::new(n);
        for e in edges {
            h.push_edge(e);
        }
        h
    }

    pub(crate) fn push_edge(&mut self, e: &Edge<T>) {
        if let Weight::Finite(x) = e.w_uv {
            self.adj[e.u].push((e.v, x));
        }
        if let Weight::Finite(x) = e.w_vu {
            self.adj[e.v].push((e.u, x));
        }
    }

    pub fn reversed(&self) -> Self {
        let mut r = Digraph::new(self.n());
        for (u, arcs) in self.adj.iter().enumerate() {
            for &(v, w) in arcs {
                r.adj[v].push((u, w));
            }
        }
        r
    }
}

struct HeapItem<T>(Weight<T>, usize);

impl<T: Scalar> PartialEq for HeapItem<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Scalar> Eq for HeapItem<T> {}
impl<T: Scalar> PartialOrd for HeapItem<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for HeapItem<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_weight(&other.0, &self.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Single-source distances; unreachable vertices map to `Inf`.
pub fn dijkstra<T: Scalar>(h: &Digraph<T>, source: usize) -> Vec<Weight<T>> {
    let mut dist = vec![Weight::Inf; h.n()];
    dist[source] = Weight::zero();
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem(Weight::zero(), source));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &h.adj[u] {
            let nd = d + Weight::Finite(w);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    dist
}

/// `(d(s,t), min_b d(s,b) + d(b,t))` from a forward search at `s` and a
/// backward search at `t`.
pub fn combine_searches<T: Scalar>(
    from_s: &[Weight<T>],
    to_t: &[Weight<T>],
    beer: &[bool],
    t: usize,
) -> DistPair<T> {
    let mut bd = Weight::Inf;
    for (b, &is_beer) in beer.iter().enumerate() {
        if is_beer {
            bd = bd.min(from_s[b] + to_t[b]);
        }
    }
    DistPair::new(from_s[t], bd)
}

/// Brute-force reference answer: two Dijkstra runs on the whole graph.
pub fn oracle_dist_pair<T: Scalar>(g: &BeerGraph<T>, s: usize, t: usize) -> DistPair<T> {
    let h = Digraph::from_edges(g.n(), g.edges());
    let from_s = dijkstra(&h, s);
    let to_t = dijkstra(&h.reversed(), t);
    combine_searches(&from_s, &to_t, g.beer_mask(), t)
}

/// All-pairs reference answers, for checking many pairs on one graph.
pub struct Oracle<T> {
    dist: Vec<Vec<Weight<T>>>,
    beer: Vec<usize>,
}

impl<T: Scalar> Oracle<T> {
    pub fn new(g: &BeerGraph<T>) -> Self {
        Oracle::on_edges(g.n(), g.edges(), g.beer_mask())
    }

    /// Oracle on the spanning subgraph with the given edges and all `n` vertices.
    pub fn on_edges<'a>(n: usize, edges: impl IntoIterator<Item = &'a Edge<T>>, beer: &[bool]) -> Self {
        let h = Digraph::from_edges(n, edges);
        let dist = (0..n).map(|s| dijkstra(&h, s)).collect();
        let beer = (0..n).filter(|&v| beer[v]).collect();
        Oracle { dist, beer }
    }

    pub fn query(&self, s: usize, t: usize) -> DistPair<T> {
        let mut bd = Weight::Inf;
        for &b in &self.beer {
            bd = bd.min(self.dist[s][b] + self.dist[b][t]);
        }
        DistPair::new(self.dist[s][t], bd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(x: i64) -> Weight<i64> {
        Weight::Finite(x)
    }

    #[test]
    fn dijkstra_on_a_path() {
        let mut h = Digraph::new(3);
        h.add_arc(0, 1, w(1)).unwrap();
        h.add_arc(1, 2, w(2)).unwrap();
        assert_eq!(dijkstra(&h, 0), vec![w(0), w(1), w(3)]);
    }

    #[test]
    fn dijkstra_unreachable_is_inf() {
        let h = Digraph::<i64>::new(2);
        assert_eq!(dijkstra(&h, 0), vec![w(0), Weight::Inf]);
    }

    #[test]
    fn dijkstra_on_a_directed_cycle() {
        let mut h = Digraph::new(4);
        for i in 0..4 {
            h.add_arc(i, (i + 1) % 4, w(1)).unwrap();
        }
        assert_eq!(dijkstra(&h, 0), vec![w(0), w(1), w(2), w(3)]);
    }

    #[test]
    fn negative_arcs_are_rejected() {
        let mut h = Digraph::new(2);
        assert_eq!(h.add_arc(0, 1, w(-1)), Err(NegativeWeight { from: 0, to: 1 }));
    }

    #[test]
    fn oracle_triangle_and_square() {
        let tri = BeerGraph::new(
            3,
            vec![Edge::undirected(0, 1, 1i64), Edge::undirected(1, 2, 1), Edge::undirected(2, 0, 1)],
            &[2],
            false,
        )
        .unwrap();
        assert_eq!(oracle_dist_pair(&tri, 0, 1), DistPair::new(w(1), w(2)));

        let sq = BeerGraph::new(4, (0..4).map(|i| Edge::undirected(i, (i + 1) % 4, 1i64)).collect(), &[2], false)
            .unwrap();
        assert_eq!(oracle_dist_pair(&sq, 0, 1), DistPair::new(w(1), w(3)));
        let o = Oracle::new(&sq);
        assert_eq!(o.query(0, 1), DistPair::new(w(1), w(3)));
        assert_eq!(o.query(0, 0), DistPair::new(w(0), w(4)));
    }

    #[test]
    fn oracle_without_beer_is_inf() {
        let sq = BeerGraph::new(4, (0..4).map(|i| Edge::undirected(i, (i + 1) % 4, 1i64)).collect(), &[], false)
            .unwrap();
        assert_eq!(oracle_dist_pair(&sq, 0, 2).beer, Weight::Inf);
    }
}

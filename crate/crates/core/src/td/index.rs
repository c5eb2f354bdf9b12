use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{dedup, BagKGraph, BagKTable, BagTable, TdError, TreeDecomposition};
use crate::algebra::Overlay;
use crate::graph::BeerGraph;
use crate::structures::{LcaIndex, TreeProduct};
use crate::tri::QueryError;
use crate::weight::{DistPair, Scalar, Weight};

/// Work done by one decomposition query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TdQueryStats {
    /// Bag-local closures and final joins.
    pub joins: usize,
    pub oplus_hat: usize,
    /// Largest vertex count of any overlay closed.
    pub max_join_verts: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TdCounts {
    pub bags: usize,
    pub width: usize,
    pub f1_entries: usize,
    pub f2_entries: usize,
    pub f3_entries: usize,
    pub f4_tables: usize,
    pub f4_entries: usize,
    pub max_closure_verts: usize,
}

/// Distance tables over a rooted tree decomposition.
///
/// For a bag `mu` with subtree vertex set `S`:
/// `f1` is over `G[S]`, `f2` over `G` minus the edges of `G[S]`, `f3` for
/// a child `lambda` over `G[S_mu]` minus the edges of `G[S_lambda]`, and
/// `f4` for two children over `G` minus the edges of both child subgraphs.
#[derive(Clone, Debug)]
pub struct TdIndex<T> {
    pub(crate) graph: BeerGraph<T>,
    pub(crate) td: TreeDecomposition,
    pub(crate) children: Vec<Vec<usize>>,
    /// Sorted interface of each bag.
    pub(crate) iface: Vec<Vec<u32>>,
    /// Edges with both ends in the bag.
    pub(crate) bag_edges: Vec<Vec<usize>>,
    pub(crate) home: Vec<usize>,
    pub(crate) f1: Vec<BagTable<T>>,
    /// Like `f1` without the edges inside the interface.
    pub(crate) g1: Vec<BagTable<T>>,
    pub(crate) f2: Vec<BagTable<T>>,
    /// Tagged `(parent, node)`; `None` at the root.
    pub(crate) f3: Vec<Option<BagKTable<T>>>,
    /// Keyed by `(min, max)` sibling ids; the table covers both interfaces.
    pub(crate) f4: HashMap<(u32, u32), BagTable<T>>,
    pub(crate) lca: LcaIndex,
    pub(crate) tp: TreeProduct<BagKGraph<T>>,
    pub(crate) max_closure_verts: usize,
}

/// What a bag-local closure includes besides the bag's own edges.
struct Closure<'a> {
    at: usize,
    /// Children whose `g1` is left out; the edges inside their interfaces
    /// are dropped too.
    skip: &'a [usize],
    with_f2: bool,
}

impl<T: Scalar> TdIndex<T> {
    pub fn build(g: BeerGraph<T>, td: TreeDecomposition) -> Result<Self, TdError> {
        td.validate(&g)?;
        let mut idx = Self::assemble(g, td);
        let order = idx.order();
        for &b in order.iter().rev() {
            let a = idx.iface[b].clone();
            idx.f1[b] = idx.close(&Closure { at: b, skip: &[], with_f2: false }, &a, None);
            idx.g1[b] = idx.close(&Closure { at: b, skip: &[], with_f2: false }, &a, Some(&a));
        }
        for &b in &order {
            idx.f2[b] = match idx.td.parent[b] {
                None => idx.empty_table(&idx.iface[b]),
                Some(p) => idx.close(&Closure { at: p, skip: &[b], with_f2: true }, &idx.iface[b], None),
            };
        }
        for &b in &order {
            if let Some(p) = idx.td.parent[b] {
                idx.f3[b] = Some(idx.f3_fresh(p, b));
            }
            let kids = idx.children[b].clone();
            for (i, &x) in kids.iter().enumerate() {
                for &y in &kids[i + 1..] {
                    let keep: Vec<u32> = idx.iface[x].iter().chain(&idx.iface[y]).copied().collect();
                    let t = idx.close(&Closure { at: b, skip: &[x, y], with_f2: true }, &keep, None);
                    idx.f4.insert((x.min(y) as u32, x.max(y) as u32), t);
                }
            }
        }
        idx.rebuild_tree_product();
        Ok(idx)
    }

    /// Shapes derived from the decomposition, with empty tables.
    pub(crate) fn assemble(g: BeerGraph<T>, td: TreeDecomposition) -> Self {
        let nb = td.len();
        let children = td.children();
        let mut order = vec![0];
        let mut i = 0;
        while i < order.len() {
            order.extend(children[order[i]].iter().copied());
            i += 1;
        }
        let iface: Vec<Vec<u32>> = (0..nb)
            .map(|b| match td.parent[b] {
                None => td.bags[b].iter().map(|&v| v as u32).collect(),
                Some(p) => td.bags[b]
                    .iter()
                    .filter(|v| td.bags[p].binary_search(v).is_ok())
                    .map(|&v| v as u32)
                    .collect(),
            })
            .collect();
        let mut inc = vec![Vec::new(); g.n()];
        for (e, edge) in g.edges().iter().enumerate() {
            inc[edge.u].push(e);
        }
        let bag_edges = td
            .bags
            .iter()
            .map(|bag| {
                let mut es: Vec<usize> = bag
                    .iter()
                    .flat_map(|&u| inc[u].iter().copied())
                    .filter(|&e| bag.binary_search(&g.edge(e).v).is_ok())
                    .collect();
                es.sort_unstable();
                es
            })
            .collect();
        let mut home = vec![usize::MAX; g.n()];
        for &b in &order {
            for &v in &td.bags[b] {
                if home[v] == usize::MAX {
                    home[v] = b;
                }
            }
        }
        let parent = td.parent.clone();
        let td_max = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
        let empty = BagTable { verts: Vec::new(), w: Vec::new() };
        TdIndex {
            graph: g,
            td,
            children,
            iface,
            bag_edges,
            home,
            f1: vec![empty.clone(); nb],
            g1: vec![empty.clone(); nb],
            f2: vec![empty; nb],
            f3: vec![None; nb],
            f4: HashMap::new(),
            lca: LcaIndex::new(&parent),
            tp: TreeProduct::new(&parent, vec![None; nb]),
            max_closure_verts: td_max,
        }
    }

    /// Bags with every parent before its children.
    pub(crate) fn order(&self) -> Vec<usize> {
        let mut order = vec![0];
        let mut i = 0;
        while i < order.len() {
            order.extend(self.children[order[i]].iter().copied());
            i += 1;
        }
        order
    }

    pub(crate) fn rebuild_tree_product(&mut self) {
        let values = self.f3.iter().map(|f| f.clone().map(BagKGraph::Table)).collect();
        self.tp = TreeProduct::new(&self.td.parent, values);
    }

    fn f3_fresh(&self, p: usize, b: usize) -> BagKTable<T> {
        let keep: Vec<u32> = self.iface[p].iter().chain(&self.iface[b]).copied().collect();
        let table = self.close(&Closure { at: p, skip: &[b], with_f2: false }, &keep, None);
        BagKTable {
            mu: p as u32,
            lambda: b as u32,
            mu_terms: self.iface[p].clone(),
            lambda_terms: self.iface[b].clone(),
            table,
        }
    }

    fn empty_table(&self, verts: &[u32]) -> BagTable<T> {
        let k = verts.len();
        let mut w = vec![DistPair::unreachable(); k * k];
        for (i, &v) in verts.iter().enumerate() {
            w[i * k + i] = DistPair::at_vertex(self.graph.is_beer(v as usize));
        }
        BagTable { verts: verts.to_vec(), w }
    }

    /// Closes a bag-local graph and reads it over `keep`. Edges with both
    /// ends in `drop` (or in the interface of a skipped child) are left out.
    fn close(&self, c: &Closure<'_>, keep: &[u32], drop: Option<&[u32]>) -> BagTable<T> {
        let bag = &self.td.bags[c.at];
        let mut o = Overlay::new(bag.iter().map(|&v| v as u32));
        let inside = |set: &[u32], u: usize, v: usize| {
            set.binary_search(&(u as u32)).is_ok() && set.binary_search(&(v as u32)).is_ok()
        };
        for &e in &self.bag_edges[c.at] {
            let edge = self.graph.edge(e);
            if drop.is_some_and(|d| inside(d, edge.u, edge.v))
                || c.skip.iter().any(|&s| inside(&self.iface[s], edge.u, edge.v))
            {
                continue;
            }
            o.add(edge.u as u32, edge.v as u32, DistPair::new(edge.w_uv, Weight::Inf));
            o.add(edge.v as u32, edge.u as u32, DistPair::new(edge.w_vu, Weight::Inf));
        }
        for &v in bag {
            if self.graph.is_beer(v) {
                o.add_beer_vertex(v as u32);
            }
        }
        for &ch in &self.children[c.at] {
            if !c.skip.contains(&ch) {
                o.add_table(&self.g1[ch].verts, &self.g1[ch].w);
            }
        }
        if c.with_f2 {
            o.add_table(&self.f2[c.at].verts, &self.f2[c.at].w);
        }
        let keep = dedup(keep.iter().copied());
        let w = o.close(&keep);
        BagTable { verts: keep, w }
    }

    pub fn graph(&self) -> &BeerGraph<T> {
        &self.graph
    }

    pub fn decomposition(&self) -> &TreeDecomposition {
        &self.td
    }

    /// Interface of a bag, sorted.
    pub fn interface(&self, bag: usize) -> &[u32] {
        &self.iface[bag]
    }

    /// The shallowest bag containing `v`.
    pub fn home_bag(&self, v: usize) -> usize {
        self.home[v]
    }

    pub fn f1(&self, bag: usize) -> &BagTable<T> {
        &self.f1[bag]
    }

    pub fn f2(&self, bag: usize) -> &BagTable<T> {
        &self.f2[bag]
    }

    /// Table for the tree edge between `bag` and its parent.
    pub fn f3(&self, bag: usize) -> Option<&BagKTable<T>> {
        self.f3[bag].as_ref()
    }

    /// Table for two children of the same bag.
    pub fn f4(&self, a: usize, b: usize) -> Option<&BagTable<T>> {
        self.f4.get(&(a.min(b) as u32, a.max(b) as u32))
    }

    pub fn f4_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.f4.keys().map(|&(a, b)| (a as usize, b as usize)).collect();
        v.sort_unstable();
        v
    }

    pub fn counts(&self) -> TdCounts {
        let sq = |t: &BagTable<T>| t.w.len();
        TdCounts {
            bags: self.td.len(),
            width: self.td.width(),
            f1_entries: self.f1.iter().map(sq).sum(),
            f2_entries: self.f2.iter().map(sq).sum(),
            f3_entries: self.f3.iter().flatten().map(|t| sq(&t.table)).sum(),
            f4_tables: self.f4.len(),
            f4_entries: self.f4.values().map(sq).sum(),
            max_closure_verts: self.max_closure_verts,
        }
    }

    pub fn query(&self, s: usize, t: usize) -> Result<DistPair<T>, QueryError> {
        self.query_with_stats(s, t).map(|(d, _)| d)
    }

    pub fn query_with_stats(&self, s: usize, t: usize) -> Result<(DistPair<T>, TdQueryStats), QueryError> {
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        self.query_with_bags(s, t, self.home[s], self.home[t])
    }

    /// Answers every pair, in order, using all available threads.
    pub fn query_batch(&self, pairs: &[(usize, usize)]) -> Vec<Result<DistPair<T>, QueryError>> {
        pairs.par_iter().map(|&(s, t)| self.query(s, t)).collect()
    }

    /// Answers `(s, t)` starting from bags `bs` and `bt`, which must contain
    /// `s` and `t`.
    pub fn query_with_bags(
        &self,
        s: usize,
        t: usize,
        bs: usize,
        bt: usize,
    ) -> Result<(DistPair<T>, TdQueryStats), QueryError> {
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        self.check_bag(bs, s)?;
        self.check_bag(bt, t)?;
        let mut st = TdQueryStats::default();
        let (su, tu) = (s as u32, t as u32);
        let answer = if bs == bt {
            let c = Closure { at: bs, skip: &[], with_f2: true };
            self.note(&mut st, bs);
            self.close(&c, &[su, tu], None)
        } else {
            let pi = self.lca.lca(bs, bt);
            let d = self.lca.depth(pi);
            if pi == bs {
                let la1 = self.lca.ancestor_at_depth(bt, d + 1);
                let down = self.side(la1, bt, tu, &mut st);
                let keep: Vec<u32> = std::iter::once(su).chain(self.iface[la1].iter().copied()).collect();
                self.note(&mut st, pi);
                let rest = self.close(&Closure { at: pi, skip: &[la1], with_f2: true }, &keep, None);
                self.finish(&[&rest, &down.table], su, tu, &mut st)
            } else if pi == bt {
                let mu1 = self.lca.ancestor_at_depth(bs, d + 1);
                let up = self.side(mu1, bs, su, &mut st);
                let keep: Vec<u32> = std::iter::once(tu).chain(self.iface[mu1].iter().copied()).collect();
                self.note(&mut st, pi);
                let rest = self.close(&Closure { at: pi, skip: &[mu1], with_f2: true }, &keep, None);
                self.finish(&[&up.table, &rest], su, tu, &mut st)
            } else {
                let mu1 = self.lca.ancestor_at_depth(bs, d + 1);
                let la1 = self.lca.ancestor_at_depth(bt, d + 1);
                let up = self.side(mu1, bs, su, &mut st);
                let down = self.side(la1, bt, tu, &mut st);
                let mid = self.f4(mu1, la1).expect("siblings have a joint table");
                self.finish(&[&up.table, mid, &down.table], su, tu, &mut st)
            }
        };
        let d = answer.get(s, t).expect("endpoints kept");
        Ok((d, st))
    }

    fn note(&self, st: &mut TdQueryStats, bag: usize) {
        st.joins += 1;
        st.max_join_verts = st.max_join_verts.max(self.td.bags[bag].len());
    }

    fn finish(&self, parts: &[&BagTable<T>], s: u32, t: u32, st: &mut TdQueryStats) -> BagTable<T> {
        st.joins += 1;
        let verts = dedup(parts.iter().flat_map(|p| p.verts.iter().copied()));
        st.max_join_verts = st.max_join_verts.max(verts.len());
        BagTable::join(parts, &[s, t])
    }

    /// `G[S_top]` over the interface of `top` and `v`, where `v` lies in
    /// `bag`, a descendant of `top`.
    fn side(&self, top: usize, bag: usize, v: u32, st: &mut TdQueryStats) -> BagKTable<T> {
        let keep: Vec<u32> = self.iface[bag].iter().copied().chain(std::iter::once(v)).collect();
        self.note(st, bag);
        let table = self.close(&Closure { at: bag, skip: &[], with_f2: false }, &keep, None);
        let base = BagKTable {
            mu: bag as u32,
            lambda: bag as u32,
            mu_terms: self.iface[bag].clone(),
            lambda_terms: vec![v],
            table,
        };
        if top == bag {
            return base;
        }
        let below = self.lca.ancestor_at_depth(bag, self.lca.depth(top) + 1);
        let (leg, ops) = self.tp.product(below, bag);
        st.oplus_hat += ops + 1;
        let leg = leg.expect("every non-root bag has an f3 table");
        match super::bag_oplus_hat(&leg, &BagKGraph::Table(base)) {
            BagKGraph::Table(t) => t,
            BagKGraph::Bottom => unreachable!("leg ends at the base bag"),
        }
    }

    fn check_vertex(&self, v: usize) -> Result<(), QueryError> {
        if v >= self.graph.n() {
            return Err(QueryError::VertexOutOfRange { vertex: v + 1, n: self.graph.n() });
        }
        Ok(())
    }

    fn check_bag(&self, bag: usize, v: usize) -> Result<(), QueryError> {
        match self.td.bags.get(bag) {
            Some(b) if b.binary_search(&v).is_ok() => Ok(()),
            _ => Err(QueryError::NotAHomeNode { node: bag, vertex: v + 1 }),
        }
    }

    /// All bags containing `v`.
    pub fn bags_of(&self, v: usize) -> Vec<usize> {
        (0..self.td.len()).filter(|&b| self.td.bags[b].binary_search(&v).is_ok()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::shortest::Oracle;

    fn w(x: i64) -> Weight<i64> {
        Weight::Finite(x)
    }

    #[test]
    fn path_with_beer_in_the_middle() {
        let g = BeerGraph::new(3, vec![Edge::undirected(0, 1, 1i64), Edge::undirected(1, 2, 1)], &[1], false).unwrap();
        let td = TreeDecomposition::parse("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap();
        let idx = TdIndex::build(g, td).unwrap();
        assert_eq!(idx.query(0, 2).unwrap(), DistPair::new(w(2), w(2)));
        assert_eq!(idx.query(1, 1).unwrap(), DistPair::new(w(0), w(0)));
        assert_eq!(idx.query(0, 0).unwrap(), DistPair::new(w(0), w(2)));
    }

    #[test]
    fn leaf_without_beer_has_no_beer_entries() {
        let g = BeerGraph::new(3, vec![Edge::undirected(0, 1, 1i64), Edge::undirected(1, 2, 1)], &[0], false).unwrap();
        let td = TreeDecomposition::parse("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap();
        let idx = TdIndex::build(g, td).unwrap();
        assert_eq!(idx.f1(1).verts, vec![1]);
        assert_eq!(idx.f1(1).w[0], DistPair::new(w(0), Weight::Inf));
    }

    #[test]
    fn single_bag_matches_oracle() {
        let edges = vec![
            Edge::undirected(0, 1, 4i64),
            Edge::undirected(1, 2, 1),
            Edge::undirected(2, 3, 2),
            Edge::undirected(3, 0, 7),
            Edge::undirected(0, 2, 3),
        ];
        let g = BeerGraph::new(4, edges, &[3], false).unwrap();
        let td = TreeDecomposition::from_edges(vec![vec![0, 1, 2, 3]], &[]).unwrap();
        let o = Oracle::new(&g);
        let idx = TdIndex::build(g, td).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                assert_eq!(idx.query(s, t).unwrap(), o.query(s, t));
                assert_eq!(idx.f1(0).get(s, t).unwrap(), o.query(s, t));
            }
        }
    }
}

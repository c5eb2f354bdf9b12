//! Distance index over an SPQR tree.
//!
//! For a node `mu` with terminals `x, y`:
//! * `F1(mu)` holds distances between the terminals inside `G_mu`;
//! * `F2(mu)` holds them in the rest of the graph, `G - E(G_mu)`;
//! * `F3(mu, lambda)` for a child `lambda` covers `G_mu - E(G_lambda)` over
//!   both nodes' terminals;
//! * `F4(lambda, lambda')` for siblings covers `G - E(G_lambda) - E(G_lambda')`.
//!
//! A query glues these along the tree path between the Q nodes of its
//! endpoints.

mod chain;
mod parallel;
mod query;
mod rigid;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{edge_table, pair_min, pair_unreachable, parallel_table, KGraph, KTable, Overlay, Pair2};
use crate::graph::BeerGraph;
use crate::spqr::{NodeKind, SpqrError, SpqrTree, ROOT, ROOT_CHILD};
use crate::structures::{LcaIndex, TreeProduct};
use crate::weight::{DistPair, Scalar};

pub(crate) use chain::ChainTables;
pub(crate) use parallel::ParallelMin;
pub use query::{QueryError, QueryStats};
use rigid::{skeleton_closure, Piece};

/// How much is precomputed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// `F1` and `F2` only; everything else is computed per query.
    F12,
    /// Adds `F3` and the tree product over it.
    F123,
    /// Adds `F4` for every pair of children of every R node.
    F1234R,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::F12, Strategy::F123, Strategy::F1234R];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::F12 => "f12",
            Strategy::F123 => "f123",
            Strategy::F1234R => "f1234r",
        }
    }

    pub fn stores_f3(self) -> bool {
        self != Strategy::F12
    }

    pub fn stores_f4r(self) -> bool {
        self == Strategy::F1234R
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f12" => Ok(Strategy::F12),
            "f123" => Ok(Strategy::F123),
            "f1234r" => Ok(Strategy::F1234R),
            _ => Err(format!("unknown strategy `{s}` (expected f12, f123 or f1234r)")),
        }
    }
}

/// Local vertex numbering of an R skeleton.
#[derive(Clone, Debug)]
pub(crate) struct RigidLocal {
    verts: Vec<usize>,
    beer: Vec<bool>,
}

impl RigidLocal {
    fn at(&self, v: usize) -> usize {
        self.verts.binary_search(&v).expect("skeleton vertex")
    }
}

/// Counts of stored tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TableCounts {
    pub f1: usize,
    pub f2: usize,
    pub f3: usize,
    pub f4r: usize,
    pub chain_entries: usize,
}

#[derive(Clone, Debug)]
pub struct TriIndex<T> {
    pub(crate) graph: BeerGraph<T>,
    pub(crate) tree: SpqrTree,
    pub(crate) strategy: Strategy,
    pub(crate) f1: Vec<Pair2<T>>,
    pub(crate) f2: Vec<Pair2<T>>,
    /// `F3(parent(v), v)` by `v`; empty unless the strategy stores it.
    pub(crate) f3: Vec<Option<KTable<T>>>,
    /// `F4` by sibling node ids `(a, b)` with `a < b`, children of R nodes.
    pub(crate) f4r: HashMap<(u32, u32), KTable<T>>,
    pub(crate) chains: Vec<Option<ChainTables<T>>>,
    pub(crate) pmins: Vec<Option<ParallelMin<T>>>,
    pub(crate) rigid: Vec<Option<RigidLocal>>,
    pub(crate) lca: LcaIndex,
    pub(crate) tp: Option<TreeProduct<KGraph<T>>>,
    pub(crate) build_runs: usize,
}

impl<T: Scalar> TriIndex<T> {
    /// Builds with the first edge as reference edge.
    pub fn build(g: BeerGraph<T>, strategy: Strategy) -> Result<Self, SpqrError> {
        Self::build_with_ref(g, 0, strategy)
    }

    pub fn build_with_ref(g: BeerGraph<T>, ref_edge: usize, strategy: Strategy) -> Result<Self, SpqrError> {
        let tree = SpqrTree::build(&g, ref_edge)?;
        let mut idx = Self::assemble(g, tree, strategy);
        idx.compute_f1();
        idx.compute_f2();
        idx.finish();
        Ok(idx)
    }

    /// Empty tables over a decomposed graph.
    pub(crate) fn assemble(graph: BeerGraph<T>, tree: SpqrTree, strategy: Strategy) -> Self {
        let n = tree.len();
        let lca = LcaIndex::new(&tree.parents());
        let rigid = tree
            .nodes
            .iter()
            .map(|node| {
                (node.kind == NodeKind::R).then(|| RigidLocal {
                    verts: node.verts.clone(),
                    beer: node.verts.iter().map(|&v| graph.is_beer(v)).collect(),
                })
            })
            .collect();
        TriIndex {
            graph,
            tree,
            strategy,
            f1: vec![pair_unreachable(); n],
            f2: vec![pair_unreachable(); n],
            f3: Vec::new(),
            f4r: HashMap::new(),
            chains: vec![None; n],
            pmins: vec![None; n],
            rigid,
            lca,
            tp: None,
            build_runs: 0,
        }
    }

    /// Recreates the S and P helpers from `F1`, after loading.
    pub(crate) fn rebuild_helpers(&mut self) {
        for id in 1..self.tree.len() {
            self.helpers_for(id);
        }
    }

    fn helpers_for(&mut self, id: usize) {
        let node = &self.tree.nodes[id];
        match node.kind {
            NodeKind::S => {
                let tabs: Vec<&Pair2<T>> = node.children.iter().map(|&c| &self.f1[c]).collect();
                let beer = node.verts.iter().map(|&v| self.graph.is_beer(v)).collect();
                self.chains[id] = Some(ChainTables::new(&tabs, beer));
            }
            NodeKind::P => {
                self.pmins[id] = Some(ParallelMin::new(node.children.iter().map(|&c| &self.f1[c])));
            }
            _ => {}
        }
    }

    fn q_table(&self, id: usize) -> Pair2<T> {
        let node = &self.tree.nodes[id];
        let e = self.graph.edge(node.real_edge().expect("Q node"));
        edge_table(e.weight_from(node.x), e.weight_from(node.y), self.graph.is_beer(node.x), self.graph.is_beer(node.y))
    }

    fn compute_f1(&mut self) {
        let mut runs = 0;
        for id in (1..self.tree.len()).rev() {
            let kind = self.tree.nodes[id].kind;
            if matches!(kind, NodeKind::S | NodeKind::P) {
                self.helpers_for(id);
            }
            let node = &self.tree.nodes[id];
            let t = match kind {
                NodeKind::Q => self.q_table(id),
                NodeKind::S | NodeKind::P => {
                    match &self.chains[id] {
                        Some(ch) => ch.pair2(1, ch.k(), 0, ch.k()),
                        None => parallel_table(&self.pmins[id].as_ref().expect("P helper").without(&[])),
                    }
                }
                NodeKind::R => {
                    let rl = self.rigid[id].as_ref().expect("R helper");
                    let pieces = self.child_pieces(id, &[]);
                    let keep = [rl.at(node.x), rl.at(node.y)];
                    to_pair(&skeleton_closure(rl.verts.len(), &pieces, &rl.beer, &keep, &mut runs))
                }
            };
            self.f1[id] = t;
        }
        self.build_runs += runs;
    }

    fn compute_f2(&mut self) {
        let root = &self.tree.nodes[ROOT];
        let e0 = self.graph.edge(self.tree.ref_edge);
        self.f2[ROOT_CHILD] = edge_table(
            e0.weight_from(root.x),
            e0.weight_from(root.y),
            self.graph.is_beer(root.x),
            self.graph.is_beer(root.y),
        );
        let mut runs = 0;
        for id in ROOT_CHILD..self.tree.len() {
            if self.tree.nodes[id].kind == NodeKind::Q {
                continue;
            }
            let tabs = self.f2_of_children(id, &mut runs);
            for (c, t) in self.tree.nodes[id].children.clone().into_iter().zip(tabs) {
                self.f2[c] = t;
            }
        }
        self.build_runs += runs;
    }

    /// `F3` and `F4R` tables and the tree product, as the strategy asks.
    pub(crate) fn finish(&mut self) {
        let n = self.tree.len();
        let mut runs = 0;
        if self.strategy.stores_f3() && self.f3.is_empty() {
            self.f3 = (0..n).map(|v| (v > ROOT_CHILD).then(|| self.f3_fresh(v, &mut runs))).collect();
        }
        if self.strategy.stores_f4r() && self.f4r.is_empty() {
            for id in 1..n {
                let node = &self.tree.nodes[id];
                if node.kind != NodeKind::R {
                    continue;
                }
                let k = node.children.len();
                for i in 0..k {
                    for j in i + 1..k {
                        let t = self.f4_fresh(id, i, j, &mut runs);
                        self.f4r.insert((node.children[i] as u32, node.children[j] as u32), t);
                    }
                }
            }
        }
        self.build_runs += runs;
        self.rebuild_tree_product();
    }

    pub(crate) fn rebuild_tree_product(&mut self) {
        self.tp = self.strategy.stores_f3().then(|| {
            let values = self.f3.iter().map(|t| t.clone().map(KGraph::Table)).collect();
            TreeProduct::new(&self.tree.parents(), values)
        });
    }

    /// Children of `id` as skeleton pieces, skipping the listed child indices.
    fn child_pieces(&self, id: usize, skip: &[usize]) -> Vec<Piece<'_, T>> {
        let node = &self.tree.nodes[id];
        let rl = self.rigid[id].as_ref().expect("R helper");
        node.children
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, &c)| {
                let cn = &self.tree.nodes[c];
                (rl.at(cn.x), rl.at(cn.y), &self.f1[c])
            })
            .collect()
    }

    fn f2_of_children(&self, id: usize, runs: &mut usize) -> Vec<Pair2<T>> {
        let node = &self.tree.nodes[id];
        let k = node.children.len();
        match node.kind {
            NodeKind::S => {
                let ch = self.chains[id].as_ref().expect("S helper");
                let c = &node.verts;
                (1..=k)
                    .map(|i| {
                        let mut o = Overlay::new([c[0], c[i - 1], c[i], c[k]].map(|v| v as u32));
                        o.add_pair(c[0], c[i - 1], &ch.pair2(1, i - 1, 0, i - 1));
                        o.add_pair(c[i], c[k], &ch.pair2(i + 1, k, i, k));
                        o.add_pair(c[0], c[k], &self.f2[id]);
                        to_pair(&o.close(&[c[i - 1] as u32, c[i] as u32]))
                    })
                    .collect()
            }
            NodeKind::P => {
                let pm = self.pmins[id].as_ref().expect("P helper");
                (0..k).map(|i| parallel_table(&pair_min(&pm.without(&[i]), &self.f2[id]))).collect()
            }
            NodeKind::R => {
                let rl = self.rigid[id].as_ref().expect("R helper");
                (0..k)
                    .map(|i| {
                        let mut pieces = self.child_pieces(id, &[i]);
                        pieces.push((rl.at(node.x), rl.at(node.y), &self.f2[id]));
                        let c = &self.tree.nodes[node.children[i]];
                        let keep = [rl.at(c.x), rl.at(c.y)];
                        to_pair(&skeleton_closure(rl.verts.len(), &pieces, &rl.beer, &keep, runs))
                    })
                    .collect()
            }
            NodeKind::Q => Vec::new(),
        }
    }

    /// `F3(parent(lambda), lambda)` computed from `F1`, `F2` and the helpers.
    pub(crate) fn f3_fresh(&self, lambda: usize, runs: &mut usize) -> KTable<T> {
        let mu = self.tree.nodes[lambda].parent.expect("not the root");
        assert!(mu != ROOT, "F3 is not defined below the root edge");
        let node = &self.tree.nodes[mu];
        let i = self.tree.child_index(lambda);
        let lam = &self.tree.nodes[lambda];
        let verts = [node.x, node.y, lam.x, lam.y].map(|v| v as u32);
        match node.kind {
            NodeKind::S => {
                let ch = self.chains[mu].as_ref().expect("S helper");
                let k = ch.k();
                let p = i + 1;
                // Chain position and side (left of the child or right of it) per slot.
                let slots = [(0, false), (k, true), (p - 1, false), (p, true)];
                let mut w = [[DistPair::unreachable(); 4]; 4];
                for (a, &(pa, ra)) in slots.iter().enumerate() {
                    for (b, &(pb, rb)) in slots.iter().enumerate() {
                        if ra != rb {
                            continue;
                        }
                        w[a][b] = if ra { ch.pair(p + 1, k, pa, pb) } else { ch.pair(1, p - 1, pa, pb) };
                    }
                }
                KTable { mu: mu as u32, lambda: lambda as u32, verts, w }
            }
            NodeKind::P => {
                let pm = self.pmins[mu].as_ref().expect("P helper");
                let t = parallel_table(&pm.without(&[i]));
                tagged(mu, lambda, verts, &t)
            }
            NodeKind::R => {
                let rl = self.rigid[mu].as_ref().expect("R helper");
                let pieces = self.child_pieces(mu, &[i]);
                let keep = verts.map(|v| rl.at(v as usize));
                let flat = skeleton_closure(rl.verts.len(), &pieces, &rl.beer, &keep, runs);
                KTable { mu: mu as u32, lambda: lambda as u32, verts, w: to_k(&flat) }
            }
            NodeKind::Q => unreachable!("Q nodes other than the root have no children"),
        }
    }

    /// `F4` for children `i < j` of `mu`, tagged `(child i, child j)`.
    pub(crate) fn f4_fresh(&self, mu: usize, i: usize, j: usize, runs: &mut usize) -> KTable<T> {
        debug_assert!(i < j);
        let node = &self.tree.nodes[mu];
        let (a, b) = (node.children[i], node.children[j]);
        let (na, nb) = (&self.tree.nodes[a], &self.tree.nodes[b]);
        let verts = [na.x, na.y, nb.x, nb.y].map(|v| v as u32);
        match node.kind {
            NodeKind::S => {
                let ch = self.chains[mu].as_ref().expect("S helper");
                let k = ch.k();
                let c = &node.verts;
                let (p, q) = (i + 1, j + 1);
                let mut o = Overlay::new([c[0], c[p - 1], c[p], c[q - 1], c[q], c[k]].map(|v| v as u32));
                o.add_pair(c[0], c[p - 1], &ch.pair2(1, p - 1, 0, p - 1));
                o.add_pair(c[p], c[q - 1], &ch.pair2(p + 1, q - 1, p, q - 1));
                o.add_pair(c[q], c[k], &ch.pair2(q + 1, k, q, k));
                o.add_pair(c[0], c[k], &self.f2[mu]);
                KTable { mu: a as u32, lambda: b as u32, verts, w: to_k(&o.close(&verts)) }
            }
            NodeKind::P => {
                let pm = self.pmins[mu].as_ref().expect("P helper");
                let t = parallel_table(&pair_min(&pm.without(&[i, j]), &self.f2[mu]));
                tagged(a, b, verts, &t)
            }
            NodeKind::R => {
                let rl = self.rigid[mu].as_ref().expect("R helper");
                let mut pieces = self.child_pieces(mu, &[i, j]);
                pieces.push((rl.at(node.x), rl.at(node.y), &self.f2[mu]));
                let keep = verts.map(|v| rl.at(v as usize));
                let flat = skeleton_closure(rl.verts.len(), &pieces, &rl.beer, &keep, runs);
                KTable { mu: a as u32, lambda: b as u32, verts, w: to_k(&flat) }
            }
            NodeKind::Q => unreachable!("Q nodes other than the root have no children"),
        }
    }

    pub fn graph(&self) -> &BeerGraph<T> {
        &self.graph
    }

    pub fn tree(&self) -> &SpqrTree {
        &self.tree
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Shortest-path searches run during construction.
    pub fn build_dijkstra_runs(&self) -> usize {
        self.build_runs
    }

    pub fn f1(&self, node: usize) -> &Pair2<T> {
        &self.f1[node]
    }

    pub fn f2(&self, node: usize) -> &Pair2<T> {
        &self.f2[node]
    }

    /// `F3(parent(node), node)`, from storage or recomputed. `None` for the
    /// root and its child.
    pub fn f3(&self, node: usize) -> Option<KTable<T>> {
        if node <= ROOT_CHILD {
            return None;
        }
        match self.f3.get(node) {
            Some(Some(t)) => Some(t.clone()),
            _ => Some(self.f3_fresh(node, &mut 0)),
        }
    }

    /// `F4` of two distinct siblings, tagged `(a, b)`; stored tables are
    /// used when present.
    pub fn f4(&self, a: usize, b: usize) -> Option<KTable<T>> {
        let (pa, pb) = (self.tree.nodes[a].parent?, self.tree.nodes[b].parent?);
        if pa != pb || a == b || pa == ROOT {
            return None;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let t = match self.f4r.get(&(lo as u32, hi as u32)) {
            Some(t) => t.clone(),
            None => self.f4_fresh(pa, self.tree.child_index(lo), self.tree.child_index(hi), &mut 0),
        };
        Some(if a == lo { t } else { t.swapped() })
    }

    /// Stored `F4R` keys.
    pub fn f4r_pairs(&self) -> Vec<(usize, usize)> {
        let mut keys: Vec<(usize, usize)> = self.f4r.keys().map(|&(a, b)| (a as usize, b as usize)).collect();
        keys.sort_unstable();
        keys
    }

    pub fn table_counts(&self) -> TableCounts {
        TableCounts {
            f1: self.tree.len() - 1,
            f2: self.tree.len() - 1,
            f3: self.f3.iter().filter(|t| t.is_some()).count(),
            f4r: self.f4r.len(),
            chain_entries: self.chains.iter().flatten().map(|c| c.k()).sum(),
        }
    }

    /// Compares every stored `F3`/`F4R` table with a fresh recomputation
    /// and describes the ones that differ.
    pub fn audit(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut runs = 0;
        for (v, t) in self.f3.iter().enumerate() {
            if let Some(t) = t {
                if *t != self.f3_fresh(v, &mut runs) {
                    let p = self.tree.nodes[v].parent.unwrap_or(v);
                    out.push(format!(
                        "F3 table of tree edge ({p} {}, {v} {}) disagrees with its recomputation",
                        self.tree.nodes[p].kind, self.tree.nodes[v].kind
                    ));
                }
            }
        }
        for (&(a, b), t) in &self.f4r {
            let p = self.tree.nodes[a as usize].parent.expect("sibling");
            let (i, j) = (self.tree.child_index(a as usize), self.tree.child_index(b as usize));
            if *t != self.f4_fresh(p, i, j, &mut runs) {
                out.push(format!("F4R table of siblings ({a}, {b}) under R node {p} disagrees with its recomputation"));
            }
        }
        out.sort();
        out
    }

    /// Test hook: shifts every finite entry of one stored `F3` table by one.
    /// Returns false when the strategy stores no `F3`.
    #[doc(hidden)]
    pub fn corrupt_f3_for_testing(&mut self, node: usize) -> bool {
        let Some(Some(t)) = self.f3.get_mut(node) else { return false };
        for row in t.w.iter_mut() {
            for z in row.iter_mut() {
                z.dist = z.dist + crate::weight::Weight::Finite(T::one());
                z.beer = z.beer + crate::weight::Weight::Finite(T::one());
            }
        }
        self.rebuild_tree_product();
        true
    }
}

fn to_pair<T: Scalar>(flat: &[DistPair<T>]) -> Pair2<T> {
    [[flat[0], flat[1]], [flat[2], flat[3]]]
}

fn to_k<T: Scalar>(flat: &[DistPair<T>]) -> [[DistPair<T>; 4]; 4] {
    let mut w = [[DistPair::unreachable(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            w[i][j] = flat[i * 4 + j];
        }
    }
    w
}

/// A table over `(x, y)` presented on four slots `[x, y, x, y]`.
fn tagged<T: Scalar>(mu: usize, lambda: usize, verts: [u32; 4], t: &Pair2<T>) -> KTable<T> {
    let mut k = KTable::from_pair(mu, verts[0] as usize, verts[1] as usize, t);
    k.mu = mu as u32;
    k.lambda = lambda as u32;
    k.verts = verts;
    k
}

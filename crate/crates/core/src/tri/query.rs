use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{Strategy, TriIndex};
use crate::algebra::{oplus, oplus_hat, KGraph};
use crate::spqr::NodeKind;
use crate::weight::{DistPair, Scalar};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("node {node} is not a Q node containing vertex {vertex}")]
    NotAHomeNode { node: usize, vertex: usize },
}

/// Work done by one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    pub dijkstra_runs: usize,
    pub oplus_hat: usize,
    pub oplus: usize,
    pub f3_computed: usize,
    pub f4_computed: usize,
}

impl QueryStats {
    pub fn add(&mut self, o: &QueryStats) {
        self.dijkstra_runs += o.dijkstra_runs;
        self.oplus_hat += o.oplus_hat;
        self.oplus += o.oplus;
        self.f3_computed += o.f3_computed;
        self.f4_computed += o.f4_computed;
    }
}

impl<T: Scalar> TriIndex<T> {
    pub fn query(&self, s: usize, t: usize) -> Result<DistPair<T>, QueryError> {
        self.query_with_stats(s, t).map(|(d, _)| d)
    }

    pub fn query_with_stats(&self, s: usize, t: usize) -> Result<(DistPair<T>, QueryStats), QueryError> {
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        let q = &self.tree.vertex_to_qnode;
        self.query_via(s, t, q[s], q[t])
    }

    /// Answers `(s, t)` starting from the given Q nodes, which must contain
    /// `s` and `t` respectively.
    pub fn query_via(
        &self,
        s: usize,
        t: usize,
        theta: usize,
        theta2: usize,
    ) -> Result<(DistPair<T>, QueryStats), QueryError> {
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        self.check_home(theta, s)?;
        self.check_home(theta2, t)?;
        let mut st = QueryStats::default();
        let end = |v: usize| {
            let n = &self.tree.nodes[v];
            KGraph::pair(v, n.x, n.y, &self.f1[v])
        };
        let k = if theta == theta2 {
            let n = &self.tree.nodes[theta];
            st.oplus += 1;
            oplus(&end(theta), &KGraph::pair(theta, n.x, n.y, &self.f2[theta]))
        } else {
            let pi = self.lca.lca(theta, theta2);
            let d = self.lca.depth(pi);
            let mu1 = self.lca.ancestor_at_depth(theta, d + 1);
            let la1 = self.lca.ancestor_at_depth(theta2, d + 1);
            let mut k = end(theta);
            if let Some(up) = self.leg(mu1, theta, &mut st) {
                k = oplus(&k, &up);
                st.oplus += 1;
            }
            k = oplus(&k, &self.joint(pi, mu1, la1, &mut st));
            if let Some(down) = self.leg(la1, theta2, &mut st) {
                k = oplus(&k, &down);
                st.oplus += 1;
            }
            st.oplus += 2;
            oplus(&k, &end(theta2))
        };
        let table = k.table().expect("composition along the tree path is defined");
        Ok((table.get(s, t).expect("endpoints are terminals of the composed table"), st))
    }

    /// Answers every pair, in order, using all available threads.
    pub fn query_batch(&self, pairs: &[(usize, usize)]) -> Vec<Result<DistPair<T>, QueryError>> {
        pairs.par_iter().map(|&(s, t)| self.query(s, t)).collect()
    }

    fn check_vertex(&self, v: usize) -> Result<(), QueryError> {
        if v >= self.graph.n() {
            return Err(QueryError::VertexOutOfRange { vertex: v + 1, n: self.graph.n() });
        }
        Ok(())
    }

    fn check_home(&self, node: usize, v: usize) -> Result<(), QueryError> {
        match self.tree.nodes.get(node) {
            Some(n) if node != crate::spqr::ROOT && n.kind == NodeKind::Q && (n.x == v || n.y == v) => Ok(()),
            _ => Err(QueryError::NotAHomeNode { node, vertex: v + 1 }),
        }
    }

    /// Product of `F3` down the path from below `top` to `bottom`, tagged
    /// `(top, bottom)`; `None` when the path is empty.
    fn leg(&self, top: usize, bottom: usize, st: &mut QueryStats) -> Option<KGraph<T>> {
        if top == bottom {
            return None;
        }
        let below = self.lca.ancestor_at_depth(bottom, self.lca.depth(top) + 1);
        match &self.tp {
            Some(tp) => {
                let (p, ops) = tp.product(below, bottom);
                st.oplus_hat += ops;
                Some(p.expect("F3 is defined below the root child"))
            }
            None => {
                let mut path = vec![bottom];
                let mut v = bottom;
                while v != below {
                    v = self.tree.nodes[v].parent.expect("below is an ancestor");
                    path.push(v);
                }
                let mut acc: Option<KGraph<T>> = None;
                for &v in path.iter().rev() {
                    let mut runs = 0;
                    let f = KGraph::Table(self.f3_fresh(v, &mut runs));
                    st.dijkstra_runs += runs;
                    st.f3_computed += 1;
                    acc = Some(match acc {
                        None => f,
                        Some(a) => {
                            st.oplus_hat += 1;
                            oplus_hat(&a, &f)
                        }
                    });
                }
                acc
            }
        }
    }

    /// `F4(a, b)` for the children of `pi` on the two sides of the path.
    fn joint(&self, pi: usize, a: usize, b: usize, st: &mut QueryStats) -> KGraph<T> {
        let (lo, hi) = (a.min(b), a.max(b));
        let stored = if self.strategy == Strategy::F1234R {
            self.f4r.get(&(lo as u32, hi as u32)).cloned()
        } else {
            None
        };
        let t = match stored {
            Some(t) => t,
            None => {
                let mut runs = 0;
                let t = self.f4_fresh(pi, self.tree.child_index(lo), self.tree.child_index(hi), &mut runs);
                st.dijkstra_runs += runs;
                st.f4_computed += 1;
                t
            }
        };
        KGraph::Table(if a == lo { t } else { t.swapped() })
    }
}

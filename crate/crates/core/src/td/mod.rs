//! Index over a supplied tree decomposition.
//!
//! Tables are kept over bag interfaces, `A` = bag ∩ parent bag (the whole
//! bag at the root), and composed by closing overlays of bag-local graphs.

mod decomp;
mod index;

pub use decomp::{TdError, TreeDecomposition};
pub use index::{TdCounts, TdIndex, TdQueryStats};

use crate::algebra::Overlay;
use crate::structures::Semigroup;
use crate::weight::{DistPair, Scalar};

/// A square table of distance pairs over a vertex list.
#[derive(Clone, Debug, PartialEq)]
pub struct BagTable<T> {
    pub verts: Vec<u32>,
    /// Row-major, `verts.len()` squared entries.
    pub w: Vec<DistPair<T>>,
}

impl<T: Scalar> BagTable<T> {
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn slot(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&x| x as usize == v)
    }

    pub fn get(&self, u: usize, v: usize) -> Option<DistPair<T>> {
        let (i, j) = (self.slot(u)?, self.slot(v)?);
        Some(self.w[i * self.len() + j])
    }

    /// Closes the union of several tables and reads it over `keep`.
    pub fn join(parts: &[&BagTable<T>], keep: &[u32]) -> BagTable<T> {
        let keep = dedup(keep.iter().copied());
        let mut o = Overlay::new(parts.iter().flat_map(|p| p.verts.iter().copied()).chain(keep.iter().copied()));
        for p in parts {
            o.add_table(&p.verts, &p.w);
        }
        let w = o.close(&keep);
        BagTable { verts: keep, w }
    }
}

pub(crate) fn dedup(vs: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for v in vs {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Distances over the interfaces of a node `mu` and a descendant `lambda`
/// (`mu == lambda` for a bag-local piece with extra terminals).
#[derive(Clone, Debug, PartialEq)]
pub struct BagKTable<T> {
    pub mu: u32,
    pub lambda: u32,
    pub mu_terms: Vec<u32>,
    pub lambda_terms: Vec<u32>,
    /// Over `mu_terms` followed by the remaining `lambda_terms`.
    pub table: BagTable<T>,
}

/// A bag-terminal graph or the failure element.
#[derive(Clone, Debug, PartialEq)]
pub enum BagKGraph<T> {
    Bottom,
    Table(BagKTable<T>),
}

impl<T: Scalar> BagKGraph<T> {
    pub fn table(&self) -> Option<&BagKTable<T>> {
        match self {
            BagKGraph::Bottom => None,
            BagKGraph::Table(t) => Some(t),
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, BagKGraph::Bottom)
    }
}

/// Chain composition: defined when the lower node of `a` is the upper node
/// of `b`; the shared interface is eliminated.
pub fn bag_oplus_hat<T: Scalar>(a: &BagKGraph<T>, b: &BagKGraph<T>) -> BagKGraph<T> {
    let (BagKGraph::Table(a), BagKGraph::Table(b)) = (a, b) else {
        return BagKGraph::Bottom;
    };
    if a.lambda != b.mu {
        return BagKGraph::Bottom;
    }
    let keep: Vec<u32> = a.mu_terms.iter().chain(&b.lambda_terms).copied().collect();
    BagKGraph::Table(BagKTable {
        mu: a.mu,
        lambda: b.lambda,
        mu_terms: a.mu_terms.clone(),
        lambda_terms: b.lambda_terms.clone(),
        table: BagTable::join(&[&a.table, &b.table], &keep),
    })
}

impl<T: Scalar> Semigroup for BagKGraph<T> {
    fn combine(&self, rhs: &Self) -> Self {
        bag_oplus_hat(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Weight;

    fn line(verts: &[u32], w: i64) -> BagTable<i64> {
        // path over verts with uniform weight, closed
        let mut o = Overlay::new(verts.iter().copied());
        for p in verts.windows(2) {
            o.add(p[0], p[1], DistPair::new(Weight::Finite(w), Weight::Inf));
            o.add(p[1], p[0], DistPair::new(Weight::Finite(w), Weight::Inf));
        }
        BagTable { verts: verts.to_vec(), w: o.close(verts) }
    }

    fn kt(mu: u32, lambda: u32, m: &[u32], l: &[u32], t: BagTable<i64>) -> BagKGraph<i64> {
        let keep: Vec<u32> = m.iter().chain(l).copied().collect();
        let table = BagTable::join(&[&t], &keep);
        BagKGraph::Table(BagKTable { mu, lambda, mu_terms: m.to_vec(), lambda_terms: l.to_vec(), table })
    }

    #[test]
    fn chain_join_eliminates_the_middle() {
        let a = kt(0, 1, &[1, 2], &[3], line(&[1, 2, 3], 1));
        let b = kt(1, 2, &[3], &[4, 5], line(&[3, 4, 5], 2));
        let BagKGraph::Table(r) = bag_oplus_hat(&a, &b) else { panic!("bottom") };
        assert_eq!(r.table.verts, vec![1, 2, 4, 5]);
        assert_eq!(r.table.get(1, 5).unwrap().dist, Weight::Finite(6));
        assert!(bag_oplus_hat(&b, &a).is_bottom());
    }

    #[test]
    fn beer_survives_elimination() {
        let mut mid = line(&[1, 2, 3], 1);
        // vertex 2 is a beer vertex
        mid = {
            let mut o = Overlay::new(mid.verts.iter().copied());
            o.add_table(&mid.verts, &mid.w);
            o.add_beer_vertex(2);
            BagTable { verts: mid.verts.clone(), w: o.close(&mid.verts) }
        };
        let a = kt(0, 1, &[1], &[2, 3], mid);
        let b = kt(1, 2, &[2, 3], &[3], line(&[2, 3], 5));
        let BagKGraph::Table(r) = bag_oplus_hat(&a, &b) else { panic!("bottom") };
        assert_eq!(r.table.get(1, 3).unwrap(), DistPair::new(Weight::Finite(2), Weight::Finite(2)));
    }
}

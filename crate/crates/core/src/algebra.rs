//! Terminal distance graphs and their composition.

use crate::structures::Semigroup;
use crate::weight::{DistPair, Scalar, Weight};

/// Distances over an ordered terminal pair `(x, y)`, indexed `[0]=x, [1]=y`.
pub type Pair2<T> = [[DistPair<T>; 2]; 2];

/// A complete graph on the terminals of two tree nodes `mu` and `lambda`.
///
/// `verts` lists `x_mu, y_mu, x_lambda, y_lambda`; the same vertex may fill
/// several slots (for instance when `mu == lambda`), in which case the
/// corresponding rows agree.
#[derive(Clone, Debug, PartialEq)]
pub struct KTable<T> {
    pub mu: u32,
    pub lambda: u32,
    pub verts: [u32; 4],
    pub w: [[DistPair<T>; 4]; 4],
}

/// A terminal graph or the failure element.
#[derive(Clone, Debug, PartialEq)]
pub enum KGraph<T> {
    Bottom,
    Table(KTable<T>),
}

impl<T: Scalar> KTable<T> {
    /// `K_{node,node}` from a two-terminal table.
    pub fn from_pair(node: usize, x: usize, y: usize, p: &Pair2<T>) -> Self {
        let mut w = [[DistPair::unreachable(); 4]; 4];
        for (i, row) in w.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = p[i % 2][j % 2];
            }
        }
        KTable { mu: node as u32, lambda: node as u32, verts: [x as u32, y as u32, x as u32, y as u32], w }
    }

    pub fn slot(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&x| x as usize == v)
    }

    /// Weight between two terminal vertices.
    pub fn get(&self, u: usize, v: usize) -> Option<DistPair<T>> {
        Some(self.w[self.slot(u)?][self.slot(v)?])
    }

    /// The same table with the roles of the two nodes exchanged.
    pub fn swapped(&self) -> Self {
        const P: [usize; 4] = [2, 3, 0, 1];
        let mut w = self.w;
        for i in 0..4 {
            for j in 0..4 {
                w[i][j] = self.w[P[i]][P[j]];
            }
        }
        KTable {
            mu: self.lambda,
            lambda: self.mu,
            verts: [self.verts[2], self.verts[3], self.verts[0], self.verts[1]],
            w,
        }
    }
}

impl<T: Scalar> KGraph<T> {
    pub fn pair(node: usize, x: usize, y: usize, p: &Pair2<T>) -> Self {
        KGraph::Table(KTable::from_pair(node, x, y, p))
    }

    pub fn table(&self) -> Option<&KTable<T>> {
        match self {
            KGraph::Bottom => None,
            KGraph::Table(t) => Some(t),
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, KGraph::Bottom)
    }
}

const MAXV: usize = 8;

/// Overlay of two tables followed by re-shortening.
///
/// Returns `Bottom` unless the two node-tag sets share exactly one node.
pub fn oplus<T: Scalar>(h1: &KGraph<T>, h2: &KGraph<T>) -> KGraph<T> {
    let (KGraph::Table(a), KGraph::Table(b)) = (h1, h2) else {
        return KGraph::Bottom;
    };
    let mut shared = Vec::with_capacity(2);
    for t in [a.mu, a.lambda] {
        if (t == b.mu || t == b.lambda) && !shared.contains(&t) {
            shared.push(t);
        }
    }
    if shared.len() != 1 {
        return KGraph::Bottom;
    }
    let theta = shared[0];
    let other = |t: &KTable<T>| if t.mu == theta { t.lambda } else { t.mu };
    let (t1, t2) = (other(a), other(b));
    let ends = |t: &KTable<T>, node: u32| if t.mu == node { [t.verts[0], t.verts[1]] } else { [t.verts[2], t.verts[3]] };
    let (e1, e2) = (ends(a, t1), ends(b, t2));
    let out_verts = [e1[0], e1[1], e2[0], e2[1]];

    let mut vid = [0u32; MAXV];
    let mut nv = 0;
    let local = |v: u32, vid: &mut [u32; MAXV], nv: &mut usize| -> usize {
        if let Some(i) = vid[..*nv].iter().position(|&x| x == v) {
            return i;
        }
        vid[*nv] = v;
        *nv += 1;
        *nv - 1
    };
    let mut ia = [0usize; 4];
    let mut ib = [0usize; 4];
    for i in 0..4 {
        ia[i] = local(a.verts[i], &mut vid, &mut nv);
    }
    for i in 0..4 {
        ib[i] = local(b.verts[i], &mut vid, &mut nv);
    }
    let mut d = [[Weight::<T>::Inf; MAXV]; MAXV];
    let mut zb = [[Weight::<T>::Inf; MAXV]; MAXV];
    for (i, row) in d.iter_mut().enumerate().take(nv) {
        row[i] = Weight::zero();
    }
    for (t, idx) in [(a, &ia), (b, &ib)] {
        for i in 0..4 {
            for j in 0..4 {
                let (p, q) = (idx[i], idx[j]);
                let z = t.w[i][j];
                if p != q {
                    d[p][q] = d[p][q].min(z.dist);
                }
                zb[p][q] = zb[p][q].min(z.beer);
            }
        }
    }
    floyd_warshall(&mut d, nv);

    let mut ov = [0usize; 4];
    for i in 0..4 {
        ov[i] = vid[..nv].iter().position(|&x| x == out_verts[i]).expect("terminal present");
    }
    let mut w = [[DistPair::unreachable(); 4]; 4];
    for i in 0..4 {
        let u = ov[i];
        // Best way from u into the far end of each overlay edge, via its beer weight.
        let mut reach = [Weight::<T>::Inf; MAXV];
        for p in 0..nv {
            if !d[u][p].is_finite() {
                continue;
            }
            for q in 0..nv {
                reach[q] = reach[q].min(d[u][p] + zb[p][q]);
            }
        }
        for j in 0..4 {
            let v = ov[j];
            let mut bd = Weight::Inf;
            for q in 0..nv {
                bd = bd.min(reach[q] + d[q][v]);
            }
            w[i][j] = DistPair::new(d[u][v], bd);
        }
    }
    KGraph::Table(KTable { mu: t1, lambda: t2, verts: out_verts, w })
}

/// `oplus` restricted to chains: defined only when `h1`'s second node is
/// `h2`'s first node.
pub fn oplus_hat<T: Scalar>(h1: &KGraph<T>, h2: &KGraph<T>) -> KGraph<T> {
    match (h1, h2) {
        (KGraph::Table(a), KGraph::Table(b)) if a.lambda == b.mu => oplus(h1, h2),
        _ => KGraph::Bottom,
    }
}

impl<T: Scalar> Semigroup for KGraph<T> {
    fn combine(&self, rhs: &Self) -> Self {
        oplus_hat(self, rhs)
    }
}

fn floyd_warshall<T: Scalar, const N: usize>(d: &mut [[Weight<T>; N]; N], n: usize) {
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}

/// Distances for a single edge `(x, y)`, a two-vertex graph.
///
/// A beer walk must touch `x` or `y`; staying in place costs zero.
pub fn edge_table<T: Scalar>(w_xy: Weight<T>, w_yx: Weight<T>, beer_x: bool, beer_y: bool) -> Pair2<T> {
    let w = |u: usize, v: usize| match (u, v) {
        (0, 1) => w_xy,
        (1, 0) => w_yx,
        _ => Weight::zero(),
    };
    let beer = [beer_x, beer_y];
    let mut out = [[DistPair::unreachable(); 2]; 2];
    for u in 0..2 {
        for v in 0..2 {
            let mut bd = Weight::Inf;
            for (p, &is_beer) in beer.iter().enumerate() {
                if is_beer {
                    bd = bd.min(w(u, p) + w(p, v));
                }
            }
            out[u][v] = DistPair::new(w(u, v), bd);
        }
    }
    out
}

/// Distances across a bundle of parallel pieces between `x` and `y`, given
/// the elementwise minima `l` of the pieces' own tables.
pub fn parallel_table<T: Scalar>(l: &Pair2<T>) -> Pair2<T> {
    let d = |u: usize, v: usize| l[u][v].dist;
    let b = |u: usize, v: usize| l[u][v].beer;
    let (x, y) = (0, 1);
    let min4 = |a: Weight<T>, b: Weight<T>, c: Weight<T>, e: Weight<T>| a.min(b).min(c).min(e);
    let zero = Weight::zero();
    [
        [
            DistPair::new(zero, min4(b(x, x), d(x, y) + b(y, y) + d(y, x), b(x, y) + d(y, x), d(x, y) + b(y, x))),
            DistPair::new(
                d(x, y),
                min4(b(x, x) + d(x, y), d(x, y) + b(y, y), b(x, y), d(x, y) + d(x, y) + b(y, x)),
            ),
        ],
        [
            DistPair::new(
                d(y, x),
                min4(b(y, y) + d(y, x), d(y, x) + b(x, x), b(y, x), d(y, x) + d(y, x) + b(x, y)),
            ),
            DistPair::new(zero, min4(b(y, y), d(y, x) + b(x, x) + d(x, y), b(y, x) + d(x, y), d(y, x) + b(x, y))),
        ],
    ]
}

/// Elementwise minimum of two-terminal tables.
pub fn pair_min<T: Scalar>(a: &Pair2<T>, b: &Pair2<T>) -> Pair2<T> {
    [[a[0][0].min(b[0][0]), a[0][1].min(b[0][1])], [a[1][0].min(b[1][0]), a[1][1].min(b[1][1])]]
}

pub fn pair_unreachable<T: Scalar>() -> Pair2<T> {
    [[DistPair::unreachable(); 2]; 2]
}

/// Small all-pairs overlay used to glue pieces that meet only at terminals.
#[derive(Clone, Debug)]
pub(crate) struct Overlay<T> {
    verts: Vec<u32>,
    d: Vec<Weight<T>>,
    zb: Vec<Weight<T>>,
}

impl<T: Scalar> Overlay<T> {
    pub fn new(verts: impl IntoIterator<Item = u32>) -> Self {
        let mut vs: Vec<u32> = Vec::new();
        for v in verts {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        let n = vs.len();
        let mut d = vec![Weight::Inf; n * n];
        for i in 0..n {
            d[i * n + i] = Weight::zero();
        }
        Overlay { verts: vs, d, zb: vec![Weight::Inf; n * n] }
    }

    fn idx(&self, v: u32) -> usize {
        self.verts.iter().position(|&x| x == v).expect("vertex registered in overlay")
    }

    pub fn add(&mut self, u: u32, v: u32, z: DistPair<T>) {
        let n = self.verts.len();
        let (p, q) = (self.idx(u), self.idx(v));
        if p != q {
            self.d[p * n + q] = self.d[p * n + q].min(z.dist);
        }
        self.zb[p * n + q] = self.zb[p * n + q].min(z.beer);
    }

    pub fn add_pair(&mut self, x: usize, y: usize, t: &Pair2<T>) {
        let vs = [x as u32, y as u32];
        for i in 0..2 {
            for j in 0..2 {
                self.add(vs[i], vs[j], t[i][j]);
            }
        }
    }

    /// Adds a square table over `verts` (row-major).
    pub fn add_table(&mut self, verts: &[u32], w: &[DistPair<T>]) {
        let k = verts.len();
        for i in 0..k {
            for j in 0..k {
                self.add(verts[i], verts[j], w[i * k + j]);
            }
        }
    }

    pub fn add_beer_vertex(&mut self, v: u32) {
        self.add(v, v, DistPair::new(Weight::zero(), Weight::zero()));
    }

    /// Closes distances and reads the table over `keep` (row-major).
    pub fn close(mut self, keep: &[u32]) -> Vec<DistPair<T>> {
        let n = self.verts.len();
        for k in 0..n {
            for i in 0..n {
                let dik = self.d[i * n + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let via = dik + self.d[k * n + j];
                    if via < self.d[i * n + j] {
                        self.d[i * n + j] = via;
                    }
                }
            }
        }
        let ids: Vec<usize> = keep.iter().map(|&v| self.idx(v)).collect();
        let mut out = Vec::with_capacity(ids.len() * ids.len());
        let mut reach = vec![Weight::Inf; n];
        for &u in &ids {
            reach.iter_mut().for_each(|r| *r = Weight::Inf);
            for p in 0..n {
                let dup = self.d[u * n + p];
                if !dup.is_finite() {
                    continue;
                }
                for q in 0..n {
                    let z = self.zb[p * n + q];
                    if z.is_finite() {
                        reach[q] = reach[q].min(dup + z);
                    }
                }
            }
            for &v in &ids {
                let mut bd = Weight::Inf;
                for q in 0..n {
                    bd = bd.min(reach[q] + self.d[q * n + v]);
                }
                out.push(DistPair::new(self.d[u * n + v], bd));
            }
        }
        out
    }
}

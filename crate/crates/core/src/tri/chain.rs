//! Distance tables over the chain of an S node.
//!
//! Children are numbered `1..=k`; child `p` joins chain vertices `c_{p-1}`
//! and `c_p`. Every query about a contiguous range of children is answered
//! from prefix sums and four range-minimum tables.

use crate::algebra::Pair2;
use crate::structures::RmqTable;
use crate::weight::{DistPair, Scalar, Weight};

#[derive(Clone, Debug)]
pub(crate) struct ChainTables<T> {
    k: usize,
    beer: Vec<bool>,
    /// Prefix sums of the finite forward / backward child distances.
    pa: Vec<T>,
    pb: Vec<T>,
    /// First child `>= v + 1` whose forward (backward) distance is infinite.
    next_inf_a: Vec<usize>,
    next_inf_b: Vec<usize>,
    /// Last child `<= v` / first child `>= v + 1` that cannot be crossed
    /// in both directions.
    prev_block: Vec<usize>,
    next_block: Vec<usize>,
    bxy: RmqTable<Weight<T>>,
    byx: RmqTable<Weight<T>>,
    bxx: RmqTable<Weight<T>>,
    byy: RmqTable<Weight<T>>,
}

fn fin<T: Scalar>(w: Weight<T>) -> T {
    w.finite().unwrap_or_else(T::zero)
}

impl<T: Scalar> ChainTables<T> {
    /// `f1[p - 1]` is the table of child `p` oriented `(c_{p-1}, c_p)`;
    /// `beer[v]` tells whether `c_v` is a beer vertex.
    pub fn new(f1: &[&Pair2<T>], beer: Vec<bool>) -> Self {
        let k = f1.len();
        debug_assert_eq!(beer.len(), k + 1);
        let mut pa = vec![T::zero(); k + 1];
        let mut pb = vec![T::zero(); k + 1];
        for p in 1..=k {
            pa[p] = pa[p - 1] + fin(f1[p - 1][0][1].dist);
            pb[p] = pb[p - 1] + fin(f1[p - 1][1][0].dist);
        }
        let inf_a = |p: usize| !f1[p - 1][0][1].dist.is_finite();
        let inf_b = |p: usize| !f1[p - 1][1][0].dist.is_finite();
        let mut next_inf_a = vec![k + 1; k + 1];
        let mut next_inf_b = vec![k + 1; k + 1];
        let mut next_block = vec![k + 1; k + 1];
        for v in (0..k).rev() {
            let p = v + 1;
            next_inf_a[v] = if inf_a(p) { p } else { next_inf_a[v + 1] };
            next_inf_b[v] = if inf_b(p) { p } else { next_inf_b[v + 1] };
            next_block[v] = if inf_a(p) || inf_b(p) { p } else { next_block[v + 1] };
        }
        let mut prev_block = vec![0; k + 1];
        for v in 1..=k {
            prev_block[v] = if inf_a(v) || inf_b(v) { v } else { prev_block[v - 1] };
        }
        let mut bxy = Vec::with_capacity(k);
        let mut byx = Vec::with_capacity(k);
        let mut bxx = Vec::with_capacity(k);
        let mut byy = Vec::with_capacity(k);
        for p in 1..=k {
            let t = f1[p - 1];
            bxy.push(match t[0][1].dist {
                Weight::Finite(a) => t[0][1].beer.sub_finite(a),
                Weight::Inf => Weight::Inf,
            });
            byx.push(match t[1][0].dist {
                Weight::Finite(b) => t[1][0].beer.sub_finite(b),
                Weight::Inf => Weight::Inf,
            });
            bxx.push(t[0][0].beer + Weight::Finite(pa[p - 1] + pb[p - 1]));
            byy.push(t[1][1].beer + Weight::Finite((pa[k] - pa[p]) + (pb[k] - pb[p])));
        }
        ChainTables {
            k,
            beer,
            pa,
            pb,
            next_inf_a,
            next_inf_b,
            prev_block,
            next_block,
            bxy: RmqTable::new(bxy),
            byx: RmqTable::new(byx),
            bxx: RmqTable::new(bxx),
            byy: RmqTable::new(byy),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum over children `lo..=hi` (1-based) of one of the tables.
    fn range(t: &RmqTable<Weight<T>>, lo: usize, hi: usize) -> Weight<T> {
        if lo == 0 || lo > hi {
            return Weight::Inf;
        }
        t.query(lo - 1, hi - 1).unwrap_or(Weight::Inf)
    }

    fn forward(&self, a: usize, b: usize) -> Weight<T> {
        if self.next_inf_a[a] > b {
            Weight::Finite(self.pa[b] - self.pa[a])
        } else {
            Weight::Inf
        }
    }

    fn backward(&self, a: usize, b: usize) -> Weight<T> {
        if self.next_inf_b[b] > a {
            Weight::Finite(self.pb[a] - self.pb[b])
        } else {
            Weight::Inf
        }
    }

    /// Cheapest round trip from `c_v` into children `lo..=v` that collects beer.
    fn left_detour(&self, v: usize, lo: usize) -> Weight<T> {
        let from = lo.max(self.prev_block[v]).max(1);
        let m = Self::range(&self.byy, from, v);
        let k = self.k;
        m.sub_finite((self.pa[k] - self.pa[v]) + (self.pb[k] - self.pb[v]))
    }

    /// Cheapest round trip from `c_v` into children `v+1..=hi` that collects beer.
    fn right_detour(&self, v: usize, hi: usize) -> Weight<T> {
        let to = hi.min(self.next_block[v]);
        let m = Self::range(&self.bxx, v + 1, to);
        m.sub_finite(self.pa[v] + self.pb[v])
    }

    /// Distances from `c_a` to `c_b` using only children `lo..=hi`, where
    /// `lo - 1 <= a, b <= hi`. An empty range leaves only the trivial walk.
    pub fn pair(&self, lo: usize, hi: usize, a: usize, b: usize) -> DistPair<T> {
        debug_assert!(lo >= 1 && a + 1 >= lo && b + 1 >= lo && a <= hi && b <= hi);
        let (dist, mid, start, end) = if a <= b {
            let d = self.forward(a, b);
            let mid = Self::range(&self.bxy, a + 1, b);
            (d, mid, self.left_detour(a, lo), self.right_detour(b, hi))
        } else {
            let d = self.backward(a, b);
            let mid = Self::range(&self.byx, b + 1, a);
            (d, mid, self.right_detour(a, hi), self.left_detour(b, lo))
        };
        let mut beer = dist + mid.min(start).min(end);
        if self.beer[a] || self.beer[b] {
            beer = beer.min(dist);
        }
        DistPair::new(dist, beer)
    }

    /// Table over the chain positions `(a, b)` within children `lo..=hi`.
    pub fn pair2(&self, lo: usize, hi: usize, a: usize, b: usize) -> Pair2<T> {
        [[self.pair(lo, hi, a, a), self.pair(lo, hi, a, b)], [self.pair(lo, hi, b, a), self.pair(lo, hi, b, b)]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::edge_table;
    use crate::algebra::Overlay;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(x: i64) -> Weight<i64> {
        Weight::Finite(x)
    }

    /// Chain of single edges; each link is `(forward, backward)` and
    /// `beer[v]` marks chain vertices.
    fn chain(links: &[(Weight<i64>, Weight<i64>)], beer: &[bool]) -> (Vec<Pair2<i64>>, ChainTables<i64>) {
        let f1: Vec<Pair2<i64>> = links
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| edge_table(a, b, beer[i], beer[i + 1]))
            .collect();
        let refs: Vec<&Pair2<i64>> = f1.iter().collect();
        let t = ChainTables::new(&refs, beer.to_vec());
        (f1, t)
    }

    fn brute(f1: &[Pair2<i64>], lo: usize, hi: usize, a: usize, b: usize) -> DistPair<i64> {
        let verts: Vec<u32> = ((lo - 1)..=hi).map(|v| v as u32).collect();
        let mut o = Overlay::new(verts.iter().copied().chain([a as u32, b as u32]));
        for p in lo..=hi {
            o.add_pair(p - 1, p, &f1[p - 1]);
        }
        o.close(&[a as u32, b as u32])[1]
    }

    #[test]
    fn two_links_with_beer_in_the_middle() {
        let (_, t) = chain(&[(w(1), w(1)), (w(2), w(2))], &[false, true, false]);
        assert_eq!(t.pair(1, 2, 0, 2), DistPair::new(w(3), w(3)));
        assert_eq!(t.pair(1, 2, 0, 0), DistPair::new(w(0), w(2)));
        assert_eq!(t.pair(1, 2, 2, 0), DistPair::new(w(3), w(3)));
    }

    #[test]
    fn one_way_links_block_detours() {
        // c0 -> c1 only, beer behind it at c0.
        let (f1, t) = chain(&[(w(1), Weight::Inf), (w(1), w(1))], &[true, false, false]);
        assert_eq!(t.pair(1, 2, 1, 1).beer, Weight::Inf);
        assert_eq!(t.pair(1, 2, 1, 1), brute(&f1, 1, 2, 1, 1));
        assert_eq!(t.pair(1, 2, 0, 2), DistPair::new(w(2), w(2)));
    }

    #[test]
    fn random_chains_match_overlay() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let k = rng.gen_range(1..9);
            let links: Vec<_> = (0..k)
                .map(|_| {
                    let mut x = || if rng.gen_bool(0.15) { Weight::Inf } else { w(rng.gen_range(0..10)) };
                    (x(), x())
                })
                .collect();
            let beer: Vec<bool> = (0..=k).map(|_| rng.gen_bool(0.25)).collect();
            let (f1, t) = chain(&links, &beer);
            for lo in 1..=k {
                for hi in lo - 1..=k {
                    for a in lo - 1..=hi {
                        for b in lo - 1..=hi {
                            let want = if hi < lo {
                                DistPair::at_vertex(beer[a])
                            } else {
                                brute(&f1, lo, hi, a, b)
                            };
                            assert_eq!(t.pair(lo, hi, a, b), want, "k={k} lo={lo} hi={hi} a={a} b={b}");
                        }
                    }
                }
            }
        }
    }
}

use crate::algebra::Pair2;
use crate::shortest::{dijkstra, Digraph};
use crate::weight::{DistPair, Scalar, Weight};

/// A two-terminal piece glued into a skeleton: `(u, v, table over (u, v))`
/// with local vertex ids.
pub(crate) type Piece<'a, T> = (usize, usize, &'a Pair2<T>);

/// Distances between the `keep` vertices of a skeleton assembled from
/// pieces, by one forward and one backward search per distinct keep
/// vertex. Returns a row-major `keep x keep` table and adds the number of
/// searches to `runs`.
pub(crate) fn skeleton_closure<T: Scalar>(
    n: usize,
    pieces: &[Piece<'_, T>],
    beer: &[bool],
    keep: &[usize],
    runs: &mut usize,
) -> Vec<DistPair<T>> {
    let mut h = Digraph::new(n);
    for &(u, v, t) in pieces {
        h.add_arc(u, v, t[0][1].dist).expect("nonnegative");
        h.add_arc(v, u, t[1][0].dist).expect("nonnegative");
    }
    let rev = h.reversed();
    let mut distinct: Vec<usize> = keep.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let fwd: Vec<Vec<Weight<T>>> = distinct.iter().map(|&s| dijkstra(&h, s)).collect();
    let bwd: Vec<Vec<Weight<T>>> = distinct.iter().map(|&s| dijkstra(&rev, s)).collect();
    *runs += 2 * distinct.len();
    let at = |v: usize| distinct.binary_search(&v).expect("keep vertex");

    let mut out = Vec::with_capacity(keep.len() * keep.len());
    for &u in keep {
        let f = &fwd[at(u)];
        for &v in keep {
            let b = &bwd[at(v)];
            let mut bd = Weight::Inf;
            for &(p, q, t) in pieces {
                let ends = [p, q];
                for i in 0..2 {
                    if !f[ends[i]].is_finite() {
                        continue;
                    }
                    for j in 0..2 {
                        bd = bd.min(f[ends[i]] + t[i][j].beer + b[ends[j]]);
                    }
                }
            }
            for (w, &is_beer) in beer.iter().enumerate() {
                if is_beer {
                    bd = bd.min(f[w] + b[w]);
                }
            }
            out.push(DistPair::new(f[v], bd));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{edge_table, Overlay};

    #[test]
    fn agrees_with_overlay_on_k4() {
        let w = |x: i64| Weight::Finite(x);
        let edges = [(0, 1, 3), (0, 2, 1), (0, 3, 7), (1, 2, 1), (1, 3, 2), (2, 3, 5)];
        let beer = [false, false, false, true];
        let tabs: Vec<Pair2<i64>> = edges.iter().map(|&(u, v, x)| edge_table(w(x), w(x + 1), beer[u], beer[v])).collect();
        let pieces: Vec<Piece<'_, i64>> = edges.iter().zip(&tabs).map(|(&(u, v, _), t)| (u, v, t)).collect();
        let mut runs = 0;
        let keep = [0, 1, 2];
        let got = skeleton_closure(4, &pieces, &beer, &keep, &mut runs);
        assert_eq!(runs, 6);
        let mut o = Overlay::new(0..4u32);
        for &(u, v, t) in &pieces {
            o.add_pair(u, v, t);
        }
        assert_eq!(got, o.close(&[0, 1, 2]));
    }
}

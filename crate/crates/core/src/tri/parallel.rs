use crate::algebra::Pair2;
use crate::weight::{DistPair, Scalar, Weight};

const KEEP: usize = 3;

/// Entrywise minima over the children of a P node, keeping the three best
/// children per entry so that up to two children can be left out.
#[derive(Clone, Debug)]
pub(crate) struct ParallelMin<T> {
    /// `best[c][u][v]` for `c = 0` (distance) and `c = 1` (beer).
    best: [[[[(Weight<T>, u32); KEEP]; 2]; 2]; 2],
}

impl<T: Scalar> ParallelMin<T> {
    pub fn new<'a>(children: impl IntoIterator<Item = &'a Pair2<T>>) -> Self
    where
        T: 'a,
    {
        let mut best = [[[[(Weight::Inf, u32::MAX); KEEP]; 2]; 2]; 2];
        for (i, t) in children.into_iter().enumerate() {
            for u in 0..2 {
                for v in 0..2 {
                    for (c, val) in [t[u][v].dist, t[u][v].beer].into_iter().enumerate() {
                        let slot = &mut best[c][u][v];
                        let mut item = (val, i as u32);
                        for s in slot.iter_mut() {
                            if item.0 < s.0 {
                                std::mem::swap(s, &mut item);
                            }
                        }
                    }
                }
            }
        }
        ParallelMin { best }
    }

    /// Entrywise minimum over all children except those in `skip`.
    pub fn without(&self, skip: &[usize]) -> Pair2<T> {
        debug_assert!(skip.len() < KEEP);
        let pick = |slot: &[(Weight<T>, u32); KEEP]| {
            slot.iter()
                .find(|(_, i)| !skip.contains(&(*i as usize)))
                .map_or(Weight::Inf, |(w, _)| *w)
        };
        let mut out = [[DistPair::unreachable(); 2]; 2];
        for u in 0..2 {
            for v in 0..2 {
                out[u][v] = DistPair::new(pick(&self.best[0][u][v]), pick(&self.best[1][u][v]));
            }
        }
        out
    }
}

use super::Jumps;

/// An associative binary operation.
pub trait Semigroup: Clone {
    fn combine(&self, rhs: &Self) -> Self;
}

/// Products of node values along vertical tree paths.
///
/// `jump_value[v]` is the product, ordered from the top down, of the values
/// of the nodes strictly below `jump[v]` down to `v`. A query climbs with
/// jump pointers, so it combines O(log depth) stored products.
#[derive(Clone, Debug)]
pub struct TreeProduct<S> {
    jumps: Jumps,
    value: Vec<Option<S>>,
    jump_value: Vec<Option<S>>,
}

fn join<S: Semigroup>(a: &Option<S>, b: &Option<S>) -> Option<S> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.combine(b)),
        _ => None,
    }
}

impl<S: Semigroup> TreeProduct<S> {
    /// `value[v] == None` marks nodes that never appear inside a query range.
    pub fn new(parent: &[Option<usize>], value: Vec<Option<S>>) -> Self {
        assert_eq!(parent.len(), value.len());
        let jumps = Jumps::new(parent);
        let mut jump_value: Vec<Option<S>> = vec![None; value.len()];
        for &v in &jumps.order {
            let p = jumps.parent[v];
            if p == v {
                continue;
            }
            jump_value[v] = if jumps.jump[v] == p {
                value[v].clone()
            } else {
                let mid = join(&jump_value[jumps.jump[p]], &jump_value[p]);
                join(&mid, &value[v])
            };
        }
        TreeProduct { jumps, value, jump_value }
    }

    pub fn value(&self, v: usize) -> Option<&S> {
        self.value[v].as_ref()
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.jumps.depth[v]
    }

    /// Product of the values on the path from `top` down to `bottom`
    /// (both included, `top` an ancestor of `bottom`), and the number of
    /// `combine` calls spent.
    pub fn product(&self, top: usize, bottom: usize) -> (Option<S>, usize) {
        let d_top = self.jumps.depth[top];
        let mut v = bottom;
        let mut acc: Option<S> = None;
        let mut ops = 0;
        loop {
            let j = self.jumps.jump[v];
            let use_jump = j != v && self.jumps.depth[j] + 1 >= d_top && self.jumps.depth[v] > 0;
            let (piece, next) = if use_jump {
                (&self.jump_value[v], j)
            } else {
                (&self.value[v], self.jumps.parent[v])
            };
            let Some(piece) = piece else {
                return (None, ops);
            };
            acc = Some(match acc {
                None => piece.clone(),
                Some(a) => {
                    ops += 1;
                    piece.combine(&a)
                }
            });
            if v == top || self.jumps.depth[next] < d_top {
                break;
            }
            v = next;
        }
        (acc, ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// 2x2 matrices over wrapping integers: associative, not commutative.
    #[derive(Clone, Debug, PartialEq)]
    struct Mat([u64; 4]);

    impl Semigroup for Mat {
        fn combine(&self, r: &Self) -> Self {
            let (a, b) = (&self.0, &r.0);
            Mat([
                a[0].wrapping_mul(b[0]).wrapping_add(a[1].wrapping_mul(b[2])),
                a[0].wrapping_mul(b[1]).wrapping_add(a[1].wrapping_mul(b[3])),
                a[2].wrapping_mul(b[0]).wrapping_add(a[3].wrapping_mul(b[2])),
                a[2].wrapping_mul(b[1]).wrapping_add(a[3].wrapping_mul(b[3])),
            ])
        }
    }

    /// Concatenation records the exact order of the fold.
    impl Semigroup for Vec<usize> {
        fn combine(&self, r: &Self) -> Self {
            let mut out = self.clone();
            out.extend_from_slice(r);
            out
        }
    }

    fn path_top_down(parent: &[Option<usize>], top: usize, bottom: usize) -> Vec<usize> {
        let mut path = vec![bottom];
        let mut v = bottom;
        while v != top {
            v = parent[v].unwrap();
            path.push(v);
        }
        path.reverse();
        path
    }

    #[test]
    fn single_node_and_two_node_legs() {
        let parent = vec![None, Some(0), Some(1)];
        let tp = TreeProduct::new(&parent, vec![Some(vec![0]), Some(vec![1]), Some(vec![2])]);
        assert_eq!(tp.product(1, 1).0, Some(vec![1]));
        assert_eq!(tp.product(1, 2).0, Some(vec![1, 2]));
        assert_eq!(tp.product(0, 2).0, Some(vec![0, 1, 2]));
    }

    #[test]
    fn order_is_top_down_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 5, 8, 64, 500] {
            let parent: Vec<Option<usize>> = (0..n)
                .map(|v| if v == 0 { None } else if rng.gen_bool(0.8) { Some(v - 1) } else { Some(rng.gen_range(0..v)) })
                .collect();
            let tp = TreeProduct::new(&parent, (0..n).map(|v| Some(vec![v])).collect());
            for _ in 0..200 {
                let bottom = rng.gen_range(0..n);
                let path = path_top_down(&parent, 0, bottom);
                let top = path[rng.gen_range(0..path.len())];
                let want = path_top_down(&parent, top, bottom);
                assert_eq!(tp.product(top, bottom).0, Some(want));
            }
        }
    }

    #[test]
    fn matrix_products_match_sequential_fold() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 10_000;
        let parent: Vec<Option<usize>> =
            (0..n).map(|v| if v == 0 { None } else if rng.gen_bool(0.9) { Some(v - 1) } else { Some(rng.gen_range(0..v)) }).collect();
        let values: Vec<Mat> = (0..n).map(|_| Mat([rng.gen(), rng.gen(), rng.gen(), rng.gen()])).collect();
        let tp = TreeProduct::new(&parent, values.iter().cloned().map(Some).collect());
        let mut max_ops = 0;
        for _ in 0..1000 {
            let bottom = rng.gen_range(0..n);
            let path = path_top_down(&parent, 0, bottom);
            let top = path[rng.gen_range(0..path.len())];
            let seq = path_top_down(&parent, top, bottom);
            let mut want = values[seq[0]].clone();
            for &v in &seq[1..] {
                want = want.combine(&values[v]);
            }
            let (got, ops) = tp.product(top, bottom);
            assert_eq!(got, Some(want));
            max_ops = max_ops.max(ops);
        }
        assert!(max_ops <= 3 * 14, "too many combines: {max_ops}");
    }

    #[test]
    fn undefined_values_outside_the_range_are_ignored() {
        let parent = vec![None, Some(0), Some(1), Some(2), Some(3)];
        let values = vec![None, None, Some(vec![2]), Some(vec![3]), Some(vec![4])];
        let tp = TreeProduct::new(&parent, values);
        assert_eq!(tp.product(2, 4).0, Some(vec![2, 3, 4]));
        assert_eq!(tp.product(1, 4).0, None);
    }
}

use super::{Jumps, RmqTable};

/// Lowest common ancestors via an Euler tour and a sparse table.
#[derive(Clone, Debug)]
pub struct LcaIndex {
    first: Vec<usize>,
    euler: RmqTable<(u32, u32)>,
    jumps: Jumps,
}

impl LcaIndex {
    /// `parent[root] == None`.
    pub fn new(parent: &[Option<usize>]) -> Self {
        let jumps = Jumps::new(parent);
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        for &v in &jumps.order[1.min(n)..] {
            children[jumps.parent[v]].push(v);
        }
        let mut first = vec![0; n];
        let mut tour = Vec::with_capacity(2 * n);
        if n > 0 {
            let root = jumps.order[0];
            let mut stack = vec![(root, 0usize)];
            first[root] = 0;
            tour.push((0, root as u32));
            while let Some(top) = stack.last_mut() {
                let (v, i) = (top.0, top.1);
                if i < children[v].len() {
                    top.1 += 1;
                    let c = children[v][i];
                    first[c] = tour.len();
                    tour.push((jumps.depth[c], c as u32));
                    stack.push((c, 0));
                } else {
                    stack.pop();
                    if let Some(&(p, _)) = stack.last() {
                        tour.push((jumps.depth[p], p as u32));
                    }
                }
            }
        }
        LcaIndex { first, euler: RmqTable::new(tour), jumps }
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.first[u], self.first[v]);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.euler.query(lo, hi).expect("nodes belong to the tree").1 as usize
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.jumps.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.jumps.parent[v];
        (p != v).then_some(p)
    }

    /// The ancestor of `v` at depth `d` (`d <= depth(v)`).
    pub fn ancestor_at_depth(&self, v: usize, d: u32) -> usize {
        self.jumps.ancestor_at_depth(v, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<Option<usize>> {
        (0..n).map(|v| if v == 0 { None } else { Some(rng.gen_range(0..v)) }).collect()
    }

    fn naive_lca(parent: &[Option<usize>], u: usize, v: usize) -> usize {
        let mut anc = vec![false; parent.len()];
        let mut x = Some(u);
        while let Some(a) = x {
            anc[a] = true;
            x = parent[a];
        }
        let mut y = v;
        while !anc[y] {
            y = parent[y].unwrap();
        }
        y
    }

    #[test]
    fn trivial_cases() {
        let parent = vec![None, Some(0), Some(0), Some(1)];
        let idx = LcaIndex::new(&parent);
        assert_eq!(idx.lca(3, 3), 3);
        assert_eq!(idx.lca(0, 3), 0);
        assert_eq!(idx.lca(3, 2), 0);
        assert_eq!(idx.lca(3, 1), 1);
    }

    #[test]
    fn exhaustive_small_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=64 {
            let parent = random_tree(n, &mut rng);
            let idx = LcaIndex::new(&parent);
            for u in 0..n {
                for v in 0..n {
                    assert_eq!(idx.lca(u, v), naive_lca(&parent, u, v));
                }
            }
        }
    }

    #[test]
    fn random_queries_on_a_large_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 10_000;
        // Mix of deep chains and bushy parts.
        let parent: Vec<Option<usize>> = (0..n)
            .map(|v| match v {
                0 => None,
                _ if rng.gen_bool(0.7) => Some(v - 1),
                _ => Some(rng.gen_range(0..v)),
            })
            .collect();
        let idx = LcaIndex::new(&parent);
        for _ in 0..1000 {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            assert_eq!(idx.lca(u, v), naive_lca(&parent, u, v));
        }
    }

    #[test]
    fn level_ancestors() {
        let n = 300;
        let parent: Vec<Option<usize>> = (0..n).map(|v| if v == 0 { None } else { Some(v - 1) }).collect();
        let idx = LcaIndex::new(&parent);
        for v in 0..n {
            for d in 0..=v as u32 {
                assert_eq!(idx.ancestor_at_depth(v, d), d as usize);
            }
        }
    }
}

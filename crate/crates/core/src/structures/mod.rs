//! Range minimum, lowest common ancestor and tree product queries.

mod lca;
mod rmq;
mod tree_product;

pub use lca::LcaIndex;
pub use rmq::RmqTable;
pub use tree_product::{Semigroup, TreeProduct};

/// Skew-binary jump pointers over a rooted forest given by parent links.
///
/// `jump[v]` is an ancestor of `v` chosen so that climbing to any ancestor
/// takes O(log depth) steps while storing one pointer per node.
#[derive(Clone, Debug)]
pub(crate) struct Jumps {
    pub parent: Vec<usize>,
    pub depth: Vec<u32>,
    pub jump: Vec<usize>,
    /// Nodes with every parent before its children.
    pub order: Vec<usize>,
}

impl Jumps {
    /// `parent[root] == None`; exactly one root is expected.
    pub fn new(parent: &[Option<usize>]) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        let mut root = usize::MAX;
        for (v, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(v),
                None => root = v,
            }
        }
        assert!(root != usize::MAX || n == 0, "tree has no root");
        let mut order = Vec::with_capacity(n);
        let mut par = vec![usize::MAX; n];
        let mut depth = vec![0u32; n];
        let mut jump = vec![usize::MAX; n];
        if n > 0 {
            par[root] = root;
            jump[root] = root;
            order.push(root);
            let mut i = 0;
            while i < order.len() {
                let v = order[i];
                i += 1;
                for &c in &children[v] {
                    par[c] = v;
                    depth[c] = depth[v] + 1;
                    let j = jump[v];
                    jump[c] = if depth[v] - depth[j] == depth[j] - depth[jump[j]] { jump[j] } else { v };
                    order.push(c);
                }
            }
        }
        Jumps { parent: par, depth, jump, order }
    }

    pub fn ancestor_at_depth(&self, mut v: usize, d: u32) -> usize {
        debug_assert!(d <= self.depth[v]);
        while self.depth[v] > d {
            v = if self.depth[self.jump[v]] >= d { self.jump[v] } else { self.parent[v] };
        }
        v
    }
}

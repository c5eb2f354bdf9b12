//! Low-link DFS over multigraphs given as adjacency lists with edge ids.

pub(crate) const UNSEEN: u32 = u32::MAX;
pub(crate) const NONE: usize = usize::MAX;

/// `adj[v]` lists `(neighbour, edge id)`; parallel edges carry distinct ids.
pub(crate) type Adjacency = Vec<Vec<(usize, usize)>>;

pub(crate) struct LowLink {
    pub disc: Vec<u32>,
    pub low: Vec<u32>,
    pub parent: Vec<usize>,
    /// Vertices in discovery order.
    pub order: Vec<usize>,
}

/// Iterative DFS from `root`, optionally ignoring one vertex.
pub(crate) fn lowlink(adj: &Adjacency, root: usize, removed: Option<usize>) -> LowLink {
    let n = adj.len();
    let mut ll = LowLink {
        disc: vec![UNSEEN; n],
        low: vec![UNSEEN; n],
        parent: vec![NONE; n],
        order: Vec::new(),
    };
    let mut time = 0u32;
    ll.disc[root] = time;
    ll.low[root] = time;
    time += 1;
    ll.order.push(root);
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, NONE, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, pe) = (top.0, top.1);
        if top.2 < adj[v].len() {
            let (w, e) = adj[v][top.2];
            top.2 += 1;
            if e == pe || Some(w) == removed {
                continue;
            }
            if ll.disc[w] == UNSEEN {
                ll.disc[w] = time;
                ll.low[w] = time;
                time += 1;
                ll.parent[w] = v;
                ll.order.push(w);
                stack.push((w, e, 0));
            } else if ll.disc[w] < ll.low[v] {
                ll.low[v] = ll.disc[w];
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                if ll.low[v] < ll.low[p] {
                    ll.low[p] = ll.low[v];
                }
            }
        }
    }
    ll
}

/// Some articulation vertex of the component containing `root`, if any.
pub(crate) fn find_articulation(adj: &Adjacency, root: usize) -> Option<usize> {
    let ll = lowlink(adj, root, None);
    let mut root_children = 0;
    for &w in &ll.order[1..] {
        let p = ll.parent[w];
        if p == root {
            root_children += 1;
            if root_children >= 2 {
                return Some(root);
            }
        } else if ll.low[w] >= ll.disc[p] {
            return Some(p);
        }
    }
    None
}

#[cfg(test)]
/// All articulation vertices of the component of `root` in `adj` minus `removed`.
pub(crate) fn articulations(adj: &Adjacency, root: usize, removed: Option<usize>) -> Vec<usize> {
    let ll = lowlink(adj, root, removed);
    let mut is_cut = vec![false; adj.len()];
    let mut root_children = 0;
    for &w in &ll.order[1..] {
        let p = ll.parent[w];
        if p == root {
            root_children += 1;
        } else if ll.low[w] >= ll.disc[p] {
            is_cut[p] = true;
        }
    }
    if root_children >= 2 {
        is_cut[root] = true;
    }
    (0..adj.len()).filter(|&v| is_cut[v]).collect()
}

/// Edge partition of the component of `root` into biconnected blocks.
pub(crate) fn blocks(adj: &Adjacency, root: usize) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![UNSEEN; n];
    let mut out = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut time = 0u32;
    disc[root] = time;
    low[root] = time;
    time += 1;
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, NONE, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, pe) = (top.0, top.1);
        if top.2 < adj[v].len() {
            let (w, e) = adj[v][top.2];
            top.2 += 1;
            if e == pe {
                continue;
            }
            if disc[w] == UNSEEN {
                disc[w] = time;
                low[w] = time;
                time += 1;
                edge_stack.push(e);
                stack.push((w, e, 0));
            } else if disc[w] < disc[v] {
                edge_stack.push(e);
                if disc[w] < low[v] {
                    low[v] = disc[w];
                }
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                if low[v] < low[p] {
                    low[p] = low[v];
                }
                if low[v] >= disc[p] {
                    let mut block = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        block.push(e);
                        if e == pe {
                            break;
                        }
                    }
                    out.push(block);
                }
            }
        }
    }
    out
}

//! Rooted SPQR trees of biconnected multigraphs.
//!
//! Node ids are assigned so that every parent has a smaller id than its
//! children; bottom-up passes iterate ids in reverse.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::connectivity::{self, Adjacency, UNSEEN};
use crate::graph::BeerGraph;
use crate::weight::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    S,
    P,
    Q,
    R,
}

impl NodeKind {
    pub fn letter(self) -> char {
        match self {
            NodeKind::S => 'S',
            NodeKind::P => 'P',
            NodeKind::Q => 'Q',
            NodeKind::R => 'R',
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// What a skeleton edge stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkelTag {
    /// A graph edge.
    Real(usize),
    /// The virtual edge towards the parent.
    Reference,
    /// The virtual edge of the `i`-th child.
    Child(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkelEdge {
    pub u: usize,
    pub v: usize,
    pub tag: SkelTag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpqrNode {
    pub kind: NodeKind,
    /// Terminals `(x, y)` of the reference edge.
    pub x: usize,
    pub y: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub skeleton: Vec<SkelEdge>,
    /// Skeleton vertices. For S nodes this is the chain `x = c_0, .., c_k = y`.
    pub verts: Vec<usize>,
}

impl SpqrNode {
    /// The graph edge of a Q node.
    pub fn real_edge(&self) -> Option<usize> {
        self.skeleton.iter().find_map(|e| match e.tag {
            SkelTag::Real(i) => Some(i),
            _ => None,
        })
    }

    pub fn n_skel(&self) -> usize {
        self.verts.len()
    }

    pub fn m_skel(&self) -> usize {
        self.skeleton.len()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SpqrError {
    #[error("graph is not biconnected: vertex {} is an articulation vertex", .articulation + 1)]
    NotBiconnected { articulation: usize },
    #[error("reference edge {edge} does not exist")]
    ReferenceEdgeMissing { edge: usize },
    #[error("a decomposition needs at least two edges")]
    TooFewEdges,
}

/// Size statistics of a tree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub q: usize,
    pub s: usize,
    pub p: usize,
    pub r_nodes: usize,
    /// Largest R skeleton edge count, 0 without R nodes.
    pub r: usize,
    pub r_plus: usize,
    /// Sums of skeleton edge and vertex counts over S, P and R nodes.
    pub sum_m: usize,
    pub sum_n: usize,
    /// Vertex count sum over S and R nodes only.
    pub sum_n_sr: usize,
    /// Sum over R nodes of the squared skeleton edge count.
    pub sum_r_m2: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpqrTree {
    pub nodes: Vec<SpqrNode>,
    pub ref_edge: usize,
    /// Q node of every graph edge.
    pub qnode_of_edge: Vec<usize>,
    /// A Q node whose skeleton contains the vertex (never the root).
    pub vertex_to_qnode: Vec<usize>,
}

pub const ROOT: usize = 0;
pub const ROOT_CHILD: usize = 1;

struct Task {
    edges: Vec<usize>,
    x: usize,
    y: usize,
    id: usize,
}

/// Local relabelling of the vertices touched by an edge subset.
struct Local {
    verts: Vec<usize>,
    /// `(neighbour, index into the edge list)`.
    adj: Adjacency,
}

impl Local {
    fn new(ends: &[(usize, usize)], edges: &[usize], slot: &mut [usize], extra: Option<(usize, usize)>) -> Self {
        let mut verts = Vec::new();
        let mut adj: Adjacency = Vec::new();
        let mut id = |v: usize, verts: &mut Vec<usize>, adj: &mut Adjacency| {
            if slot[v] == usize::MAX {
                slot[v] = verts.len();
                verts.push(v);
                adj.push(Vec::new());
            }
            slot[v]
        };
        let pairs = edges.iter().map(|&e| ends[e]).chain(extra);
        for (i, (u, v)) in pairs.enumerate() {
            let (a, b) = (id(u, &mut verts, &mut adj), id(v, &mut verts, &mut adj));
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        Local { verts, adj }
    }

    fn release(&self, slot: &mut [usize]) {
        for &v in &self.verts {
            slot[v] = usize::MAX;
        }
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

impl SpqrTree {
    /// Decomposes `g` with respect to the edge `ref_edge`.
    pub fn build<T: Scalar>(g: &BeerGraph<T>, ref_edge: usize) -> Result<Self, SpqrError> {
        if ref_edge >= g.m() {
            return Err(SpqrError::ReferenceEdgeMissing { edge: ref_edge });
        }
        if g.m() < 2 {
            return Err(SpqrError::TooFewEdges);
        }
        if let Some(a) = g.articulation_vertex() {
            return Err(SpqrError::NotBiconnected { articulation: a });
        }
        Ok(Self::build_from_ends(g.n(), &g.endpoints(), ref_edge))
    }

    fn build_from_ends(n: usize, ends: &[(usize, usize)], ref_edge: usize) -> Self {
        let (x0, y0) = ends[ref_edge];
        let mut nodes = vec![SpqrNode {
            kind: NodeKind::Q,
            x: x0,
            y: y0,
            parent: None,
            children: vec![ROOT_CHILD],
            skeleton: vec![
                SkelEdge { u: x0, v: y0, tag: SkelTag::Real(ref_edge) },
                SkelEdge { u: x0, v: y0, tag: SkelTag::Child(0) },
            ],
            verts: vec![x0, y0],
        }];
        let rest: Vec<usize> = (0..ends.len()).filter(|&e| e != ref_edge).collect();
        nodes.push(placeholder(ROOT, x0, y0));
        let mut stack = vec![Task { edges: rest, x: x0, y: y0, id: ROOT_CHILD }];
        let mut slot = vec![usize::MAX; n];
        while let Some(task) = stack.pop() {
            let parts = decompose(ends, &task, &mut slot);
            let node = &mut nodes[task.id];
            node.kind = parts.kind;
            node.verts = parts.verts;
            node.skeleton.push(SkelEdge { u: task.x, v: task.y, tag: SkelTag::Reference });
            if let Some(e) = parts.real {
                node.skeleton.insert(0, SkelEdge { u: task.x, v: task.y, tag: SkelTag::Real(e) });
            }
            let first = nodes.len();
            for (i, (edges, cx, cy)) in parts.children.into_iter().enumerate() {
                let cid = first + i;
                let node = &mut nodes[task.id];
                node.children.push(cid);
                node.skeleton.push(SkelEdge { u: cx, v: cy, tag: SkelTag::Child(i) });
                nodes.push(placeholder(task.id, cx, cy));
                stack.push(Task { edges, x: cx, y: cy, id: cid });
            }
        }
        let mut qnode_of_edge = vec![usize::MAX; ends.len()];
        qnode_of_edge[ref_edge] = ROOT;
        for (id, node) in nodes.iter().enumerate().skip(1) {
            if node.kind == NodeKind::Q {
                qnode_of_edge[node.real_edge().expect("Q node has an edge")] = id;
            }
        }
        let mut vertex_to_qnode = vec![usize::MAX; n];
        for (e, &(u, v)) in ends.iter().enumerate() {
            if e == ref_edge {
                continue;
            }
            for w in [u, v] {
                if vertex_to_qnode[w] == usize::MAX {
                    vertex_to_qnode[w] = qnode_of_edge[e];
                }
            }
        }
        SpqrTree { nodes, ref_edge, qnode_of_edge, vertex_to_qnode }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &SpqrNode {
        &self.nodes[id]
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        self.nodes.iter().map(|n| n.parent).collect()
    }

    /// Position of `child` among its parent's children.
    pub fn child_index(&self, child: usize) -> usize {
        let p = self.nodes[child].parent.expect("not the root");
        self.nodes[p].children.iter().position(|&c| c == child).expect("listed child")
    }

    /// Every Q node, other than the root, whose skeleton contains `v`.
    pub fn qnodes_of_vertex(&self, v: usize) -> Vec<usize> {
        (1..self.nodes.len())
            .filter(|&i| {
                let n = &self.nodes[i];
                n.kind == NodeKind::Q && (n.x == v || n.y == v)
            })
            .collect()
    }

    pub fn stats(&self) -> TreeStats {
        let mut s = TreeStats::default();
        for n in &self.nodes {
            match n.kind {
                NodeKind::Q => s.q += 1,
                NodeKind::S => s.s += 1,
                NodeKind::P => s.p += 1,
                NodeKind::R => {
                    s.r_nodes += 1;
                    s.r = s.r.max(n.m_skel());
                    s.sum_r_m2 += n.m_skel() * n.m_skel();
                }
            }
            if n.kind != NodeKind::Q {
                s.sum_m += n.m_skel();
                s.sum_n += n.n_skel();
                if n.kind != NodeKind::P {
                    s.sum_n_sr += n.n_skel();
                }
            }
        }
        s.r_plus = s.r.max(1);
        s
    }

    /// Real edges of `G_mu` for every node, each list sorted.
    pub fn subtree_edge_sets(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            let node = &self.nodes[id];
            let mut own: Vec<usize> = if node.kind == NodeKind::Q && id != ROOT {
                node.real_edge().into_iter().collect()
            } else {
                Vec::new()
            };
            for &c in &node.children {
                own.extend_from_slice(&sets[c]);
            }
            own.sort_unstable();
            sets[id] = own;
        }
        sets
    }

    /// One line per node: `id kind parent x y [children]`, vertices 1-based.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (id, n) in self.nodes.iter().enumerate() {
            let parent = n.parent.map_or("-".to_string(), |p| p.to_string());
            let kids: Vec<String> = n.children.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "{id} {} {parent} {} {} [{}]", n.kind, n.x + 1, n.y + 1, kids.join(" "));
        }
        s
    }

    /// Checks the structural invariants of the tree against the graph's
    /// edge endpoints. Returns a description of the first violation.
    pub fn verify_structure(&self, ends: &[(usize, usize)]) -> Result<(), String> {
        let root = &self.nodes[ROOT];
        if root.kind != NodeKind::Q || root.children != vec![ROOT_CHILD] {
            return Err("root must be a Q node with a single child".into());
        }
        for (id, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                if c <= id || self.nodes[c].parent != Some(id) {
                    return Err(format!("node {id}: child {c} badly linked"));
                }
            }
            let virt: Vec<&SkelEdge> =
                n.skeleton.iter().filter(|e| matches!(e.tag, SkelTag::Child(_))).collect();
            if virt.len() != n.children.len() {
                return Err(format!("node {id}: {} child edges for {} children", virt.len(), n.children.len()));
            }
            for (i, e) in virt.iter().enumerate() {
                let c = &self.nodes[n.children[i]];
                if e.tag != SkelTag::Child(i) || (e.u, e.v) != (c.x, c.y) {
                    return Err(format!("node {id}: child edge {i} does not match child terminals"));
                }
            }
            for e in &n.skeleton {
                if let SkelTag::Real(r) = e.tag {
                    let (a, b) = ends[r];
                    if !((a, b) == (e.u, e.v) || (b, a) == (e.u, e.v)) {
                        return Err(format!("node {id}: real edge {r} has wrong endpoints"));
                    }
                }
            }
            if let Some(p) = n.parent {
                let pk = self.nodes[p].kind;
                if pk == n.kind && matches!(n.kind, NodeKind::S | NodeKind::P) {
                    return Err(format!("nodes {p} and {id} are adjacent {} nodes", n.kind));
                }
            }
            match n.kind {
                NodeKind::Q => {
                    if n.skeleton.len() != 2 || n.verts.len() != 2 {
                        return Err(format!("Q node {id} must have 2 vertices and 2 edges"));
                    }
                }
                NodeKind::P => {
                    if n.skeleton.len() < 3 || n.verts.len() != 2 {
                        return Err(format!("P node {id} must have 2 vertices and at least 3 edges"));
                    }
                    if n.skeleton.iter().any(|e| (e.u, e.v) != (n.x, n.y)) {
                        return Err(format!("P node {id} edges must join its terminals"));
                    }
                }
                NodeKind::S => {
                    let k = n.verts.len() - 1;
                    if k < 2 || n.verts[0] != n.x || n.verts[k] != n.y || n.children.len() != k {
                        return Err(format!("S node {id} is not a chain of length at least 2"));
                    }
                    let distinct: BTreeSet<usize> = n.verts.iter().copied().collect();
                    if distinct.len() != n.verts.len() {
                        return Err(format!("S node {id} repeats a chain vertex"));
                    }
                    for i in 1..=k {
                        let c = &self.nodes[n.children[i - 1]];
                        if (c.x, c.y) != (n.verts[i - 1], n.verts[i]) {
                            return Err(format!("S node {id}: child {i} is not the chain link"));
                        }
                    }
                }
                NodeKind::R => {
                    if let Err(e) = check_triconnected(&n.verts, &n.skeleton) {
                        return Err(format!("R node {id}: {e}"));
                    }
                }
            }
        }
        let sets = self.subtree_edge_sets();
        let mut expect: Vec<usize> = (0..ends.len()).filter(|&e| e != self.ref_edge).collect();
        expect.sort_unstable();
        if sets[ROOT_CHILD] != expect {
            return Err("root child does not cover every non-reference edge exactly once".into());
        }
        let q = self.nodes.iter().filter(|n| n.kind == NodeKind::Q).count();
        if q != ends.len() {
            return Err(format!("{q} Q nodes for {} edges", ends.len()));
        }
        Ok(())
    }
}

fn placeholder(parent: usize, x: usize, y: usize) -> SpqrNode {
    SpqrNode {
        kind: NodeKind::Q,
        x,
        y,
        parent: Some(parent),
        children: Vec::new(),
        skeleton: Vec::new(),
        verts: Vec::new(),
    }
}

struct Parts {
    kind: NodeKind,
    verts: Vec<usize>,
    real: Option<usize>,
    children: Vec<(Vec<usize>, usize, usize)>,
}

fn decompose(ends: &[(usize, usize)], task: &Task, slot: &mut [usize]) -> Parts {
    let (x, y) = (task.x, task.y);
    if task.edges.len() == 1 {
        return Parts { kind: NodeKind::Q, verts: vec![x, y], real: Some(task.edges[0]), children: Vec::new() };
    }
    let local = Local::new(ends, &task.edges, slot, None);
    let parts = classify(ends, task, &local, slot);
    local.release(slot);
    parts
}

fn classify(ends: &[(usize, usize)], task: &Task, local: &Local, slot: &[usize]) -> Parts {
    let (x, y) = (task.x, task.y);
    let (lx, ly) = (slot[x], slot[y]);
    let nl = local.verts.len();

    // Split components of {x, y}.
    let mut dsu = Dsu::new(nl);
    for &e in &task.edges {
        let (a, b) = (slot[ends[e].0], slot[ends[e].1]);
        if a != lx && a != ly && b != lx && b != ly {
            dsu.union(a, b);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut direct = Vec::new();
    for &e in &task.edges {
        let (a, b) = (slot[ends[e].0], slot[ends[e].1]);
        let inner = if a != lx && a != ly { Some(a) } else if b != lx && b != ly { Some(b) } else { None };
        match inner {
            Some(v) => comps.entry(dsu.find(v)).or_default().push(e),
            None => direct.push(vec![e]),
        }
    }
    let mut groups: Vec<Vec<usize>> = comps.into_values().chain(direct).collect();
    if groups.len() >= 2 {
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort_by_key(|g| g[0]);
        return Parts {
            kind: NodeKind::P,
            verts: vec![x, y],
            real: None,
            children: groups.into_iter().map(|g| (g, x, y)).collect(),
        };
    }

    // Series case: blocks of the component without the reference edge.
    let blocks = connectivity::blocks(&local.adj, lx);
    if blocks.len() >= 2 {
        return series(ends, task, &local, blocks, slot);
    }

    rigid(ends, task, local, slot)
}

fn series(ends: &[(usize, usize)], task: &Task, local: &Local, blocks: Vec<Vec<usize>>, slot: &[usize]) -> Parts {
    let nl = local.verts.len();
    let mut count = vec![0u32; nl];
    let mut bverts: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let mut vs: Vec<usize> = b
            .iter()
            .flat_map(|&i| {
                let (u, v) = ends[task.edges[i]];
                [slot[u], slot[v]]
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        for &v in &vs {
            count[v] += 1;
        }
        bverts.push(vs);
    }
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); nl];
    for (bi, vs) in bverts.iter().enumerate() {
        for &v in vs {
            containing[v].push(bi);
        }
    }
    let (lx, ly) = (slot[task.x], slot[task.y]);
    let mut used = vec![false; blocks.len()];
    let mut chain = vec![task.x];
    let mut children = Vec::with_capacity(blocks.len());
    let mut cur = lx;
    while cur != ly {
        let bi = *containing[cur].iter().find(|&&b| !used[b]).expect("series chain continues");
        used[bi] = true;
        let next = *bverts[bi]
            .iter()
            .find(|&&v| v != cur && (v == ly || count[v] >= 2))
            .expect("block has an exit");
        let mut es: Vec<usize> = blocks[bi].iter().map(|&i| task.edges[i]).collect();
        es.sort_unstable();
        children.push((es, local.verts[cur], local.verts[next]));
        chain.push(local.verts[next]);
        cur = next;
    }
    debug_assert!(used.iter().all(|&u| u));
    Parts { kind: NodeKind::S, verts: chain, real: None, children }
}

fn rigid(ends: &[(usize, usize)], task: &Task, local: &Local, slot: &[usize]) -> Parts {
    let nl = local.verts.len();
    let (lx, ly) = (slot[task.x], slot[task.y]);
    let mut adj = local.adj.clone();
    let virt = task.edges.len();
    adj[lx].push((ly, virt));
    adj[ly].push((lx, virt));

    let mut hidden = vec![false; nl];
    let mut mark = vec![0i32; nl + 1];
    let mut size = vec![0usize; nl];
    for a in 0..nl {
        let r = if a == lx { ly } else { lx };
        let ll = connectivity::lowlink(&adj, r, Some(a));
        for s in size.iter_mut() {
            *s = 1;
        }
        for &w in ll.order.iter().rev() {
            let p = ll.parent[w];
            if p != connectivity::NONE {
                size[p] += size[w];
            }
        }
        mark.iter_mut().for_each(|m| *m = 0);
        let pair_is_ref = |b: usize| (a == lx && b == ly) || (a == ly && b == lx);
        let hide = |w: usize, mark: &mut Vec<i32>| {
            let d = ll.disc[w] as usize;
            mark[d] += 1;
            mark[d + size[w]] -= 1;
        };
        let mut root_kids = Vec::new();
        for &w in &ll.order[1..] {
            let p = ll.parent[w];
            if p == r {
                root_kids.push(w);
            } else if ll.low[w] >= ll.disc[p] && !pair_is_ref(p) {
                hide(w, &mut mark);
            }
        }
        if root_kids.len() >= 2 && !pair_is_ref(r) {
            for &w in &root_kids {
                let dw = ll.disc[w];
                let has_y = ll.disc[ly] != UNSEEN && ll.disc[ly] >= dw && (ll.disc[ly] as usize) < dw as usize + size[w];
                if !has_y {
                    hide(w, &mut mark);
                }
            }
        }
        let mut run = 0;
        let mut by_time = vec![usize::MAX; ll.order.len()];
        for &v in &ll.order {
            by_time[ll.disc[v] as usize] = v;
        }
        for (t, &v) in by_time.iter().enumerate() {
            run += mark[t];
            if run > 0 {
                hidden[v] = true;
            }
        }
    }
    debug_assert!(!hidden[lx] && !hidden[ly]);

    let mut dsu = Dsu::new(nl);
    for &e in &task.edges {
        let (a, b) = (slot[ends[e].0], slot[ends[e].1]);
        if hidden[a] && hidden[b] {
            dsu.union(a, b);
        }
    }
    let mut attach: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &e in &task.edges {
        let (a, b) = (slot[ends[e].0], slot[ends[e].1]);
        if hidden[a] != hidden[b] {
            let (h, s) = if hidden[a] { (a, b) } else { (b, a) };
            attach.entry(dsu.find(h)).or_default().insert(local.verts[s]);
        }
    }
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &e in &task.edges {
        let (u, v) = ends[e];
        let (a, b) = (slot[u], slot[v]);
        let key = if hidden[a] || hidden[b] {
            let h = if hidden[a] { a } else { b };
            let at: Vec<usize> = attach[&dsu.find(h)].iter().copied().collect();
            assert_eq!(at.len(), 2, "hidden component must attach to exactly two skeleton vertices");
            (at[0], at[1])
        } else {
            (u.min(v), u.max(v))
        };
        groups.entry(key).or_default().push(e);
    }
    let mut verts: Vec<usize> = (0..nl).filter(|&v| !hidden[v]).map(|v| local.verts[v]).collect();
    verts.sort_unstable();
    let children = groups
        .into_iter()
        .map(|((a, b), mut es)| {
            es.sort_unstable();
            (es, a, b)
        })
        .collect();
    Parts { kind: NodeKind::R, verts, real: None, children }
}

/// Exhaustive check that a skeleton is simple and triconnected: at least
/// four vertices, no parallel edges, and connected after removing any two
/// vertices.
pub fn check_triconnected(verts: &[usize], skeleton: &[SkelEdge]) -> Result<(), String> {
    let n = verts.len();
    if n < 4 {
        return Err(format!("only {n} vertices"));
    }
    let idx = |v: usize| verts.iter().position(|&w| w == v).expect("skeleton vertex");
    let mut pairs = BTreeSet::new();
    let mut adj = vec![Vec::new(); n];
    for e in skeleton {
        let (a, b) = (idx(e.u), idx(e.v));
        if a == b || !pairs.insert((a.min(b), a.max(b))) {
            return Err("skeleton is not simple".into());
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    for i in 0..n {
        for j in i + 1..n {
            let start = (0..n).find(|&v| v != i && v != j).expect("n >= 4");
            let mut seen = vec![false; n];
            seen[i] = true;
            seen[j] = true;
            seen[start] = true;
            let mut stack = vec![start];
            let mut reached = 1;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        reached += 1;
                        stack.push(w);
                    }
                }
            }
            if reached != n - 2 {
                return Err(format!("removing {} and {} disconnects the skeleton", verts[i] + 1, verts[j] + 1));
            }
        }
    }
    Ok(())
}

/// All split pairs: adjacent pairs and pairs whose removal disconnects the
/// graph. Brute force, intended for small graphs.
pub fn split_pairs(n: usize, ends: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for &(u, v) in ends {
        out.insert((u.min(v), u.max(v)));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in ends {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in 0..n {
        for b in a + 1..n {
            let Some(start) = (0..n).find(|&v| v != a && v != b) else { continue };
            let mut seen = vec![false; n];
            seen[a] = true;
            seen[b] = true;
            seen[start] = true;
            let mut stack = vec![start];
            let mut reached = 1;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        reached += 1;
                        stack.push(w);
                    }
                }
            }
            if reached != n - 2 {
                out.insert((a, b));
            }
        }
    }
    out
}

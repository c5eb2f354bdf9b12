//! Versioned binary format for built indexes.
//!
//! Layout: magic `BPIX1`, format version (u16), scalar kind, strategy
//! (0 f12, 1 f123, 2 f1234r, 3 td), directed flag, then the graph and the
//! tables. Integers are little-endian; weights are a tag byte followed by
//! the raw bits when finite.

use std::collections::HashMap;
use std::io::{self, Cursor, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use thiserror::Error;

use crate::algebra::{KTable, Pair2};
use crate::graph::{BeerGraph, Edge};
use crate::spqr::{NodeKind, SkelEdge, SkelTag, SpqrNode, SpqrTree};
use crate::td::{BagKTable, BagTable, TdIndex, TreeDecomposition};
use crate::tri::{Strategy, TriIndex};
use crate::weight::{DistPair, Scalar, ScalarKind, Weight};

pub const MAGIC: &[u8; 5] = b"BPIX1";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("index format version {0} is not supported (expected {VERSION})")]
    Version(u16),
    #[error("index holds {found:?} weights, expected {expected:?}")]
    ScalarMismatch { found: ScalarKind, expected: ScalarKind },
    #[error("corrupt index: {0}")]
    Corrupt(String),
}

/// Which index a file holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stored {
    Tri(Strategy),
    Td,
}

impl Stored {
    pub fn name(self) -> &'static str {
        match self {
            Stored::Tri(s) => s.name(),
            Stored::Td => "td",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub version: u16,
    pub scalar: ScalarKind,
    pub stored: Stored,
    pub directed: bool,
}

/// A loaded index of either kind.
#[derive(Clone, Debug)]
pub enum AnyIndex<T> {
    Tri(TriIndex<T>),
    Td(TdIndex<T>),
}

type Res<X> = Result<X, PersistError>;

fn corrupt(msg: impl Into<String>) -> PersistError {
    PersistError::Corrupt(msg.into())
}

struct Out(Vec<u8>);

impl Out {
    fn u8(&mut self, x: u8) {
        self.0.push(x);
    }
    fn u32(&mut self, x: u32) {
        self.0.write_u32::<LittleEndian>(x).expect("vec write");
    }
    fn usize(&mut self, x: usize) {
        self.0.write_u64::<LittleEndian>(x as u64).expect("vec write");
    }
    fn opt(&mut self, x: Option<usize>) {
        self.usize(x.map_or(u64::MAX as usize, |v| v));
    }
    fn list(&mut self, xs: &[usize]) {
        self.usize(xs.len());
        xs.iter().for_each(|&x| self.usize(x));
    }
    fn list32(&mut self, xs: &[u32]) {
        self.usize(xs.len());
        xs.iter().for_each(|&x| self.u32(x));
    }
    fn weight<T: Scalar>(&mut self, w: Weight<T>) {
        match w {
            Weight::Finite(x) => {
                self.u8(0);
                self.0.write_u64::<LittleEndian>(x.to_bits()).expect("vec write");
            }
            Weight::Inf => self.u8(1),
        }
    }
    fn pair<T: Scalar>(&mut self, z: DistPair<T>) {
        self.weight(z.dist);
        self.weight(z.beer);
    }
    fn pair2<T: Scalar>(&mut self, p: &Pair2<T>) {
        p.iter().flatten().for_each(|&z| self.pair(z));
    }
    fn ktable<T: Scalar>(&mut self, t: &KTable<T>) {
        self.u32(t.mu);
        self.u32(t.lambda);
        t.verts.iter().for_each(|&v| self.u32(v));
        t.w.iter().flatten().for_each(|&z| self.pair(z));
    }
    fn bag_table<T: Scalar>(&mut self, t: &BagTable<T>) {
        self.list32(&t.verts);
        t.w.iter().for_each(|&z| self.pair(z));
    }
}

struct In<'a>(Cursor<&'a [u8]>);

impl In<'_> {
    fn left(&self) -> usize {
        self.0.get_ref().len() - self.0.position() as usize
    }
    fn u8(&mut self) -> Res<u8> {
        Ok(self.0.read_u8()?)
    }
    fn u32(&mut self) -> Res<u32> {
        Ok(self.0.read_u32::<LittleEndian>()?)
    }
    fn usize(&mut self) -> Res<usize> {
        let x = self.0.read_u64::<LittleEndian>()?;
        usize::try_from(x).map_err(|_| corrupt("count overflows usize"))
    }
    fn opt(&mut self) -> Res<Option<usize>> {
        let x = self.0.read_u64::<LittleEndian>()?;
        Ok((x != u64::MAX).then_some(x as usize))
    }
    /// A length prefix, checked against the bytes left.
    fn len(&mut self, item_bytes: usize) -> Res<usize> {
        let n = self.usize()?;
        if n.saturating_mul(item_bytes) > self.left() {
            return Err(corrupt(format!("length {n} runs past the end of the file")));
        }
        Ok(n)
    }
    fn list(&mut self) -> Res<Vec<usize>> {
        let n = self.len(8)?;
        (0..n).map(|_| self.usize()).collect()
    }
    fn list32(&mut self) -> Res<Vec<u32>> {
        let n = self.len(4)?;
        (0..n).map(|_| self.u32()).collect()
    }
    fn weight<T: Scalar>(&mut self) -> Res<Weight<T>> {
        match self.u8()? {
            0 => Ok(Weight::Finite(T::from_bits(self.0.read_u64::<LittleEndian>()?))),
            1 => Ok(Weight::Inf),
            t => Err(corrupt(format!("unknown weight tag {t}"))),
        }
    }
    fn pair<T: Scalar>(&mut self) -> Res<DistPair<T>> {
        Ok(DistPair::new(self.weight()?, self.weight()?))
    }
    fn pair2<T: Scalar>(&mut self) -> Res<Pair2<T>> {
        Ok([[self.pair()?, self.pair()?], [self.pair()?, self.pair()?]])
    }
    fn ktable<T: Scalar>(&mut self) -> Res<KTable<T>> {
        let mu = self.u32()?;
        let lambda = self.u32()?;
        let verts = [self.u32()?, self.u32()?, self.u32()?, self.u32()?];
        let mut w = [[DistPair::unreachable(); 4]; 4];
        for row in w.iter_mut() {
            for z in row.iter_mut() {
                *z = self.pair()?;
            }
        }
        Ok(KTable { mu, lambda, verts, w })
    }
    fn bag_table<T: Scalar>(&mut self) -> Res<BagTable<T>> {
        let verts = self.list32()?;
        let k = verts.len();
        if k.saturating_mul(k) > self.left() {
            return Err(corrupt("bag table runs past the end of the file"));
        }
        let w = (0..k * k).map(|_| self.pair()).collect::<Res<Vec<_>>>()?;
        Ok(BagTable { verts, w })
    }
}

fn write_header<T: Scalar>(o: &mut Out, stored: Stored, directed: bool) {
    o.0.extend_from_slice(MAGIC);
    o.0.write_u16::<LittleEndian>(VERSION).expect("vec write");
    o.u8(T::KIND as u8);
    o.u8(match stored {
        Stored::Tri(Strategy::F12) => 0,
        Stored::Tri(Strategy::F123) => 1,
        Stored::Tri(Strategy::F1234R) => 2,
        Stored::Td => 3,
    });
    o.u8(directed as u8);
}

/// Reads the header without loading the tables.
pub fn read_header(bytes: &[u8]) -> Res<Header> {
    let mut i = In(Cursor::new(bytes));
    header(&mut i)
}

fn header(i: &mut In<'_>) -> Res<Header> {
    let mut magic = [0u8; 5];
    i.0.read_exact(&mut magic).map_err(|_| PersistError::BadMagic)?;
    if &magic != MAGIC {
        return Err(PersistError::BadMagic);
    }
    let version = i.0.read_u16::<LittleEndian>()?;
    if version != VERSION {
        return Err(PersistError::Version(version));
    }
    let scalar = ScalarKind::from_tag(i.u8()?).ok_or_else(|| corrupt("unknown scalar kind"))?;
    let stored = match i.u8()? {
        0 => Stored::Tri(Strategy::F12),
        1 => Stored::Tri(Strategy::F123),
        2 => Stored::Tri(Strategy::F1234R),
        3 => Stored::Td,
        s => return Err(corrupt(format!("unknown strategy tag {s}"))),
    };
    let directed = i.u8()? != 0;
    Ok(Header { version, scalar, stored, directed })
}

fn write_graph<T: Scalar>(o: &mut Out, g: &BeerGraph<T>) {
    o.usize(g.n());
    o.usize(g.m());
    for e in g.edges() {
        o.usize(e.u);
        o.usize(e.v);
        o.weight(e.w_uv);
        o.weight(e.w_vu);
    }
    o.list(&g.beer_vertices());
}

fn read_graph<T: Scalar>(i: &mut In<'_>, directed: bool) -> Res<BeerGraph<T>> {
    let n = i.usize()?;
    let m = i.len(18)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (u, v) = (i.usize()?, i.usize()?);
        edges.push(Edge::directed(u, v, i.weight()?, i.weight()?));
    }
    let beer = i.list()?;
    BeerGraph::new(n, edges, &beer, directed).map_err(|e| corrupt(format!("graph: {e}")))
}

fn write_tree(o: &mut Out, t: &SpqrTree) {
    o.usize(t.ref_edge);
    o.usize(t.nodes.len());
    for node in &t.nodes {
        o.u8(match node.kind {
            NodeKind::S => 0,
            NodeKind::P => 1,
            NodeKind::Q => 2,
            NodeKind::R => 3,
        });
        o.usize(node.x);
        o.usize(node.y);
        o.opt(node.parent);
        o.list(&node.children);
        o.usize(node.skeleton.len());
        for e in &node.skeleton {
            o.usize(e.u);
            o.usize(e.v);
            match e.tag {
                SkelTag::Real(i) => {
                    o.u8(0);
                    o.usize(i);
                }
                SkelTag::Reference => o.u8(1),
                SkelTag::Child(i) => {
                    o.u8(2);
                    o.usize(i);
                }
            }
        }
        o.list(&node.verts);
    }
    o.list(&t.qnode_of_edge);
    o.list(&t.vertex_to_qnode);
}

fn read_tree(i: &mut In<'_>) -> Res<SpqrTree> {
    let ref_edge = i.usize()?;
    let count = i.len(1)?;
    let mut nodes = Vec::with_capacity(count);
    for _ in 0..count {
        let kind = match i.u8()? {
            0 => NodeKind::S,
            1 => NodeKind::P,
            2 => NodeKind::Q,
            3 => NodeKind::R,
            k => return Err(corrupt(format!("unknown node kind {k}"))),
        };
        let (x, y) = (i.usize()?, i.usize()?);
        let parent = i.opt()?;
        let children = i.list()?;
        let ns = i.len(17)?;
        let mut skeleton = Vec::with_capacity(ns);
        for _ in 0..ns {
            let (u, v) = (i.usize()?, i.usize()?);
            let tag = match i.u8()? {
                0 => SkelTag::Real(i.usize()?),
                1 => SkelTag::Reference,
                2 => SkelTag::Child(i.usize()?),
                t => return Err(corrupt(format!("unknown skeleton tag {t}"))),
            };
            skeleton.push(SkelEdge { u, v, tag });
        }
        let verts = i.list()?;
        nodes.push(SpqrNode { kind, x, y, parent, children, skeleton, verts });
    }
    let qnode_of_edge = i.list()?;
    let vertex_to_qnode = i.list()?;
    Ok(SpqrTree { nodes, ref_edge, qnode_of_edge, vertex_to_qnode })
}

pub fn tri_to_bytes<T: Scalar>(idx: &TriIndex<T>) -> Vec<u8> {
    let mut o = Out(Vec::new());
    write_header::<T>(&mut o, Stored::Tri(idx.strategy), idx.graph.is_directed());
    write_graph(&mut o, &idx.graph);
    write_tree(&mut o, &idx.tree);
    idx.f1.iter().for_each(|p| o.pair2(p));
    idx.f2.iter().for_each(|p| o.pair2(p));
    o.usize(idx.f3.len());
    for t in &idx.f3 {
        match t {
            Some(t) => {
                o.u8(1);
                o.ktable(t);
            }
            None => o.u8(0),
        }
    }
    let mut keys: Vec<_> = idx.f4r.keys().copied().collect();
    keys.sort_unstable();
    o.usize(keys.len());
    for k in keys {
        o.ktable(&idx.f4r[&k]);
    }
    o.0
}

pub fn td_to_bytes<T: Scalar>(idx: &TdIndex<T>) -> Vec<u8> {
    let mut o = Out(Vec::new());
    write_header::<T>(&mut o, Stored::Td, idx.graph.is_directed());
    write_graph(&mut o, &idx.graph);
    o.usize(idx.td.len());
    for (b, bag) in idx.td.bags.iter().enumerate() {
        o.list(bag);
        o.opt(idx.td.parent[b]);
    }
    for tabs in [&idx.f1, &idx.g1, &idx.f2] {
        tabs.iter().for_each(|t| o.bag_table(t));
    }
    for t in &idx.f3 {
        match t {
            Some(t) => {
                o.u8(1);
                o.u32(t.mu);
                o.u32(t.lambda);
                o.list32(&t.mu_terms);
                o.list32(&t.lambda_terms);
                o.bag_table(&t.table);
            }
            None => o.u8(0),
        }
    }
    let mut keys: Vec<_> = idx.f4.keys().copied().collect();
    keys.sort_unstable();
    o.usize(keys.len());
    for k in keys {
        o.u32(k.0);
        o.u32(k.1);
        o.bag_table(&idx.f4[&k]);
    }
    o.0
}

pub fn from_bytes<T: Scalar>(bytes: &[u8]) -> Res<AnyIndex<T>> {
    let mut i = In(Cursor::new(bytes));
    let h = header(&mut i)?;
    if h.scalar != T::KIND {
        return Err(PersistError::ScalarMismatch { found: h.scalar, expected: T::KIND });
    }
    let graph = read_graph::<T>(&mut i, h.directed)?;
    let idx = match h.stored {
        Stored::Tri(strategy) => AnyIndex::Tri(read_tri(&mut i, graph, strategy)?),
        Stored::Td => AnyIndex::Td(read_td(&mut i, graph)?),
    };
    if i.left() != 0 {
        return Err(corrupt(format!("{} trailing bytes", i.left())));
    }
    Ok(idx)
}

fn read_tri<T: Scalar>(i: &mut In<'_>, graph: BeerGraph<T>, strategy: Strategy) -> Res<TriIndex<T>> {
    let tree = read_tree(i)?;
    tree.verify_structure(&graph.endpoints()).map_err(|e| corrupt(format!("tree: {e}")))?;
    let n = tree.len();
    let mut idx = TriIndex::assemble(graph, tree, strategy);
    idx.f1 = (0..n).map(|_| i.pair2()).collect::<Res<_>>()?;
    idx.f2 = (0..n).map(|_| i.pair2()).collect::<Res<_>>()?;
    idx.rebuild_helpers();
    let nf3 = i.len(1)?;
    if nf3 != 0 && nf3 != n {
        return Err(corrupt("F3 table count does not match the tree"));
    }
    idx.f3 = (0..nf3)
        .map(|_| match i.u8()? {
            0 => Ok(None),
            _ => i.ktable().map(Some),
        })
        .collect::<Res<_>>()?;
    let nf4 = i.len(1)?;
    let mut f4r = HashMap::with_capacity(nf4);
    for _ in 0..nf4 {
        let t = i.ktable::<T>()?;
        f4r.insert((t.mu, t.lambda), t);
    }
    idx.f4r = f4r;
    idx.rebuild_tree_product();
    Ok(idx)
}

fn read_td<T: Scalar>(i: &mut In<'_>, graph: BeerGraph<T>) -> Res<TdIndex<T>> {
    let nb = i.len(1)?;
    let mut bags = Vec::with_capacity(nb);
    let mut parent = Vec::with_capacity(nb);
    for _ in 0..nb {
        bags.push(i.list()?);
        parent.push(i.opt()?);
    }
    let edges: Vec<(usize, usize)> = parent.iter().enumerate().filter_map(|(b, p)| p.map(|p| (p, b))).collect();
    let td = TreeDecomposition::from_edges(bags, &edges).map_err(|e| corrupt(format!("decomposition: {e}")))?;
    if td.parent != parent {
        return Err(corrupt("decomposition is not rooted at bag 1"));
    }
    td.validate(&graph).map_err(|e| corrupt(format!("decomposition: {e}")))?;
    let mut idx = TdIndex::assemble(graph, td);
    idx.f1 = (0..nb).map(|_| i.bag_table()).collect::<Res<_>>()?;
    idx.g1 = (0..nb).map(|_| i.bag_table()).collect::<Res<_>>()?;
    idx.f2 = (0..nb).map(|_| i.bag_table()).collect::<Res<_>>()?;
    idx.f3 = (0..nb)
        .map(|_| match i.u8()? {
            0 => Ok(None),
            _ => Ok(Some(BagKTable {
                mu: i.u32()?,
                lambda: i.u32()?,
                mu_terms: i.list32()?,
                lambda_terms: i.list32()?,
                table: i.bag_table()?,
            })),
        })
        .collect::<Res<_>>()?;
    if idx.f3.iter().enumerate().any(|(b, t)| t.is_some() != idx.td.parent[b].is_some()) {
        return Err(corrupt("f3 tables do not match the bag tree"));
    }
    let nf4 = i.len(8)?;
    for _ in 0..nf4 {
        let k = (i.u32()?, i.u32()?);
        idx.f4.insert(k, i.bag_table()?);
    }
    idx.rebuild_tree_product();
    Ok(idx)
}

pub fn save_tri<T: Scalar>(idx: &TriIndex<T>, path: &Path) -> io::Result<()> {
    std::fs::File::create(path)?.write_all(&tri_to_bytes(idx))
}

pub fn save_td<T: Scalar>(idx: &TdIndex<T>, path: &Path) -> io::Result<()> {
    std::fs::File::create(path)?.write_all(&td_to_bytes(idx))
}

pub fn load<T: Scalar>(path: &Path) -> Res<AnyIndex<T>> {
    from_bytes(&std::fs::read(path)?)
}

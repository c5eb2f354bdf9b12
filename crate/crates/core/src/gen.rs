//! Seeded random instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{BeerGraph, Edge};
use crate::spqr::{NodeKind, SpqrTree, ROOT_CHILD};
use crate::td::TreeDecomposition;
use crate::weight::{Scalar, Weight};

/// Graph families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// Grown from a triangle by subdividing edges and adding parallel
    /// two-edge paths (and, with `multi`, parallel edges).
    SeriesParallel,
    /// A Hamiltonian cycle plus `chords` extra edges.
    Hamiltonian { chords: usize },
    /// A random k-tree with some edges dropped, together with its
    /// decomposition.
    KTree { k: usize, drop: f64 },
}

/// Everything needed to generate an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    /// Fraction of beer vertices (at least one when positive).
    pub beer: f64,
    pub directed: bool,
    /// Probability that a directed edge is traversable one way only.
    pub one_way: f64,
    pub wmax: u32,
    /// Allow parallel edges.
    pub multi: bool,
    /// Ask for real-valued weights; only read by callers choosing the
    /// scalar type.
    pub real: bool,
}

impl GenSpec {
    pub fn new(family: Family, n: usize) -> Self {
        GenSpec { family, n, beer: 0.1, directed: false, one_way: 0.0, wmax: 100, multi: false, real: false }
    }
}

impl FromStr for GenSpec {
    type Err = String;

    /// `kind:n[:param][:opt..]` with kind `sp`, `ham` (param = chords) or
    /// `ktree` (param = k); options `beer=F`, `directed`, `oneway=F`,
    /// `wmax=W`, `multi`, `real`, `drop=F`.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 2 {
            return Err(format!("generator `{s}` must look like kind:n[:param][:options]"));
        }
        let n: usize = parts[1].parse().map_err(|_| format!("invalid vertex count `{}`", parts[1]))?;
        let mut rest = &parts[2..];
        let mut param = None;
        if let Some(p) = rest.first().and_then(|p| p.parse::<usize>().ok()) {
            param = Some(p);
            rest = &rest[1..];
        }
        let family = match parts[0] {
            "sp" => Family::SeriesParallel,
            "ham" => Family::Hamiltonian { chords: param.unwrap_or(n / 10) },
            "ktree" => Family::KTree { k: param.unwrap_or(2), drop: 0.0 },
            k => return Err(format!("unknown generator `{k}` (expected sp, ham or ktree)")),
        };
        let mut spec = GenSpec::new(family, n);
        let min_n = match family {
            Family::SeriesParallel => 3,
            Family::Hamiltonian { .. } => 3,
            Family::KTree { k, .. } => k + 1,
        };
        if n < min_n {
            return Err(format!("generator `{}` needs at least {min_n} vertices", parts[0]));
        }
        for opt in rest {
            let (key, val) = opt.split_once('=').unwrap_or((opt, ""));
            let float = || val.parse::<f64>().map_err(|_| format!("invalid value in `{opt}`"));
            match key {
                "beer" => spec.beer = float()?,
                "directed" => spec.directed = true,
                "oneway" => spec.one_way = float()?,
                "wmax" => spec.wmax = val.parse().map_err(|_| format!("invalid value in `{opt}`"))?,
                "multi" => spec.multi = true,
                "real" => spec.real = true,
                "drop" => match &mut spec.family {
                    Family::KTree { drop, .. } => *drop = float()?,
                    _ => return Err("`drop` applies to ktree only".into()),
                },
                _ => return Err(format!("unknown generator option `{opt}`")),
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::SeriesParallel => write!(f, "sp:{}", self.n)?,
            Family::Hamiltonian { chords } => write!(f, "ham:{}:{chords}", self.n)?,
            Family::KTree { k, drop } => write!(f, "ktree:{}:{k}:drop={drop}", self.n)?,
        }
        write!(f, ":beer={}:wmax={}", self.beer, self.wmax)?;
        if self.directed {
            write!(f, ":directed:oneway={}", self.one_way)?;
        }
        if self.multi {
            write!(f, ":multi")?;
        }
        if self.real {
            write!(f, ":real")?;
        }
        Ok(())
    }
}

/// Unweighted shape of an instance.
#[derive(Clone, Debug)]
pub struct Topology {
    pub n: usize,
    pub ends: Vec<(usize, usize)>,
    pub td: Option<TreeDecomposition>,
}

pub fn series_parallel(n: usize, multi: bool, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    assert!(n >= 3);
    let mut ends = vec![(0, 1), (1, 2), (2, 0)];
    let mut next = 3;
    while next < n {
        let e = rng.gen_range(0..ends.len());
        let (u, v) = ends[e];
        let r: f64 = rng.gen();
        if multi && r < 0.1 {
            ends.push((u, v));
            continue;
        }
        if r < 0.55 {
            ends[e] = (u, next);
            ends.push((next, v));
        } else {
            ends.push((u, next));
            ends.push((next, v));
        }
        next += 1;
    }
    ends
}

pub fn hamiltonian(n: usize, chords: usize, multi: bool, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    assert!(n >= 3);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut ends: Vec<(usize, usize)> = (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect();
    let mut present: std::collections::HashSet<(usize, usize)> =
        ends.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let possible = n * (n - 1) / 2;
    let mut added = 0;
    let mut attempts = 0;
    while added < chords && attempts < 50 * (chords + 1) {
        attempts += 1;
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !multi && (present.len() >= possible || present.contains(&key)) {
            continue;
        }
        present.insert(key);
        ends.push((u, v));
        added += 1;
    }
    ends
}

/// A random k-tree on `n` vertices, each edge beyond a spanning set dropped
/// with probability `drop`, and a decomposition of width `k`.
pub fn partial_ktree(n: usize, k: usize, drop: f64, rng: &mut impl Rng) -> (Vec<(usize, usize)>, TreeDecomposition) {
    assert!(k >= 1 && n > k);
    let mut ends = Vec::new();
    for a in 0..=k {
        for b in a + 1..=k {
            if b == a + 1 || !rng.gen_bool(drop) {
                ends.push((a, b));
            }
        }
    }
    let mut bags = vec![(0..=k).collect::<Vec<usize>>()];
    let mut tree_edges = Vec::new();
    let mut cliques: Vec<(Vec<usize>, usize)> = (0..=k)
        .map(|skip| ((0..=k).filter(|&v| v != skip).collect(), 0))
        .collect();
    for v in k + 1..n {
        let (c, bag) = cliques[rng.gen_range(0..cliques.len())].clone();
        for (i, &u) in c.iter().enumerate() {
            if i == 0 || !rng.gen_bool(drop) {
                ends.push((u, v));
            }
        }
        let id = bags.len();
        let mut nb = c.clone();
        nb.push(v);
        bags.push(nb);
        tree_edges.push((bag, id));
        for skip in 0..c.len() {
            let mut nc: Vec<usize> = c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &u)| u).collect();
            nc.push(v);
            cliques.push((nc, id));
        }
    }
    let td = TreeDecomposition::from_edges(bags, &tree_edges).expect("generated bags form a tree");
    (ends, td)
}

/// A decomposition read off an SPQR tree: triangle fans for S nodes, the
/// terminal pair for P nodes and the whole skeleton for R nodes.
pub fn td_from_spqr(tree: &SpqrTree) -> TreeDecomposition {
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut edges = Vec::new();
    // (node, bag holding its terminals)
    let mut stack: Vec<(usize, Option<usize>)> = vec![(ROOT_CHILD, None)];
    while let Some((id, attach)) = stack.pop() {
        let node = tree.node(id);
        let mut link = |bag: Vec<usize>, to: Option<usize>, bags: &mut Vec<Vec<usize>>| {
            let b = bags.len();
            bags.push(bag);
            if let Some(a) = to {
                edges.push((a, b));
            }
            b
        };
        match node.kind {
            NodeKind::Q => {
                if attach.is_none() {
                    link(vec![node.x, node.y], None, &mut bags);
                }
            }
            NodeKind::P => {
                let b = link(vec![node.x, node.y], attach, &mut bags);
                stack.extend(node.children.iter().map(|&c| (c, Some(b))));
            }
            NodeKind::R => {
                let b = link(node.verts.clone(), attach, &mut bags);
                stack.extend(node.children.iter().map(|&c| (c, Some(b))));
            }
            NodeKind::S => {
                let c = &node.verts;
                let k = c.len() - 1;
                // fan[i - 1] = {c_0, c_i, c_{i+1}} for i in 1..k
                let mut fan = Vec::with_capacity(k - 1);
                for i in (1..k).rev() {
                    let to = if i == k - 1 { attach } else { Some(*fan.last().expect("previous fan bag")) };
                    fan.push(link(vec![c[0], c[i], c[i + 1]], to, &mut bags));
                }
                fan.reverse();
                for (p, &child) in node.children.iter().enumerate() {
                    let p = p + 1;
                    let bag = if p == 1 { fan[0] } else { fan[p - 2] };
                    stack.push((child, Some(bag)));
                }
            }
        }
    }
    TreeDecomposition::from_edges(bags, &edges).expect("SPQR bags form a tree")
}

pub fn topology(spec: &GenSpec, rng: &mut impl Rng) -> Topology {
    match spec.family {
        Family::SeriesParallel => Topology { n: spec.n, ends: series_parallel(spec.n, spec.multi, rng), td: None },
        Family::Hamiltonian { chords } => {
            Topology { n: spec.n, ends: hamiltonian(spec.n, chords, spec.multi, rng), td: None }
        }
        Family::KTree { k, drop } => {
            let (ends, td) = partial_ktree(spec.n, k, drop, rng);
            Topology { n: spec.n, ends, td: Some(td) }
        }
    }
}

fn sample<T: Scalar>(wmax: u32, rng: &mut impl Rng) -> T {
    if T::EXACT {
        T::from(rng.gen_range(0..=wmax)).expect("weight fits the scalar type")
    } else {
        T::from(rng.gen::<f64>() * wmax as f64).expect("weight fits the scalar type")
    }
}

/// `k` distinct random vertices.
pub fn pick_beer(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k.min(n));
    all.sort_unstable();
    all
}

/// Weights and beer vertices for a topology.
pub fn weigh<T: Scalar>(topo: &Topology, spec: &GenSpec, rng: &mut impl Rng) -> BeerGraph<T> {
    let edges = topo
        .ends
        .iter()
        .map(|&(u, v)| {
            if spec.directed {
                let mut a = Weight::Finite(sample::<T>(spec.wmax, rng));
                let mut b = Weight::Finite(sample::<T>(spec.wmax, rng));
                if spec.one_way > 0.0 && rng.gen_bool(spec.one_way.min(1.0)) {
                    if rng.gen_bool(0.5) {
                        a = Weight::Inf;
                    } else {
                        b = Weight::Inf;
                    }
                }
                Edge::directed(u, v, a, b)
            } else {
                Edge::undirected(u, v, sample::<T>(spec.wmax, rng))
            }
        })
        .collect();
    let k = if spec.beer > 0.0 { ((spec.beer * topo.n as f64).round() as usize).max(1) } else { 0 };
    let beer = pick_beer(topo.n, k, rng);
    BeerGraph::new(topo.n, edges, &beer, spec.directed).expect("generated graphs are valid")
}

/// One seeded instance.
pub fn generate<T: Scalar>(spec: &GenSpec, seed: u64) -> (BeerGraph<T>, Option<TreeDecomposition>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topo = topology(spec, &mut rng);
    let g = weigh(&topo, spec, &mut rng);
    (g, topo.td)
}

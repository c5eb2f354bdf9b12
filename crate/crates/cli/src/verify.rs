use std::fs;

use beerpath::spqr::ROOT_CHILD;
use beerpath::{BeerGraph, DistPair, Oracle, Scalar, SpqrTree, Strategy, TdIndex, TreeDecomposition, TriIndex};
use serde_json::json;

use crate::commands::{by_real, weight_json};
use crate::input::{self, Instance};
use crate::{CliError, Format, VerifyArgs};

const REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Which {
    Tri(Strategy),
    Td,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::Tri(s) => s.name(),
            Which::Td => "td",
        }
    }
}

fn agree<T: Scalar>(a: DistPair<T>, b: DistPair<T>) -> bool {
    if T::EXACT {
        a == b
    } else {
        a.approx_eq(b, REL_TOL)
    }
}

/// Damages one stored `F3` table. Returns false when nothing is stored.
fn inject<T: Scalar>(idx: &mut TriIndex<T>) -> bool {
    let home = idx.tree().vertex_to_qnode[0];
    let node = if home > ROOT_CHILD { home } else { ROOT_CHILD + 1 };
    node < idx.tree().len() && idx.corrupt_f3_for_testing(node)
}

enum Built<T> {
    Tri(TriIndex<T>),
    Td(TdIndex<T>),
}

impl<T: Scalar> Built<T> {
    fn query(&self, s: usize, t: usize) -> DistPair<T> {
        match self {
            Built::Tri(i) => i.query(s, t),
            Built::Td(i) => i.query(s, t),
        }
        .expect("vertices in range")
    }
}

fn build<T: Scalar>(g: &BeerGraph<T>, w: Which, td: Option<&TreeDecomposition>, fault: bool) -> Option<Built<T>> {
    match w {
        Which::Tri(s) => {
            let mut idx = TriIndex::build(g.clone(), s).ok()?;
            if fault {
                inject(&mut idx);
            }
            Some(Built::Tri(idx))
        }
        Which::Td => TdIndex::build(g.clone(), td?.clone()).ok().map(Built::Td),
    }
}

fn still_fails<T: Scalar>(g: &BeerGraph<T>, w: Which, td: Option<&TreeDecomposition>, fault: bool, s: usize, t: usize) -> bool {
    let Some(idx) = build(g, w, td, fault) else { return false };
    !agree(idx.query(s, t), Oracle::new(g).query(s, t))
}

/// Greedily drops edges and beer vertices while the pair keeps failing.
fn minimize<T: Scalar>(
    g: &BeerGraph<T>,
    w: Which,
    td: Option<&TreeDecomposition>,
    fault: bool,
    s: usize,
    t: usize,
) -> BeerGraph<T> {
    let mut cur = g.clone();
    loop {
        let mut changed = false;
        let mut e = cur.m();
        while e > 0 {
            e -= 1;
            let mut edges = cur.edges().to_vec();
            edges.remove(e);
            let Ok(cand) = BeerGraph::new(cur.n(), edges, &cur.beer_vertices(), cur.is_directed()) else { continue };
            if still_fails(&cand, w, td, fault, s, t) {
                cur = cand;
                changed = true;
            }
        }
        for b in cur.beer_vertices() {
            let beer: Vec<usize> = cur.beer_vertices().into_iter().filter(|&x| x != b).collect();
            let Ok(cand) = BeerGraph::new(cur.n(), cur.edges().to_vec(), &beer, cur.is_directed()) else { continue };
            if still_fails(&cand, w, td, fault, s, t) {
                cur = cand;
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    by_real!(input::is_real(&a.src)?, verify_as(a))
}

fn verify_as<T: Scalar>(a: &VerifyArgs) -> Result<(), CliError> {
    let inst: Instance<T> = input::load(&a.src)?;
    let g = &inst.graph;
    let pairs = input::pairs(&a.pairs, g.n(), a.src.seed)?;
    let oracle = Oracle::new(g);
    let expected: Vec<DistPair<T>> = pairs.iter().map(|&(s, t)| oracle.query(s, t)).collect();
    let td = input::some_td(&inst);
    let mut kinds: Vec<Which> = Vec::new();
    if SpqrTree::build(g, 0).is_ok() {
        kinds.extend(Strategy::ALL.map(Which::Tri));
    }
    if td.is_some() {
        kinds.push(Which::Td);
    }
    if kinds.is_empty() {
        return Err(CliError::Input("no strategy applies: the graph is not biconnected and no --td was given".into()));
    }
    for &w in &kinds {
        let idx = build(g, w, td.as_ref(), a.inject_fault).expect("checked buildable above");
        let bad = pairs.iter().zip(&expected).find(|&(&(s, t), &want)| !agree(idx.query(s, t), want));
        let Some((&(s, t), &want)) = bad else {
            report_pass(a.format, w, pairs.len());
            continue;
        };
        let got = idx.query(s, t);
        let audit = match &idx {
            Built::Tri(i) => i.audit(),
            Built::Td(_) => Vec::new(),
        };
        let small = minimize(g, w, td.as_ref(), a.inject_fault, s, t);
        let text = format!(
            "# failing pair {} {} under {} (expected {want}, got {got})\n{}",
            s + 1,
            t + 1,
            w.name(),
            small.to_text()
        );
        fs::write(&a.repro, text).map_err(|e| CliError::Input(format!("{}: {e}", a.repro.display())))?;
        match a.format {
            Format::Text => {
                println!("FAIL {} pair {} {}: expected {want}, got {got}", w.name(), s + 1, t + 1);
                for line in &audit {
                    println!("  audit: {line}");
                }
                println!(
                    "  repro: {} ({} vertices, {} edges, {} beer)",
                    a.repro.display(),
                    small.n(),
                    small.m(),
                    small.beer_vertices().len()
                );
            }
            Format::Jsonl => println!(
                "{}",
                json!({
                    "strategy": w.name(), "status": "fail", "s": s + 1, "t": t + 1,
                    "expected": [weight_json(want.dist), weight_json(want.beer)],
                    "got": [weight_json(got.dist), weight_json(got.beer)],
                    "audit": audit, "repro": a.repro.display().to_string(),
                    "repro_edges": small.m(),
                })
            ),
        }
        return Err(CliError::Verify);
    }
    Ok(())
}

fn report_pass(format: Format, w: Which, n: usize) {
    match format {
        Format::Text => println!("PASS {} {n} pairs", w.name()),
        Format::Jsonl => println!("{}", json!({"strategy": w.name(), "status": "pass", "pairs": n})),
    }
}

//! Build and query measurements per strategy.

use std::time::Instant;

use serde::Serialize;

use crate::graph::BeerGraph;
use crate::persist::{td_to_bytes, tri_to_bytes};
use crate::spqr::SpqrError;
use crate::td::{TdError, TdIndex, TreeDecomposition};
use crate::tri::{QueryStats, Strategy, TriIndex};
use crate::weight::Scalar;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRow {
    pub strategy: String,
    pub n: usize,
    pub m: usize,
    pub build_ms: f64,
    pub build_dijkstra: usize,
    pub index_bytes: usize,
    pub queries: usize,
    pub mean_query_us: f64,
    pub dijkstra_per_query: f64,
    pub oplus_hat_per_query: f64,
    pub max_oplus_hat: usize,
    pub f3_computed_per_query: f64,
    pub f4_computed_per_query: f64,
}

fn per(x: usize, q: usize) -> f64 {
    if q == 0 {
        0.0
    } else {
        x as f64 / q as f64
    }
}

pub fn bench_tri<T: Scalar>(g: &BeerGraph<T>, strategy: Strategy, pairs: &[(usize, usize)]) -> Result<BenchRow, SpqrError> {
    let start = Instant::now();
    let idx = TriIndex::build(g.clone(), strategy)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut total = QueryStats::default();
    let mut max_hat = 0;
    let start = Instant::now();
    for &(s, t) in pairs {
        let (_, st) = idx.query_with_stats(s, t).expect("pairs are in range");
        max_hat = max_hat.max(st.oplus_hat);
        total.add(&st);
    }
    let q = pairs.len();
    Ok(BenchRow {
        strategy: strategy.name().to_string(),
        n: g.n(),
        m: g.m(),
        build_ms,
        build_dijkstra: idx.build_dijkstra_runs(),
        index_bytes: tri_to_bytes(&idx).len(),
        queries: q,
        mean_query_us: if q == 0 { 0.0 } else { start.elapsed().as_secs_f64() * 1e6 / q as f64 },
        dijkstra_per_query: per(total.dijkstra_runs, q),
        oplus_hat_per_query: per(total.oplus_hat, q),
        max_oplus_hat: max_hat,
        f3_computed_per_query: per(total.f3_computed, q),
        f4_computed_per_query: per(total.f4_computed, q),
    })
}

pub fn bench_td<T: Scalar>(g: &BeerGraph<T>, td: &TreeDecomposition, pairs: &[(usize, usize)]) -> Result<BenchRow, TdError> {
    let start = Instant::now();
    let idx = TdIndex::build(g.clone(), td.clone())?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let (mut hats, mut max_hat) = (0, 0);
    let start = Instant::now();
    for &(s, t) in pairs {
        let (_, st) = idx.query_with_stats(s, t).expect("pairs are in range");
        hats += st.oplus_hat;
        max_hat = max_hat.max(st.oplus_hat);
    }
    let q = pairs.len();
    Ok(BenchRow {
        strategy: "td".to_string(),
        n: g.n(),
        m: g.m(),
        build_ms,
        build_dijkstra: 0,
        index_bytes: td_to_bytes(&idx).len(),
        queries: q,
        mean_query_us: if q == 0 { 0.0 } else { start.elapsed().as_secs_f64() * 1e6 / q as f64 },
        dijkstra_per_query: 0.0,
        oplus_hat_per_query: per(hats, q),
        max_oplus_hat: max_hat,
        f3_computed_per_query: 0.0,
        f4_computed_per_query: 0.0,
    })
}

use std::fs;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use beerpath::bench::{bench_td, bench_tri, BenchRow};
use beerpath::gen::{generate, td_from_spqr};
use beerpath::persist::{self, AnyIndex};
use beerpath::weight::ScalarKind;
use beerpath::{DistPair, QueryError, Scalar, SpqrTree, Strategy, TdIndex, TriIndex, Weight};
use serde_json::{json, Value};

use crate::input::{self, Instance};
use crate::{BenchArgs, BuildArgs, CliError, DumpArgs, Format, GenArgs, QueryArgs, StrategyArg};

macro_rules! by_real {
    ($real:expr, $f:ident($($arg:expr),*)) => {
        if $real { $f::<f64>($($arg),*) } else { $f::<i64>($($arg),*) }
    };
}
pub(crate) use by_real;

pub fn strategy_of(s: StrategyArg) -> Option<Strategy> {
    match s {
        StrategyArg::F12 => Some(Strategy::F12),
        StrategyArg::F123 => Some(Strategy::F123),
        StrategyArg::F1234r => Some(Strategy::F1234R),
        StrategyArg::Td => None,
    }
}

pub fn weight_json<T: Scalar>(w: Weight<T>) -> Value {
    match w {
        Weight::Finite(x) => x.to_string().parse::<serde_json::Number>().map(Value::Number).unwrap_or(Value::Null),
        Weight::Inf => Value::Null,
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::Input(e.to_string())
}

fn emit(format: Format, text: &[(String, String)]) {
    match format {
        Format::Text => {
            for (k, v) in text {
                println!("{k:<14} {v}");
            }
        }
        Format::Jsonl => {
            let obj: serde_json::Map<String, Value> = text
                .iter()
                .map(|(k, v)| (k.clone(), v.parse::<serde_json::Number>().map(Value::Number).unwrap_or_else(|_| json!(v))))
                .collect();
            println!("{}", Value::Object(obj));
        }
    }
}

pub fn build(a: &BuildArgs) -> Result<(), CliError> {
    by_real!(input::is_real(&a.src)?, build_as(a))
}

fn build_as<T: Scalar>(a: &BuildArgs) -> Result<(), CliError> {
    let inst: Instance<T> = input::load(&a.src)?;
    let g = inst.graph.clone();
    let mut rows = vec![("n".to_string(), g.n().to_string()), ("m".to_string(), g.m().to_string())];
    let start = Instant::now();
    let bytes = match strategy_of(a.strategy) {
        Some(s) => {
            let idx = TriIndex::build(g, s).map_err(|e| CliError::Input(e.to_string()))?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let st = idx.tree().stats();
            let c = idx.table_counts();
            let bytes = persist::tri_to_bytes(&idx);
            rows.extend([
                ("strategy".into(), s.name().into()),
                ("r".into(), st.r.to_string()),
                ("r_plus".into(), st.r_plus.to_string()),
                ("nodes_s".into(), st.s.to_string()),
                ("nodes_p".into(), st.p.to_string()),
                ("nodes_q".into(), st.q.to_string()),
                ("nodes_r".into(), st.r_nodes.to_string()),
                ("sum_m_mu".into(), st.sum_m.to_string()),
                ("f1_tables".into(), c.f1.to_string()),
                ("f2_tables".into(), c.f2.to_string()),
                ("f3_tables".into(), c.f3.to_string()),
                ("f4r_tables".into(), c.f4r.to_string()),
                ("build_dijkstra".into(), idx.build_dijkstra_runs().to_string()),
                ("index_bytes".into(), bytes.len().to_string()),
                ("build_ms".into(), format!("{ms:.3}")),
            ]);
            bytes
        }
        None => {
            let td = match (&inst.td, &a.src.gen) {
                (Some(td), _) => td.clone(),
                (None, Some(_)) => input::some_td(&inst)
                    .ok_or_else(|| CliError::Input("generated graph is not biconnected; pass --td".into()))?,
                (None, None) => return Err(CliError::Usage("strategy td needs --td".into())),
            };
            let idx = TdIndex::build(g, td).map_err(|e| CliError::Input(e.to_string()))?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let c = idx.counts();
            let bytes = persist::td_to_bytes(&idx);
            rows.extend([
                ("strategy".into(), "td".into()),
                ("bags".into(), c.bags.to_string()),
                ("width".into(), c.width.to_string()),
                ("f1_entries".into(), c.f1_entries.to_string()),
                ("f2_entries".into(), c.f2_entries.to_string()),
                ("f3_entries".into(), c.f3_entries.to_string()),
                ("f4_tables".into(), c.f4_tables.to_string()),
                ("f4_entries".into(), c.f4_entries.to_string()),
                ("max_join_verts".into(), c.max_closure_verts.to_string()),
                ("index_bytes".into(), bytes.len().to_string()),
                ("build_ms".into(), format!("{ms:.3}")),
            ]);
            bytes
        }
    };
    if let Some(p) = &a.index {
        fs::write(p, bytes).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    emit(a.format, &rows);
    Ok(())
}

pub fn query(a: &QueryArgs) -> Result<(), CliError> {
    if let Some(k) = a.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = fs::read(&a.index).map_err(|e| CliError::Input(format!("{}: {e}", a.index.display())))?;
    let h = persist::read_header(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", a.index.display())))?;
    match h.scalar {
        ScalarKind::I32 => query_as::<i32>(a, &bytes),
        ScalarKind::I64 => query_as::<i64>(a, &bytes),
        ScalarKind::F32 => query_as::<f32>(a, &bytes),
        ScalarKind::F64 => query_as::<f64>(a, &bytes),
    }
}

fn query_as<T: Scalar>(a: &QueryArgs, bytes: &[u8]) -> Result<(), CliError> {
    let idx = persist::from_bytes::<T>(bytes).map_err(|e| CliError::Input(format!("{}: {e}", a.index.display())))?;
    let n = match &idx {
        AnyIndex::Tri(i) => i.graph().n(),
        AnyIndex::Td(i) => i.graph().n(),
    };
    let pairs = input::query_file(&a.queries, n)?;
    let answers: Vec<Result<DistPair<T>, QueryError>> = match &idx {
        AnyIndex::Tri(i) => i.query_batch(&pairs),
        AnyIndex::Td(i) => i.query_batch(&pairs),
    };
    let out = io::stdout();
    let mut w = BufWriter::new(out.lock());
    for (&(s, t), d) in pairs.iter().zip(answers) {
        let d = d.map_err(|e| CliError::Input(e.to_string()))?;
        match a.format {
            Format::Text => writeln!(w, "{d}"),
            Format::Jsonl => writeln!(
                w,
                "{}",
                json!({"s": s + 1, "t": t + 1, "dist": weight_json(d.dist), "beer_dist": weight_json(d.beer)})
            ),
        }
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn bench(a: &BenchArgs) -> Result<(), CliError> {
    by_real!(input::is_real(&a.src)?, bench_as(a))
}

fn bench_as<T: Scalar>(a: &BenchArgs) -> Result<(), CliError> {
    let inst: Instance<T> = input::load(&a.src)?;
    let g = &inst.graph;
    let pairs = input::pairs(&a.pairs, g.n(), a.src.seed)?;
    let mut rows: Vec<BenchRow> = Vec::new();
    let tri_ok = SpqrTree::build(g, 0).is_ok();
    for s in [StrategyArg::F12, StrategyArg::F123, StrategyArg::F1234r, StrategyArg::Td] {
        if a.strategy.is_some_and(|x| x != s) {
            continue;
        }
        match strategy_of(s) {
            Some(st) if tri_ok => rows.push(bench_tri(g, st, &pairs).map_err(|e| CliError::Input(e.to_string()))?),
            Some(_) => {}
            None => {
                if let Some(td) = input::some_td(&inst) {
                    rows.push(bench_td(g, &td, &pairs).map_err(|e| CliError::Input(e.to_string()))?);
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Input("no strategy applies: the graph is not biconnected and no --td was given".into()));
    }
    match a.format {
        Format::Jsonl => {
            for r in &rows {
                println!("{}", serde_json::to_string(r).expect("plain struct"));
            }
        }
        Format::Text => {
            if let Ok(t) = SpqrTree::build(g, 0) {
                let st = t.stats();
                println!("n {} m {} r {} r_plus {} sum_r_m2 {}", g.n(), g.m(), st.r, st.r_plus, st.sum_r_m2);
            }
            println!(
                "{:<8} {:>10} {:>12} {:>12} {:>10} {:>10} {:>10} {:>8}",
                "strategy", "build_ms", "index_bytes", "query_us", "dijkstra", "oplus_hat", "f3_comp", "f4_comp"
            );
            for r in &rows {
                println!(
                    "{:<8} {:>10.3} {:>12} {:>12.3} {:>10.3} {:>10.3} {:>10.3} {:>8.3}",
                    r.strategy,
                    r.build_ms,
                    r.index_bytes,
                    r.mean_query_us,
                    r.dijkstra_per_query,
                    r.oplus_hat_per_query,
                    r.f3_computed_per_query,
                    r.f4_computed_per_query
                );
            }
        }
    }
    Ok(())
}

pub fn gen(a: &GenArgs) -> Result<(), CliError> {
    let spec = input::gen_spec(&a.gen)?;
    by_real!(spec.real, gen_as(a, &spec))
}

fn gen_as<T: Scalar>(a: &GenArgs, spec: &beerpath::gen::GenSpec) -> Result<(), CliError> {
    let (g, td) = generate::<T>(spec, a.seed);
    let text = format!("# {spec} seed {}\n{}", a.seed, g.to_text());
    match &a.graph {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    if let Some(p) = &a.td {
        let td = match td {
            Some(td) => td,
            None => td_from_spqr(&SpqrTree::build(&g, 0).map_err(|e| CliError::Input(e.to_string()))?),
        };
        fs::write(p, td.to_text(g.n())).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

pub fn dump(a: &DumpArgs) -> Result<(), CliError> {
    if let Some(p) = &a.index {
        let bytes = fs::read(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        let h = persist::read_header(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        return match h.scalar {
            ScalarKind::I32 => dump_index::<i32>(&bytes),
            ScalarKind::I64 => dump_index::<i64>(&bytes),
            ScalarKind::F32 => dump_index::<f32>(&bytes),
            ScalarKind::F64 => dump_index::<f64>(&bytes),
        };
    }
    by_real!(input::is_real(&a.src)?, dump_graph(a))
}

fn dump_index<T: Scalar>(bytes: &[u8]) -> Result<(), CliError> {
    let idx = persist::from_bytes::<T>(bytes).map_err(|e| CliError::Input(e.to_string()))?;
    match idx {
        AnyIndex::Tri(i) => print!("{}", i.tree().dump()),
        AnyIndex::Td(i) => print!("{}", i.decomposition().to_text(i.graph().n())),
    }
    Ok(())
}

fn dump_graph<T: Scalar>(a: &DumpArgs) -> Result<(), CliError> {
    let inst: Instance<T> = input::load(&a.src)?;
    if a.ref_edge == 0 {
        return Err(CliError::Usage("--ref-edge is 1-based".into()));
    }
    let t = SpqrTree::build(&inst.graph, a.ref_edge - 1).map_err(|e| CliError::Input(e.to_string()))?;
    print!("{}", t.dump());
    Ok(())
}

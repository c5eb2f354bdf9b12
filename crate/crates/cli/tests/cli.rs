use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beerpath")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report_value(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.next().unwrap_or("").to_string())
        })
        .unwrap_or_else(|| panic!("no `{key}` in report:\n{out}"))
}

const K4: &str = "4 6 U\n1 2 1\n1 3 2\n1 4 3\n2 3 4\n2 4 5\n3 4 6\nB 1 2\n";
const C4: &str = "4 4 U\n1 2 1\n2 3 1\n3 4 1\n4 1 1\nB 1 3\n";

#[test]
fn series_parallel_build_reports_no_rigid_nodes() {
    let o = run(&["build", "--gen", "sp:60", "--seed", "2"]);
    assert!(o.status.success());
    assert_eq!(report_value(&stdout(&o), "r"), "0");
    assert_eq!(report_value(&stdout(&o), "nodes_r"), "0");
}

#[test]
fn k4_build_reports_r_six() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.txt", K4);
    let o = run(&["build", "--graph", s(&g), "--strategy", "f123"]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(report_value(&stdout(&o), "r"), "6");
}

#[test]
fn malformed_edge_line_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.txt", "3 3 U\n1 2 1\n2 3\n3 1 1\nB 0\n");
    let o = run(&["build", "--graph", s(&g)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["build"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--gen", "sp:10", "--pairs", "some"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn queries_from_a_saved_index() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.txt", C4);
    let idx = dir.path().join("c4.idx");
    assert!(run(&["build", "--graph", s(&g), "--index", s(&idx)]).status.success());

    let empty = write(&dir, "empty.txt", "");
    let o = run(&["query", "--index", s(&idx), "--queries", s(&empty)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let q = write(&dir, "q.txt", "1 1\n2 2\n1 2\n");
    let o = run(&["query", "--index", s(&idx), "--queries", s(&q)]);
    assert_eq!(stdout(&o), "0 4\n0 2\n1 3\n");

    let o = run(&["query", "--index", s(&idx), "--queries", s(&q), "--format", "jsonl"]);
    let first: Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["dist"], 0);
    assert_eq!(first["beer_dist"], 4);

    let bad = write(&dir, "bad.txt", "1 2\n1 9\n");
    let o = run(&["query", "--index", s(&idx), "--queries", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = run(&["query", "--index", s(&dir.path().join("missing.idx")), "--queries", s(&q)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn answers_are_identical_across_strategies() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    let td = dir.path().join("g.td");
    let gen = run(&["gen", "--gen", "ham:40:10:beer=0.2:directed:oneway=0.2", "--seed", "5", "--graph", s(&g), "--td", s(&td)]);
    assert!(gen.status.success());
    let q: String = (1..=40).flat_map(|a| (1..=40).step_by(3).map(move |b| format!("{a} {b}\n"))).collect();
    let q = write(&dir, "q.txt", &q);
    let mut outputs = Vec::new();
    for strategy in ["f12", "f123", "f1234r", "td"] {
        let idx = dir.path().join(format!("{strategy}.idx"));
        let mut args = vec!["build", "--graph", s(&g), "--strategy", strategy, "--index", s(&idx)];
        if strategy == "td" {
            args.extend(["--td", s(&td)]);
        }
        assert!(run(&args).status.success(), "{strategy}");
        let o = run(&["query", "--index", s(&idx), "--queries", s(&q), "--threads", "2"]);
        assert!(o.status.success());
        outputs.push(stdout(&o));
    }
    assert!(!outputs[0].is_empty());
    assert!(outputs.iter().all(|o| *o == outputs[0]));
}

#[test]
fn verify_passes_on_the_four_cycle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.txt", "4 4 U\n1 2 1\n2 3 1\n3 4 1\n4 1 1\nB 1 3\n");
    let o = run(&["verify", "--graph", s(&g), "--pairs", "all"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 4);
}

#[test]
fn injected_fault_is_caught_and_localized() {
    let dir = TempDir::new().unwrap();
    let repro = dir.path().join("repro.txt");
    let o = run(&["verify", "--gen", "ham:30:8:beer=0.2", "--seed", "3", "--inject-fault", "--repro", s(&repro)]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("FAIL f123"), "{out}");
    assert!(out.contains("audit: F3 table of tree edge"), "{out}");
    let text = fs::read_to_string(&repro).unwrap();
    assert!(text.starts_with("# failing pair"));
    // the repro is a loadable graph that still fails under the same fault
    let o = run(&["verify", "--graph", s(&repro), "--inject-fault", "--repro", s(&dir.path().join("again.txt"))]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["verify", "--graph", s(&repro)]);
    assert!(o.status.success());
}

#[test]
fn seeded_verify_is_deterministic() {
    let args = ["verify", "--gen", "ham:50:12:beer=0.1", "--seed", "11", "--pairs", "random:300", "--format", "jsonl"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

fn bench_rows(args: &[&str]) -> Vec<Value> {
    let mut full = vec!["bench", "--format", "jsonl"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn row<'a>(rows: &'a [Value], strategy: &str) -> &'a Value {
    rows.iter().find(|r| r["strategy"] == strategy).unwrap()
}

#[test]
fn series_parallel_bench_needs_no_searches() {
    let rows = bench_rows(&["--gen", "sp:300", "--pairs", "random:300"]);
    for st in ["f123", "f1234r"] {
        assert_eq!(row(&rows, st)["dijkstra_per_query"].as_f64(), Some(0.0), "{st}");
    }
}

#[test]
fn rigid_heavy_bench_orders_the_strategies() {
    let rows = bench_rows(&["--gen", "ham:150:30", "--pairs", "random:300", "--seed", "4"]);
    let d = |st: &str| row(&rows, st)["dijkstra_per_query"].as_f64().unwrap();
    assert!(d("f12") > d("f1234r"));
    assert!(d("f12") >= d("f123"));
    assert!(d("f123") >= d("f1234r"));
    assert_eq!(d("f1234r"), 0.0);
}

#[test]
fn tree_product_work_grows_slowly() {
    let mut worst = Vec::new();
    for n in [100, 1000, 8000] {
        let spec = format!("sp:{n}");
        let rows = bench_rows(&["--gen", &spec, "--pairs", "random:400", "--strategy", "f1234r"]);
        let r = row(&rows, "f1234r");
        let m = r["m"].as_f64().unwrap();
        let hat = r["max_oplus_hat"].as_f64().unwrap();
        // two legs, each O(log depth)
        assert!(hat <= 4.0 * m.log2() + 4.0, "n {n}: {hat} products for m {m}");
        worst.push(hat);
    }
    assert!(worst[2] <= 3.0 * worst[0].max(4.0));
}

#[test]
fn dump_prints_one_line_per_node() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.txt", K4);
    let o = run(&["dump", "--graph", s(&g)]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().next().unwrap().starts_with("0 Q -"));
    assert!(out.lines().any(|l| l.split_whitespace().nth(1) == Some("R")));
}

#[test]
fn td_index_dump_and_query() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p.txt", "3 2 U\n1 2 1\n2 3 1\nB 1 2\n");
    let td = write(&dir, "p.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    let idx = dir.path().join("p.idx");
    let o = run(&["build", "--graph", s(&g), "--td", s(&td), "--strategy", "td", "--index", s(&idx)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let q = write(&dir, "q.txt", "1 3\n");
    assert_eq!(stdout(&run(&["query", "--index", s(&idx), "--queries", s(&q)])), "2 2\n");
    assert!(stdout(&run(&["dump", "--index", s(&idx)])).starts_with("s td 2 2 3"));

    let no_td = run(&["build", "--graph", s(&g), "--strategy", "td"]);
    assert_eq!(no_td.status.code(), Some(1));
    let bad_td = write(&dir, "bad.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n");
    let o = run(&["build", "--graph", s(&g), "--td", s(&bad_td), "--strategy", "td"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("edge 2"));
}

#[test]
fn real_weights_round_trip_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("r.txt");
    assert!(run(&["gen", "--gen", "ham:25:5:real", "--seed", "1", "--graph", s(&g)]).status.success());
    let o = run(&["verify", "--graph", s(&g)]);
    assert!(o.status.success(), "{}", stdout(&o));
}

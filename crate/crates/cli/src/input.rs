use std::fs;
use std::path::Path;

use beerpath::gen::{generate, td_from_spqr, GenSpec};
use beerpath::graph::{detect_weight_kind, WeightKind};
use beerpath::{BeerGraph, Scalar, SpqrTree, TreeDecomposition};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Source};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn gen_spec(s: &str) -> Result<GenSpec, CliError> {
    s.parse().map_err(CliError::Usage)
}

/// Whether the instance has real-valued weights.
pub fn is_real(src: &Source) -> Result<bool, CliError> {
    match (&src.graph, &src.gen) {
        (Some(p), _) => Ok(detect_weight_kind(&read(p)?) == WeightKind::Real),
        (None, Some(g)) => Ok(gen_spec(g)?.real),
        (None, None) => Err(CliError::Usage("one of --graph or --gen is required".into())),
    }
}

pub struct Instance<T> {
    pub graph: BeerGraph<T>,
    /// From `--td` or from the generator.
    pub td: Option<TreeDecomposition>,
}

pub fn load<T: Scalar>(src: &Source) -> Result<Instance<T>, CliError> {
    let (graph, gen_td) = match (&src.graph, &src.gen) {
        (Some(p), _) => {
            let g = BeerGraph::parse(&read(p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            (g, None)
        }
        (None, Some(spec)) => generate::<T>(&gen_spec(spec)?, src.seed),
        (None, None) => return Err(CliError::Usage("one of --graph or --gen is required".into())),
    };
    let td = match &src.td {
        Some(p) => {
            let td = TreeDecomposition::parse(&read(p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            td.validate(&graph).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            Some(td)
        }
        None => gen_td,
    };
    Ok(Instance { graph, td })
}

/// The supplied decomposition, or one read off the SPQR tree when the
/// graph is biconnected.
pub fn some_td<T: Scalar>(inst: &Instance<T>) -> Option<TreeDecomposition> {
    inst.td.clone().or_else(|| SpqrTree::build(&inst.graph, 0).ok().map(|t| td_from_spqr(&t)))
}

/// `all` or `random:k`, 0-based.
pub fn pairs(spec: &str, n: usize, seed: u64) -> Result<Vec<(usize, usize)>, CliError> {
    if spec == "all" {
        return Ok((0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect());
    }
    let k = spec
        .strip_prefix("random:")
        .and_then(|k| k.parse::<usize>().ok())
        .ok_or_else(|| CliError::Usage(format!("--pairs must be `all` or `random:k`, got `{spec}`")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    Ok((0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect())
}

/// Parses a query file: one `s t` pair per line, 1-based, `#` comments.
pub fn query_file(path: &Path, n: usize) -> Result<Vec<(usize, usize)>, CliError> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| CliError::Input(format!("{}: line {}: {msg}", path.display(), i + 1));
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(bad("expected `s t`".into()));
        }
        let mut v = [0usize; 2];
        for (slot, tok) in v.iter_mut().zip(&toks) {
            let x: usize = tok.parse().map_err(|_| bad(format!("invalid vertex `{tok}`")))?;
            if x == 0 || x > n {
                return Err(bad(format!("vertex {x} out of range 1..={n}")));
            }
            *slot = x - 1;
        }
        out.push((v[0], v[1]));
    }
    Ok(out)
}

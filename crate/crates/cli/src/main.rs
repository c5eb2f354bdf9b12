mod commands;
mod input;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    /// Already reported on stdout.
    #[error("verification failed")]
    Verify,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verify => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "beerpath", version, about = "Beer-path distance queries over SPQR-tree and tree-decomposition indexes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build an index and print a report.
    Build(BuildArgs),
    /// Answer queries from a saved index.
    Query(QueryArgs),
    /// Compare every strategy against plain shortest-path searches.
    Verify(VerifyArgs),
    /// Time builds and queries per strategy.
    Bench(BenchArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Print the SPQR tree (or the decomposition of a td index).
    Dump(DumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    F12,
    F123,
    F1234r,
    Td,
}

/// Where the graph comes from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Graph file.
    #[arg(long, conflicts_with = "gen")]
    pub graph: Option<PathBuf>,
    /// Generated instance, e.g. `sp:200`, `ham:200:20:beer=0.2`, `ktree:100:3`.
    #[arg(long)]
    pub gen: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tree decomposition file.
    #[arg(long)]
    pub td: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub src: Source,
    #[arg(long, value_enum, default_value = "f1234r")]
    pub strategy: StrategyArg,
    /// Where to write the index.
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub index: PathBuf,
    /// One `s t` pair per line, 1-based.
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub src: Source,
    /// `all` or `random:k`.
    #[arg(long, default_value = "all")]
    pub pairs: String,
    /// Where to write a minimized failing instance.
    #[arg(long, default_value = "beerpath-repro.txt")]
    pub repro: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub src: Source,
    #[arg(long, default_value = "random:1000")]
    pub pairs: String,
    /// Restrict to one strategy.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub gen: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Graph output path (stdout when absent).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Also write a tree decomposition here.
    #[arg(long)]
    pub td: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    #[command(flatten)]
    pub src: Source,
    #[arg(long, conflicts_with_all = ["graph", "gen"])]
    pub index: Option<PathBuf>,
    /// Reference edge (1-based) for the SPQR tree.
    #[arg(long, default_value_t = 1)]
    pub ref_edge: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Cmd::Build(a) => commands::build(&a),
        Cmd::Query(a) => commands::query(&a),
        Cmd::Verify(a) => verify::verify(&a),
        Cmd::Bench(a) => commands::bench(&a),
        Cmd::Gen(a) => commands::gen(&a),
        Cmd::Dump(a) => commands::dump(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Verify) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}

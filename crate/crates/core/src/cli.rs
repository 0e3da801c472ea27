//! Command-line front end. `run` returns the process exit code: 0 success,
//! 1 a failed check, 2 bad input, 3 a resource cap.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::collections::{
    enumerate_collections, named_collection, write_atlas, BasicFilter, CollectionConstraints, NAMED_COLLECTIONS,
};
use crate::error::{Error, Result};
use crate::experiments::{
    empirical_threshold_curve, model_transfer_check, random_maker_trial, subgraph_frequency, CurveSpec,
    ExperimentReport, PittelSpec, RandomMakerSpec, SubgraphSpec,
};
use crate::game::{Board, GameConfig, GameState, Goal, Tournament};
use crate::graph::{from_edge_list, from_graph6, named, to_edge_list, to_graph6, Graph, Rational};
use crate::solver::{board_fingerprint, load_cache, save_cache, Engine, SolverConfig};
use crate::verify::{run_all, run_check, Ledger, CHECKS};

#[derive(Parser, Debug)]
#[command(name = "mbt", version, about = "Exact Maker-Breaker clique and tournament games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one board exactly.
    Solve(SolveArgs),
    /// Run a named check, or all of them.
    Verify(VerifyArgs),
    /// Enumerate triangle collections into an atlas.
    EnumerateCollections(EnumerateArgs),
    /// Run a seeded Monte-Carlo probe.
    Simulate(SimulateArgs),
    /// Print a named collection.
    Catalog(CatalogArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Graph name (K:4, W:5, turan:6:3, K5minus, S1, ...) or a file with
    /// graph6 or an edge list.
    #[arg(long)]
    pub board: String,
    /// clique:k, tc, ta, good-clique:k or tournament:<file>.
    #[arg(long)]
    pub goal: String,
    /// Maker:Breaker bias; Maker's side must be 1.
    #[arg(long, default_value = "1:1")]
    pub bias: String,
    #[arg(long)]
    pub handicap: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Transposition cache file; defaults to one under $MBT_CACHE_DIR.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Edge cap for oriented goals.
    #[arg(long, default_value_t = 18)]
    pub max_oriented_edges: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A check name or `all`.
    pub check: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Accepted for scripts; checks never read a cache.
    #[arg(long)]
    pub no_cache: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Basic {
    Include,
    Exclude,
    Only,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub min_v: usize,
    #[arg(long)]
    pub max_v: usize,
    /// Edge count as a linear formula in v, e.g. `2v-1`.
    #[arg(long)]
    pub edge_formula: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub min_degree: usize,
    /// `15/8` (strict) or `<=15/8`.
    #[arg(long)]
    pub max_density: Option<String>,
    #[arg(long, value_enum, default_value_t = Basic::Include)]
    pub basic: Basic,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Probe {
    Curve,
    RandomMaker,
    Pittel,
    Subgraph,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub probe: Probe,
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Report path; `.csv` writes the cells as CSV, anything else JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    EdgeList,
    Graph6,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    pub name: String,
    #[arg(long, value_enum, default_value_t = GraphFormat::EdgeList)]
    pub format: GraphFormat,
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json_errors = argv.windows(2).any(|w| w[0] == "--format" && w[1] == "json")
        || argv.iter().any(|a| a == "--format=json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            if json_errors {
                let _ = writeln!(err, "{}", json!({"error": "usage", "message": e.to_string().trim(), "exit_code": 2}));
            } else {
                let _ = write!(err, "{e}");
            }
            return 2;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            if json_errors {
                let _ = writeln!(err, "{}", json!({"error": error_kind(&e), "message": e.to_string(), "exit_code": code}));
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            code
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap(_) | Error::TooManyVertices { .. } => 3,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::UnknownGraph(_) => "unknown_graph",
        Error::InvalidParameters(_) => "invalid_parameters",
        Error::TooManyVertices { .. } => "too_many_vertices",
        Error::EmptyGraph => "empty_graph",
        Error::Parse { .. } => "parse",
        Error::InvalidGoal(_) => "invalid_goal",
        Error::InvalidConfig(_) => "invalid_config",
        Error::GameOver => "game_over",
        Error::IllegalMove(_) => "illegal_move",
        Error::ResourceCap(_) => "resource_cap",
        Error::NotWinner(_) => "not_winner",
        Error::Script { .. } => "script",
        Error::Precondition(_) => "precondition",
        Error::InvalidPairing(_) => "invalid_pairing",
        Error::InvalidSpec(_) => "invalid_spec",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Solve(a) => solve(a, out),
        Command::Verify(a) => buffered(out, a.threads, |buf| verify(&a, buf)),
        Command::EnumerateCollections(a) => enumerate(a, out),
        Command::Simulate(a) => buffered(out, a.threads, |buf| simulate(&a, buf)),
        Command::Catalog(a) => catalog(a, out),
    }
}

/// Runs `f` on a pool of `threads` workers and copies its output to `out`.
fn buffered(out: &mut dyn Write, threads: Option<usize>, f: impl FnOnce(&mut dyn Write) -> Result<i32> + Send) -> Result<i32> {
    let mut buf = Vec::new();
    let code = with_threads(threads, || f(&mut buf));
    out.write_all(&buf)?;
    code
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    match threads {
        None => f(),
        Some(0) => Err(Error::InvalidParameters("threads must be at least 1".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(f),
    }
}

/// A named graph, or a file holding graph6 or an edge list.
pub fn load_board(spec: &str) -> Result<Graph> {
    if let Ok(g) = named_collection(spec) {
        return Ok(g);
    }
    match named(spec) {
        Ok(g) => Ok(g),
        Err(named_err) => {
            let path = Path::new(spec);
            if !path.exists() {
                return Err(named_err);
            }
            let text = fs::read_to_string(path)?;
            let first = text.lines().find(|l| !l.trim().is_empty() && !l.starts_with('#')).unwrap_or("");
            if first.split_whitespace().count() == 1 && !first.trim().chars().all(|c| c.is_ascii_digit()) {
                from_graph6(first)
            } else {
                from_edge_list(&text)
            }
        }
    }
}

pub fn parse_goal(s: &str) -> Result<Goal> {
    match s.split_once(':') {
        Some(("tournament", file)) => Ok(Goal::Tournament(Tournament::parse(&fs::read_to_string(file)?)?)),
        _ => s.parse(),
    }
}

fn parse_bias(s: &str) -> Result<usize> {
    let bad = || Error::InvalidConfig(format!("bias `{s}` is not of the form 1:b"));
    let (m, b) = s.split_once(':').ok_or_else(bad)?;
    if m.trim() != "1" {
        return Err(Error::InvalidConfig(format!("maker bias {m} is not supported")));
    }
    b.trim().parse().map_err(|_| bad())
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let g = load_board(&a.board)?;
    let goal = parse_goal(&a.goal)?;
    let mut config = GameConfig::biased(parse_bias(&a.bias)?);
    if a.handicap {
        config.handicap = 1;
    }
    let board = Board::new(g, goal, config)?;
    let cfg = SolverConfig { max_oriented_edges: a.max_oriented_edges, ..SolverConfig::default() };
    let mut engine = Engine::new(&board, cfg)?;
    let cache = a.cache.clone().or_else(|| {
        std::env::var_os("MBT_CACHE_DIR").map(|d| PathBuf::from(d).join(format!("{:016x}.mbtc", board_fingerprint(&board))))
    });
    let loaded = match &cache {
        Some(p) => load_cache(&mut engine, &board, p)?,
        None => 0,
    };
    let r = engine.solve_state(&GameState::new(board.clone()))?;
    if let Some(p) = &cache {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        save_cache(&engine, &board, p)?;
    }
    let record = json!({
        "board": a.board,
        "vertices": board.graph.n(),
        "edges": board.edge_count(),
        "goal": board.goal.to_string(),
        "bias": format!("1:{}", config.breaker_bias),
        "handicap": a.handicap,
        "winner": r.winner,
        "best_move": r.best_move.map(|m| board.describe_move(m)),
        "nodes_visited": r.nodes_visited,
        "table_hits": r.table_hits,
        "cache_entries_loaded": loaded,
        "elapsed_secs": r.elapsed.as_secs_f64(),
    });
    emit(&record, a.format, out)?;
    Ok(0)
}

/// JSON as is, or one `key=value` line per field.
fn emit(record: &Value, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(record)?)?,
        Format::Text => {
            if let Value::Object(map) = record {
                for (k, v) in map {
                    let text = match v {
                        Value::String(s) => s.clone(),
                        Value::Null => "-".into(),
                        other => other.to_string(),
                    };
                    writeln!(out, "{k}={text}")?;
                }
            }
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let dir = a.out.as_deref();
    let ledger = if a.check == "all" {
        run_all(dir)?
    } else if CHECKS.contains(&a.check.as_str()) {
        let rec = run_check(&a.check, dir)?;
        let ledger = Ledger { version: concat!("mbt ", env!("CARGO_PKG_VERSION")).to_string(), checks: vec![rec] };
        if let Some(d) = dir {
            fs::write(d.join("ledger.json"), serde_json::to_string_pretty(&ledger)?)?;
        }
        ledger
    } else {
        return Err(Error::InvalidParameters(format!("unknown check `{}`; known: all, {}", a.check, CHECKS.join(", "))));
    };
    for c in &ledger.checks {
        let status = serde_json::to_value(c.status)?;
        writeln!(out, "{} {} {:.3}s", status.as_str().unwrap_or("?"), c.name, c.runtime.as_secs_f64())?;
        if c.name == "classification" {
            for key in ["minimal", "basic"] {
                if let Some(names) = c.details[key].as_array() {
                    let names: Vec<&str> = names.iter().filter_map(|n| n.as_str()).collect();
                    writeln!(out, "  {key}: {}", names.join(" "))?;
                }
            }
        }
    }
    Ok(if ledger.pass() { 0 } else { 1 })
}

/// `2v-1`, `v+3`, `3v`, `7`.
pub fn parse_edge_formula(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidParameters(format!("edge formula `{s}` is not of the form av+b"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = t.find('v') else {
        return Ok((0, t.parse().map_err(|_| bad())?));
    };
    let a = match &t[..pos] {
        "" | "+" => 1,
        "-" => -1,
        x => x.parse().map_err(|_| bad())?,
    };
    let b = match &t[pos + 1..] {
        "" => 0,
        x if x.starts_with('+') || x.starts_with('-') => x.parse().map_err(|_| bad())?,
        _ => return Err(bad()),
    };
    Ok((a, b))
}

fn parse_density_bound(s: &str) -> Result<(Rational, bool)> {
    match s.trim().strip_prefix("<=") {
        Some(r) => Ok((r.trim().parse()?, false)),
        None => Ok((s.trim().trim_start_matches('<').parse()?, true)),
    }
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> Result<i32> {
    let c = CollectionConstraints {
        v_min: a.min_v,
        v_max: a.max_v,
        edge_formula: a.edge_formula.as_deref().map(parse_edge_formula).transpose()?,
        min_degree: a.min_degree,
        max_density: a.max_density.as_deref().map(parse_density_bound).transpose()?,
        basic: match a.basic {
            Basic::Include => BasicFilter::Include,
            Basic::Exclude => BasicFilter::Exclude,
            Basic::Only => BasicFilter::Only,
        },
    };
    let mut classes = enumerate_collections(&c)?;
    // verdicts past the solver caps stay empty
    classes.par_iter_mut().try_for_each(|cl| match cl.compute_verdicts() {
        Err(Error::ResourceCap(_)) => Ok(()),
        other => other,
    })?;
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_atlas(&classes, fs::File::create(&a.out)?)?;
    let mut per_order = std::collections::BTreeMap::new();
    for cl in &classes {
        *per_order.entry(cl.v()).or_insert(0usize) += 1;
    }
    let summary = json!({
        "classes": classes.len(),
        "per_order": per_order,
        "names": classes.iter().map(|c| c.label()).collect::<Vec<_>>(),
        "atlas": a.out.display().to_string(),
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(0)
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let mut spec: Value = serde_json::from_str(&fs::read_to_string(&a.spec)?)?;
    let obj = spec.as_object_mut().ok_or_else(|| Error::InvalidSpec("spec must be a JSON object".into()))?;
    obj.insert("seed".into(), json!(a.seed));
    if let Some(t) = a.trials {
        obj.insert("trials".into(), json!(t));
    }
    let report: ExperimentReport = match a.probe {
        Probe::Curve => empirical_threshold_curve(&serde_json::from_value::<CurveSpec>(spec)?)?,
        Probe::RandomMaker => random_maker_trial(&serde_json::from_value::<RandomMakerSpec>(spec)?)?,
        Probe::Pittel => model_transfer_check(&serde_json::from_value::<PittelSpec>(spec)?)?,
        Probe::Subgraph => {
            let h = match obj.remove("h") {
                Some(Value::String(s)) => load_board(&s).or_else(|_| from_graph6(&s))?,
                Some(_) => return Err(Error::InvalidSpec("`h` must be a graph name or graph6 string".into())),
                None => from_graph6("G?NFf{")?,
            };
            subgraph_frequency(&h, &serde_json::from_value::<SubgraphSpec>(spec)?)?
        }
    };
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let file = fs::File::create(&a.out)?;
    if a.out.extension().is_some_and(|e| e == "csv") {
        report.write_csv(file)?;
    } else {
        report.write_json(file)?;
    }
    let summary = json!({
        "kind": report.kind,
        "cells": report.cells.len(),
        "heuristic": report.heuristic,
        "checks": report.checks,
        "out": a.out.display().to_string(),
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(0)
}

fn catalog(a: CatalogArgs, out: &mut dyn Write) -> Result<i32> {
    let g = named_collection(&a.name).or_else(|_| named(&a.name)).map_err(|_| {
        let known: Vec<&str> = NAMED_COLLECTIONS.iter().map(|c| c.0).collect();
        Error::UnknownGraph(format!("{} (collections: {})", a.name, known.join(", ")))
    })?;
    match a.format {
        GraphFormat::Graph6 => writeln!(out, "{}", to_graph6(&g)?)?,
        GraphFormat::EdgeList => write!(out, "{}", to_edge_list(&g))?,
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run(std::iter::once("mbt").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn solve_examples() {
        let (code, out, _) = call(&["solve", "--board", "K:4", "--goal", "tc", "--handicap"]);
        assert_eq!(code, 0);
        assert!(out.contains("winner=Breaker"));
        let (_, out, _) = call(&["solve", "--board", "K:3", "--goal", "clique:3"]);
        assert!(out.contains("winner=Breaker"));
        let (_, out, _) = call(&["solve", "--board", "K:5", "--goal", "clique:3", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["winner"], "Maker");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["solve", "--board", "K:4"]).0, 2);
        let (code, _, err) = call(&["solve", "--board", "nope", "--goal", "tc", "--format", "json"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "unknown_graph");
        let (code, _, err) = call(&["solve", "--board", "K:7", "--goal", "tc", "--format", "json"]);
        assert_eq!(code, 3);
        assert!(err.contains("resource_cap"));
        assert_eq!(call(&["solve", "--board", "K:4", "--goal", "tc", "--bias", "2:1"]).0, 2);
        assert_eq!(call(&["verify", "nothing"]).0, 2);
    }

    #[test]
    fn catalog_formats() {
        let (code, out, _) = call(&["catalog", "K5minus", "--format", "graph6"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "D~w");
        let (_, out, _) = call(&["catalog", "S1"]);
        assert_eq!(load_board_text(&out).edge_count(), 11);
    }

    fn load_board_text(s: &str) -> Graph {
        from_edge_list(s).unwrap()
    }

    #[test]
    fn edge_formulas() {
        assert_eq!(parse_edge_formula("2v-1").unwrap(), (2, -1));
        assert_eq!(parse_edge_formula("v+3").unwrap(), (1, 3));
        assert_eq!(parse_edge_formula("7").unwrap(), (0, 7));
        assert!(parse_edge_formula("2w").is_err());
        assert!(!parse_density_bound("<=15/8").unwrap().1);
        assert!(parse_density_bound("15/8").unwrap().1);
    }

    #[test]
    fn solve_with_cache_file() {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().join("w5.mbtc");
        let args = ["solve", "--board", "W:5", "--goal", "clique:3", "--format", "json", "--cache", cache.to_str().unwrap()];
        let (_, first, _) = call(&args);
        let (_, second, _) = call(&args);
        let a: Value = serde_json::from_str(&first).unwrap();
        let b: Value = serde_json::from_str(&second).unwrap();
        assert_eq!(a["winner"], b["winner"]);
        assert!(b["cache_entries_loaded"].as_u64().unwrap() > 0);
    }

    #[test]
    fn board_files() {
        let dir = tempfile::tempdir().unwrap();
        let g6 = dir.path().join("k4.g6");
        fs::write(&g6, "C~\n").unwrap();
        assert_eq!(load_board(g6.to_str().unwrap()).unwrap().edge_count(), 6);
        let el = dir.path().join("p.txt");
        fs::write(&el, to_edge_list(&named("C:5").unwrap())).unwrap();
        assert_eq!(load_board(el.to_str().unwrap()).unwrap().edge_count(), 5);
    }

    #[test]
    fn simulate_writes_report() {
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("spec.json");
        fs::write(&spec, r#"{"goal": "clique:3", "n": 5, "ps": [0.5, 1.0]}"#).unwrap();
        let out = dir.path().join("r.json");
        let (code, _, err) = call(&[
            "simulate", "curve", "--spec", spec.to_str().unwrap(), "--seed", "3", "--trials", "10", "--threads", "2",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        let r: ExperimentReport = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(r.cells.len(), 2);
        assert_eq!(r.seed, 3);
        assert_eq!(call(&["simulate", "curve", "--spec", spec.to_str().unwrap(), "--out", "x.json"]).0, 2);
    }
}

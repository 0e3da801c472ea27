//! Named exact checks and the ledger that records them. Every verdict here
//! comes from exhaustive solving or enumeration.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::collections::{
    is_collection, is_very_basic, named_collection, reduction_check, verify_classification, write_atlas,
    CollectionClass,
};
use crate::error::{Error, Result};
use crate::experiments::trial_rng;
use crate::game::{Board, GameConfig, GameState, Goal, Player};
use crate::graph::{
    canonical_form, enumerate_nonisomorphic, named, to_graph6, EnumerationFilter, Graph, Rational,
};
use crate::solver::{duel, min_density_maker_win_search, solve_with, DuelOptions, SearchConstraints, SolverConfig};
use crate::strategies::{
    basic_breaker_script, catalog_breaker_script, pairing_is_blocking, very_basic_pairing, very_basic_script,
    SolverScript,
};

pub const CHECKS: [&str; 11] = [
    "k4-handicap",
    "w4-handicap",
    "k5minus",
    "si-scripts",
    "classification",
    "min-density-tc",
    "min-density-k3",
    "ta-equivalence",
    "very-basic-pairings",
    "reduction",
    "monotonicity",
];

/// Seed for the random boards of the ta-equivalence and reduction checks.
pub const CORPUS_SEED: u64 = 0x6d62_7431;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Verdict,
    pub budget_secs: u64,
    /// Wall time; kept out of the ledger file so it stays byte-stable.
    #[serde(skip)]
    pub runtime: Duration,
    pub details: Value,
    pub artifacts: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ledger {
    pub version: String,
    pub checks: Vec<CheckRecord>,
}

impl Ledger {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Verdict::Pass)
    }
}

/// Budget in seconds for a check.
pub fn budget(name: &str) -> Option<u64> {
    Some(match name {
        "k4-handicap" => 5,
        "w4-handicap" => 10,
        "k5minus" | "si-scripts" => 120,
        "classification" => 600,
        "min-density-tc" => 90 * 60,
        "min-density-k3" => 300,
        "ta-equivalence" => 1800,
        "very-basic-pairings" => 900,
        "reduction" => 1200,
        "monotonicity" => 1800,
        _ => return None,
    })
}

/// Runs one named check, writing artifacts under `out` when given.
pub fn run_check(name: &str, out: Option<&Path>) -> Result<CheckRecord> {
    let budget_secs = budget(name).ok_or_else(|| Error::InvalidParameters(format!("unknown check `{name}`")))?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    let start = Instant::now();
    let (ok, details, mut artifacts) = match name {
        "k4-handicap" => handicap_openings("K:4", |_, _| true)?,
        "w4-handicap" => handicap_openings("W:4", |a, b| !(a.0 == 0 || a.1 == 0) || !(b.0 == 0 || b.1 == 0))?,
        "k5minus" => catalog_check(&["K5minus"])?,
        "si-scripts" => catalog_check(&["S1", "S2", "S3", "S4"])?,
        "classification" => classification_check(out)?,
        "min-density-tc" => min_density_tc()?,
        "min-density-k3" => min_density_k3()?,
        "ta-equivalence" => ta_equivalence()?,
        "very-basic-pairings" => very_basic_check()?,
        "reduction" => reduction_corpus()?,
        "monotonicity" => monotonicity()?,
        _ => unreachable!(),
    };
    let runtime = start.elapsed();
    if let Some(dir) = out {
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, serde_json::to_string_pretty(&details)?)?;
        artifacts.insert(0, path.display().to_string());
    }
    let in_time = runtime.as_secs_f64() <= budget_secs as f64;
    Ok(CheckRecord {
        name: name.to_string(),
        status: if ok && in_time { Verdict::Pass } else { Verdict::Fail },
        budget_secs,
        runtime,
        details,
        artifacts,
    })
}

/// Runs every check in order and writes `ledger.json` when `out` is given.
pub fn run_all(out: Option<&Path>) -> Result<Ledger> {
    let checks = CHECKS.iter().map(|c| run_check(c, out)).collect::<Result<Vec<_>>>()?;
    let ledger = Ledger { version: concat!("mbt ", env!("CARGO_PKG_VERSION")).to_string(), checks };
    if let Some(dir) = out {
        fs::write(dir.join("ledger.json"), serde_json::to_string_pretty(&ledger)?)?;
    }
    Ok(ledger)
}

type Outcome = (bool, Value, Vec<String>);
type Arc2 = [(usize, usize); 2];

fn cfg21() -> SolverConfig {
    SolverConfig { max_oriented_edges: 21, ..SolverConfig::default() }
}

fn solve_graph(g: &Graph, goal: &Goal, config: GameConfig) -> Result<Player> {
    let board = Board::new(g.clone(), goal.clone(), config)?;
    Ok(solve_with(&GameState::new(board), cfg21())?.winner)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(i: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(i + 1, p, out);
            p.swap(i, j);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Classes of two-arc openings under graph automorphisms, and arc reversal
/// when the goal allows it.
pub fn opening_classes(board: &Board, keep: impl Fn((usize, usize), (usize, usize)) -> bool) -> Vec<Arc2> {
    let g = &board.graph;
    let autos: Vec<Vec<usize>> =
        permutations(g.n()).into_iter().filter(|p| g.edges().iter().all(|&(u, v)| g.has_edge(p[u], p[v]))).collect();
    let flips: &[bool] = if board.reversal_symmetric() { &[false, true] } else { &[false] };
    let arcs: Vec<(usize, usize)> = g.edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
    let mut reps = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, &a) in arcs.iter().enumerate() {
        for &b in &arcs[i + 1..] {
            if (a.0.min(a.1), a.0.max(a.1)) == (b.0.min(b.1), b.0.max(b.1)) || !keep(a, b) {
                continue;
            }
            let key = |x: (usize, usize), y: (usize, usize)| if x <= y { [x, y] } else { [y, x] };
            let canon = autos
                .iter()
                .flat_map(|p| {
                    flips.iter().map(move |&f| {
                        let m = |(t, h): (usize, usize)| if f { (p[h], p[t]) } else { (p[t], p[h]) };
                        key(m(a), m(b))
                    })
                })
                .min()
                .unwrap();
            if seen.insert(canon) {
                reps.push(key(a, b));
            }
        }
    }
    reps
}

fn handicap_openings(board_name: &str, keep: impl Fn((usize, usize), (usize, usize)) -> bool) -> Result<Outcome> {
    let board = Board::new(named(board_name)?, Goal::tc(), GameConfig::with_handicap())?;
    let reps = opening_classes(&board, keep);
    let mut rows = Vec::new();
    let mut ok = true;
    for [a, b] in &reps {
        let mut st = GameState::new(board.clone());
        st.apply(board.arc(a.0, a.1).unwrap())?;
        st.apply(board.arc(b.0, b.1).unwrap())?;
        let w = solve_with(&st, SolverConfig::default())?.winner;
        ok &= w == Player::Breaker;
        rows.push(json!({"arcs": [[a.0, a.1], [b.0, b.1]], "winner": w}));
    }
    Ok((ok, json!({"board": board_name, "goal": "tc", "opening_classes": reps.len(), "openings": rows}), vec![]))
}

fn catalog_check(ids: &[&str]) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut ok = true;
    for id in ids {
        let g = named_collection(id)?;
        let board = Board::new(g.clone(), Goal::tc(), GameConfig::default())?;
        let w = solve_with(&GameState::new(board.clone()), SolverConfig::default())?.winner;
        let script = catalog_breaker_script(id, &board)?;
        let d = duel(&GameState::new(board), &script, DuelOptions::default())?;
        ok &= w == Player::Breaker && d.always_wins();
        rows.push(json!({
            "name": id,
            "graph6": to_graph6(&g)?,
            "winner": w,
            "script_always_wins": d.always_wins(),
        }));
    }
    Ok((ok, json!({"goal": "tc", "boards": rows}), vec![]))
}

fn classification_check(out: Option<&Path>) -> Result<Outcome> {
    let r = verify_classification()?;
    let mut artifacts = Vec::new();
    if let Some(dir) = out {
        let path = dir.join("atlas.jsonl");
        write_atlas(&r.classes, fs::File::create(&path)?)?;
        artifacts.push(path.display().to_string());
    }
    Ok((r.pass, serde_json::to_value(&r)?, artifacts))
}

fn rational(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

fn min_density_tc() -> Result<Outcome> {
    let lower = min_density_maker_win_search(
        &Goal::tc(),
        &SearchConstraints { v_min: 3, v_max: 7, max_density: Some((rational("15/8"), true)), ..Default::default() },
    )?;
    let upper = min_density_maker_win_search(
        &Goal::tc(),
        &SearchConstraints {
            v_min: 8,
            v_max: 8,
            edges: Some((15, 15)),
            max_density: Some((rational("15/8"), false)),
            ..Default::default()
        },
    )?;
    let mut duel_ok = false;
    let mut orientation_ok = false;
    if let Some(w) = &upper.witness {
        orientation_ok = match &upper.cyclic_orientation {
            Some(o) => cyclic_everywhere(&w.graph, o),
            None => false,
        };
        let board = Board::new(w.graph.clone(), Goal::tc(), GameConfig::default())?;
        let script = SolverScript::new(&board, Player::Maker, Some(5))?;
        duel_ok = duel(&GameState::new(board), &script, DuelOptions { maker_move_limit: Some(5) })?.always_wins();
    }
    let witness = upper.witness.as_ref();
    let ok = lower.maker_win_classes.is_empty()
        && witness.is_some_and(|w| w.vertices == 8 && w.edges == 15 && w.max_density == rational("15/8"))
        && orientation_ok
        && duel_ok;
    let details = json!({
        "lower": {
            "classes_examined": lower.classes_examined,
            "maker_wins": lower.maker_win_classes.len(),
        },
        "upper": {
            "classes_examined": upper.classes_examined,
            "maker_wins": upper.maker_win_classes.iter().map(|w| &w.graph6).collect::<Vec<_>>(),
            "witness": witness.map(|w| &w.graph6),
            "m": witness.map(|w| w.max_density.to_string()),
            "cyclic_orientation": upper.cyclic_orientation,
            "orientation_all_cyclic": orientation_ok,
            "duel_within_5_maker_moves": duel_ok,
        },
    });
    Ok((ok, details, vec![]))
}

/// Every triangle of `g` is a directed cycle under `arcs`.
pub fn cyclic_everywhere(g: &Graph, arcs: &[(usize, usize)]) -> bool {
    let has = |t: usize, h: usize| arcs.contains(&(t, h));
    arcs.len() >= g.edges().iter().filter(|&&(u, v)| g.neighbors(u).any(|w| g.has_edge(v, w))).count()
        && g.triangles().iter().all(|&[a, b, c]| (has(a, b) && has(b, c) && has(c, a)) || (has(b, a) && has(c, b) && has(a, c)))
}

fn min_density_k3() -> Result<Outcome> {
    let r = min_density_maker_win_search(
        &Goal::Clique(3),
        &SearchConstraints { v_min: 1, v_max: 5, collections_only: false, ..Default::default() },
    )?;
    let k5minus = canonical_form(&named("K5minus")?)?.key();
    let witness_is_k5minus = match &r.witness {
        Some(w) => canonical_form(&w.graph)?.key() == k5minus,
        None => false,
    };
    let ok = r.min_density == Some(rational("9/5")) && witness_is_k5minus;
    let details = json!({
        "classes_examined": r.classes_examined,
        "maker_wins": r.maker_win_classes.len(),
        "min_density": r.min_density.map(|m| m.to_string()),
        "witness": r.witness.as_ref().map(|w| &w.graph6),
        "witness_is_k5minus": witness_is_k5minus,
    });
    Ok((ok, details, vec![]))
}

/// Connected triangle collections on `3..=max_v` vertices, one per class.
pub fn collection_corpus(max_v: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for v in 3..=max_v {
        let f = EnumerationFilter {
            min_edges: 3,
            max_edges: v * (v - 1) / 2,
            min_degree: 2,
            every_edge_in_triangle: true,
            connected: true,
            max_density: None,
        };
        out.extend(enumerate_nonisomorphic(v, &f)?.into_iter().filter(is_collection));
    }
    Ok(out)
}

/// Seeded random boards: 4 to 8 vertices, 1 to `max_edges` edges.
pub fn random_boards(count: usize, max_edges: usize, seed: u64) -> Result<Vec<Graph>> {
    (0..count as u64)
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let n = rng.gen_range(4..=8usize);
            let all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = rng.gen_range(1..=max_edges.min(all.len()));
            let edges: Vec<(usize, usize)> = all.choose_multiple(&mut rng, m).copied().collect();
            Graph::from_edges(n, &edges)
        })
        .collect()
}

fn ta_equivalence() -> Result<Outcome> {
    let mut boards = collection_corpus(7)?;
    let n_corpus = boards.len();
    boards.extend(random_boards(200, 12, CORPUS_SEED)?);
    let rows: Vec<(Player, Player)> = boards
        .par_iter()
        .map(|g| {
            Ok((
                solve_graph(g, &Goal::ta(), GameConfig::default())?,
                solve_graph(g, &Goal::Clique(3), GameConfig::default())?,
            ))
        })
        .collect::<Result<_>>()?;
    let mismatches: Vec<String> =
        boards.iter().zip(&rows).filter(|(_, (a, b))| a != b).map(|(g, _)| to_graph6(g).unwrap()).collect();
    let maker = rows.iter().filter(|r| r.0 == Player::Maker).count();
    let details = json!({
        "collections": n_corpus,
        "random_boards": boards.len() - n_corpus,
        "maker_wins": maker,
        "mismatches": mismatches,
    });
    Ok((mismatches.is_empty(), details, vec![]))
}

/// Graphs on up to 7 vertices, every edge in a triangle, that are very basic.
pub fn very_basic_corpus() -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for v in 3..=7 {
        let f = EnumerationFilter {
            min_edges: 3,
            max_edges: v * (v - 1) / 2,
            min_degree: 2,
            every_edge_in_triangle: true,
            connected: false,
            max_density: None,
        };
        out.extend(enumerate_nonisomorphic(v, &f)?.into_iter().filter(is_very_basic));
    }
    Ok(out)
}

fn very_basic_check() -> Result<Outcome> {
    let graphs = very_basic_corpus()?;
    let failures: Vec<String> = graphs
        .par_iter()
        .map(|g| -> Result<Option<String>> {
            let board = Board::new(g.clone(), Goal::Clique(3), GameConfig::default())?;
            for &f1 in g.edges().iter() {
                if !pairing_is_blocking(&board, &very_basic_pairing(g, &[f1])?)? {
                    return Ok(Some(format!("{} pairing after {f1:?}", to_graph6(g)?)));
                }
            }
            let hboard = Board::new(g.clone(), Goal::Clique(3), GameConfig::with_handicap())?;
            if !duel(&GameState::new(hboard), &very_basic_script(g)?, DuelOptions::default())?.always_wins() {
                return Ok(Some(format!("{} handicap duel", to_graph6(g)?)));
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let classes: Vec<CollectionClass> = verify_classification()?.classes.into_iter().filter(|c| c.is_basic()).collect();
    let mut basic_rows = Vec::new();
    let mut basic_ok = true;
    for c in &classes {
        let board = Board::new(c.graph.clone(), Goal::Clique(3), GameConfig::default())?;
        let wins = duel(&GameState::new(board), &basic_breaker_script(&c.graph)?, DuelOptions::default())?.always_wins();
        basic_ok &= wins;
        basic_rows.push(json!({"name": c.label(), "script_always_wins": wins}));
    }
    let details = json!({
        "very_basic_graphs": graphs.len(),
        "failures": failures,
        "basic_classes": basic_rows,
    });
    Ok((failures.is_empty() && basic_ok && !classes.is_empty(), details, vec![]))
}

fn reduction_corpus() -> Result<Outcome> {
    let boards = random_boards(100, 12, CORPUS_SEED ^ 1)?;
    let rows: Vec<Value> = boards
        .par_iter()
        .map(|g| {
            let a = reduction_check(g, &Goal::Clique(3))?;
            let b = reduction_check(g, &Goal::tc())?;
            Ok(json!({
                "graph6": to_graph6(g)?,
                "clique3": [a.board_winner, a.consistent],
                "tc": [b.board_winner, b.consistent],
            }))
        })
        .collect::<Result<_>>()?;
    let ok = rows.iter().all(|r| r["clique3"][1] == true && r["tc"][1] == true);
    Ok((ok, json!({"boards": rows.len(), "results": rows}), vec![]))
}

/// Winners of `g` for the triangle and cyclic-triangle games.
fn winners(g: &Graph, config: GameConfig) -> Result<[Player; 2]> {
    Ok([solve_graph(g, &Goal::Clique(3), config)?, solve_graph(g, &Goal::tc(), config)?])
}

fn monotonicity() -> Result<Outcome> {
    let corpus = collection_corpus(7)?;
    let problems: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> Result<Vec<String>> {
            let mut bad = Vec::new();
            let name = to_graph6(g)?;
            let base = winners(g, GameConfig::default())?;
            let mut prev = base;
            for b in 2..=3 {
                let cur = winners(g, GameConfig::biased(b))?;
                for j in 0..2 {
                    if prev[j] == Player::Breaker && cur[j] == Player::Maker {
                        bad.push(format!("{name}: bias 1:{} Breaker but 1:{b} Maker", b - 1));
                    }
                }
                prev = cur;
            }
            for &(u, v) in g.edges().iter() {
                let sub = winners(&g.without_edge(u, v), GameConfig::default())?;
                for j in 0..2 {
                    if base[j] == Player::Breaker && sub[j] == Player::Maker {
                        bad.push(format!("{name}: removing {u}-{v} helps Maker"));
                    }
                }
            }
            let mut rng = trial_rng(CORPUS_SEED ^ 2, i as u64);
            for _ in 0..100 {
                let mut perm: Vec<usize> = (0..g.n()).collect();
                perm.shuffle(&mut rng);
                if winners(&g.relabel(&perm), GameConfig::default())? != base {
                    bad.push(format!("{name}: winner changes under {perm:?}"));
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let per_pool = |threads: usize| -> Result<Vec<[Player; 2]>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| corpus.par_iter().map(|g| winners(g, GameConfig::default())).collect())
    };
    let deterministic = per_pool(1)? == per_pool(4)?;
    let details = json!({
        "boards": corpus.len(),
        "relabelings_per_board": 100,
        "biases": [1, 2, 3],
        "problems": problems,
        "thread_determinism": deterministic,
    });
    Ok((problems.is_empty() && deterministic, details, vec![]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_openings_fold_by_symmetry() {
        let b = Board::new(named("K:4").unwrap(), Goal::tc(), GameConfig::with_handicap()).unwrap();
        // adjacent arcs out-out, in-in, through a vertex; disjoint arcs
        assert_eq!(opening_classes(&b, |_, _| true).len(), 3);
        let plain = Board::new(named("K:4").unwrap(), Goal::ta(), GameConfig::with_handicap()).unwrap();
        assert!(opening_classes(&plain, |_, _| true).len() >= 3);
    }

    #[test]
    fn random_boards_are_seeded() {
        let a = random_boards(20, 12, 1).unwrap();
        let b = random_boards(20, 12, 1).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.edges() == y.edges()));
        assert!(a.iter().all(|g| (1..=12).contains(&g.edge_count()) && (4..=8).contains(&g.n())));
    }

    #[test]
    fn unknown_check() {
        assert!(run_check("nope", None).is_err());
    }

    #[test]
    fn cyclic_orientation_helper() {
        let k3 = named("K:3").unwrap();
        assert!(cyclic_everywhere(&k3, &[(0, 1), (1, 2), (2, 0)]));
        assert!(!cyclic_everywhere(&k3, &[(0, 1), (1, 2), (0, 2)]));
    }
}

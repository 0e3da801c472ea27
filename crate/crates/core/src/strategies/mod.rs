//! Executable Breaker and Maker strategies: pairings, the basic-graph
//! scripts, catalog scripts for the minimal collections, and Maker
//! compositions.

mod catalog;
mod maker;

pub use catalog::{catalog_breaker_script, s_plan, CatalogScript, Cover, SPlan, CATALOG_IDS};
pub use maker::{
    identification_maker_script, ta_orientation_script, IdentificationMap, IdentificationScript, RandomMaker,
    TaOrientationScript,
};

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHasher;
use serde::{Deserialize, Serialize};

use crate::collections::{basic_witness, is_very_basic};
use crate::error::{Error, Result};
use crate::game::{Board, EdgeStatus, GameState, Move, Orientation, Play, Player};
use crate::graph::Graph;
use crate::solver::{Engine, Script, SolverConfig, StrategyTree};

type Edge = (usize, usize);

fn norm((u, v): Edge) -> Edge {
    (u.min(v), u.max(v))
}

/// Disjoint edge pairs, as vertex pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub pairs: Vec<[Edge; 2]>,
    /// Breaker's first claim, if prescribed.
    pub first_reply: Option<Edge>,
    /// Triangles in the order the pairs were assigned, one pair each.
    #[serde(default)]
    pub order: Vec<[usize; 3]>,
}

impl Pairing {
    pub fn new(pairs: Vec<[Edge; 2]>) -> Pairing {
        Pairing { pairs: pairs.into_iter().map(|[a, b]| [norm(a), norm(b)]).collect(), ..Pairing::default() }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut seen = HashSet::new();
        for &[a, b] in &self.pairs {
            for e in [a, b] {
                let e = norm(e);
                if !g.has_edge(e.0, e.1) {
                    return Err(Error::InvalidPairing(format!("{e:?} is not an edge")));
                }
                if !seen.insert(e) {
                    return Err(Error::InvalidPairing(format!("{e:?} is in two pairs")));
                }
            }
        }
        if let Some(e) = self.first_reply {
            if !g.has_edge(e.0, e.1) {
                return Err(Error::InvalidPairing(format!("first reply {e:?} is not an edge")));
            }
        }
        Ok(())
    }

    pub fn partner(&self, e: Edge) -> Option<Edge> {
        let e = norm(e);
        self.pairs.iter().find_map(|&[a, b]| {
            if norm(a) == e {
                Some(norm(b))
            } else if norm(b) == e {
                Some(norm(a))
            } else {
                None
            }
        })
    }
}

/// True iff every winning set of the board contains both edges of some
/// pair.
pub fn pairing_is_blocking(board: &Board, pairing: &Pairing) -> Result<bool> {
    pairing.validate(&board.graph)?;
    let ids: Vec<(u32, u32)> = pairing
        .pairs
        .iter()
        .map(|&[a, b]| (board.edge_id(a.0, a.1).unwrap(), board.edge_id(b.0, b.1).unwrap()))
        .collect();
    Ok(board.winning_sets().iter().all(|s| {
        let has = |e: u32| s.iter().any(|&(x, _)| x == e);
        ids.iter().any(|&(a, b)| has(a) && has(b))
    }))
}

fn lowest_free(state: &GameState) -> Play {
    let oriented = state.mover() == Player::Maker && state.board().goal.is_oriented();
    let o = if oriented { Orientation::Forward } else { Orientation::Undirected };
    state.free_edges().next().map_or(Play::Skip, |e| Play::Claim(Move::new(e, o)))
}

fn claim(e: usize) -> Play {
    Play::Claim(Move::plain(e))
}

/// Breaker's reply under a pairing: the prescribed first claim, else the
/// free partner of the lowest Maker edge that has one, else the lowest free
/// edge.
pub fn pairing_reply(state: &GameState, pairing: &Pairing) -> Play {
    let board = state.board();
    let free = |e: Edge| board.edge_id(e.0, e.1).filter(|&id| state.edge_status(id as usize) == EdgeStatus::Free);
    if state.breaker_edges().is_empty() {
        if let Some(id) = pairing.first_reply.and_then(free) {
            return claim(id as usize);
        }
    }
    let mut mine: Vec<usize> = state.maker_moves().iter().map(|m| m.edge).collect();
    mine.sort_unstable();
    for e in mine {
        if let Some(id) = pairing.partner(board.edge(e)).and_then(free) {
            return claim(id as usize);
        }
    }
    lowest_free(state)
}

/// Breaker answering by a fixed pairing.
pub struct PairingScript {
    pub pairing: Pairing,
}

impl Script for PairingScript {
    fn name(&self) -> String {
        "pairing".into()
    }

    fn player(&self) -> Player {
        Player::Breaker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        Ok(pairing_reply(state, &self.pairing))
    }
}

/// One pair inside each triangle, all pairs disjoint, avoiding Maker's
/// first edge; Breaker's first claim is the partner of Maker's second edge.
/// Tries both orders of Maker's opening edges.
pub fn very_basic_pairing(g: &Graph, maker_first: &[Edge]) -> Result<Pairing> {
    if !is_very_basic(g) {
        return Err(Error::Precondition("graph is not very basic".into()));
    }
    let first: Vec<Edge> = maker_first.iter().map(|&e| norm(e)).collect();
    let orders: Vec<Vec<Edge>> = match first.as_slice() {
        [a, b] => vec![vec![*a, *b], vec![*b, *a]],
        other => vec![other.to_vec()],
    };
    for f in orders {
        if let Some(p) = assign_pairs(g, f.first().copied(), f.get(1).copied()) {
            return Ok(p);
        }
    }
    Err(Error::InvalidPairing("no disjoint pair per triangle exists".into()))
}

fn assign_pairs(g: &Graph, f1: Option<Edge>, f2: Option<Edge>) -> Option<Pairing> {
    let tris = g.triangles();
    // order: breadth first along the triangle relation, from a triangle
    // holding f1, one component after another
    let shares = |a: &[usize; 3], b: &[usize; 3]| a.iter().filter(|v| b.contains(v)).count() == 2;
    let start = f1.and_then(|f| tris.iter().position(|t| t.contains(&f.0) && t.contains(&f.1))).unwrap_or(0);
    let mut order = Vec::with_capacity(tris.len());
    let mut done = vec![false; tris.len()];
    for s in std::iter::once(start).chain(0..tris.len()) {
        if s >= tris.len() || done[s] {
            continue;
        }
        done[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(i) = q.pop_front() {
            order.push(tris[i]);
            for j in 0..tris.len() {
                if !done[j] && shares(&tris[i], &tris[j]) {
                    done[j] = true;
                    q.push_back(j);
                }
            }
        }
    }
    fn rec(i: usize, order: &[[usize; 3]], f1: Option<Edge>, used: &mut HashSet<Edge>, seen: &mut HashSet<Edge>, out: &mut Vec<[Edge; 2]>) -> bool {
        if i == order.len() {
            return true;
        }
        let [a, b, c] = order[i];
        let es = [(a, b), (a, c), (b, c)];
        let mut options: Vec<[Edge; 2]> = vec![[es[0], es[1]], [es[0], es[2]], [es[1], es[2]]];
        options.retain(|p| p.iter().all(|e| Some(*e) != f1 && !used.contains(e)));
        // new edges first
        options.sort_by_key(|p| p.iter().filter(|e| seen.contains(e)).count());
        let fresh: Vec<Edge> = es.iter().copied().filter(|e| seen.insert(*e)).collect();
        for p in options {
            used.insert(p[0]);
            used.insert(p[1]);
            out.push(p);
            if rec(i + 1, order, f1, used, seen, out) {
                return true;
            }
            out.pop();
            used.remove(&p[0]);
            used.remove(&p[1]);
        }
        for e in fresh {
            seen.remove(&e);
        }
        false
    }
    let mut pairs = Vec::new();
    if !rec(0, &order, f1, &mut HashSet::new(), &mut HashSet::new(), &mut pairs) {
        return None;
    }
    let mut p = Pairing { pairs, first_reply: None, order };
    p.first_reply = f2.and_then(|f| p.partner(f));
    Some(p)
}

fn ctx_hash<T: Hash + ?Sized>(t: &T) -> u64 {
    let mut h = FxHasher::default();
    t.hash(&mut h);
    h.finish()
}

/// Maker's claims made before Breaker's `n`th claim, as vertex pairs.
fn maker_edges_before_breaker_claim(state: &GameState, n: usize) -> Vec<Edge> {
    let board = state.board();
    let mut seen_b = 0;
    let mut out = Vec::new();
    for a in state.history() {
        match (a.player, a.play) {
            (Player::Breaker, Play::Claim(_)) => {
                seen_b += 1;
                if seen_b == n {
                    break;
                }
            }
            (Player::Maker, Play::Claim(m)) => out.push(board.edge(m.edge)),
            _ => {}
        }
    }
    out
}

/// Breaker on a very basic graph: builds the pairing from Maker's opening
/// claims (up to two) and answers by it.
pub struct VeryBasicScript {
    cache: RefCell<HashMap<Vec<Edge>, Pairing>>,
}

pub fn very_basic_script(g: &Graph) -> Result<VeryBasicScript> {
    if !is_very_basic(g) {
        return Err(Error::Precondition("graph is not very basic".into()));
    }
    Ok(VeryBasicScript { cache: RefCell::new(HashMap::new()) })
}

impl Script for VeryBasicScript {
    fn name(&self) -> String {
        "very-basic-pairing".into()
    }

    fn player(&self) -> Player {
        Player::Breaker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let opening = maker_edges_before_breaker_claim(state, 1);
        let mut cache = self.cache.borrow_mut();
        if !cache.contains_key(&opening) {
            let p = very_basic_pairing(&state.board().graph, &opening)?;
            cache.insert(opening.clone(), p);
        }
        Ok(pairing_reply(state, &cache[&opening]))
    }

    fn context(&self, state: &GameState) -> u64 {
        ctx_hash(&maker_edges_before_breaker_claim(state, 1))
    }
}

/// Breaker on a basic graph: takes `e1` (or `e2` if Maker has it), then
/// plays the very basic pairing of the remaining graph, treating Maker's
/// claims so far as her opening.
pub struct BasicScript {
    pub e1: Edge,
    pub e2: Edge,
    cache: RefCell<HashMap<(Edge, Vec<Edge>), Pairing>>,
}

pub fn basic_breaker_script(g: &Graph) -> Result<BasicScript> {
    let (e1, e2) = basic_witness(g).ok_or_else(|| Error::Precondition("graph is not basic".into()))?;
    Ok(BasicScript { e1, e2, cache: RefCell::new(HashMap::new()) })
}

impl BasicScript {
    fn removed(&self, state: &GameState) -> Option<Edge> {
        state.history().iter().find_map(|a| match (a.player, a.play) {
            (Player::Breaker, Play::Claim(m)) => Some(state.board().edge(m.edge)),
            _ => None,
        })
    }
}

impl Script for BasicScript {
    fn name(&self) -> String {
        "basic".into()
    }

    fn player(&self) -> Player {
        Player::Breaker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let board = state.board();
        let Some(gone) = self.removed(state) else {
            let id = |e: Edge| board.edge_id(e.0, e.1).expect("witness edge") as usize;
            let e = if state.edge_status(id(self.e1)) == EdgeStatus::Free { self.e1 } else { self.e2 };
            return Ok(claim(id(e)));
        };
        let opening = maker_edges_before_breaker_claim(state, 2);
        let key = (gone, opening);
        let mut cache = self.cache.borrow_mut();
        if !cache.contains_key(&key) {
            let rest = board.graph.without_edge(gone.0, gone.1);
            let p = very_basic_pairing(&rest, &key.1)?;
            cache.insert(key.clone(), p);
        }
        let mut p = cache[&key].clone();
        // the prescribed reply is this script's second claim
        if state.breaker_edges().len() == 1 {
            if let Some(e) = p.first_reply {
                if let Some(id) = board.edge_id(e.0, e.1) {
                    if state.edge_status(id as usize) == EdgeStatus::Free {
                        return Ok(claim(id as usize));
                    }
                }
            }
        }
        p.first_reply = None;
        Ok(pairing_reply(state, &p))
    }

    fn context(&self, state: &GameState) -> u64 {
        ctx_hash(&(self.removed(state), maker_edges_before_breaker_claim(state, 2)))
    }
}

/// Claims the lowest free edge (forward when oriented).
pub struct LowestFree(pub Player);

impl Script for LowestFree {
    fn name(&self) -> String {
        "lowest-free".into()
    }

    fn player(&self) -> Player {
        self.0
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        Ok(lowest_free(state))
    }
}

/// Perfect play from the solver, optionally within a Maker claim budget
/// counted from the start of the game. Falls back to the lowest free edge
/// when the player has no win.
pub struct SolverScript {
    player: Player,
    budget: Option<usize>,
    engine: RefCell<Engine>,
}

impl SolverScript {
    pub fn new(board: &Board, player: Player, budget: Option<usize>) -> Result<SolverScript> {
        Ok(SolverScript { player, budget, engine: RefCell::new(Engine::new(board, SolverConfig::default())?) })
    }
}

impl Script for SolverScript {
    fn name(&self) -> String {
        format!("solver-{}", self.player)
    }

    fn player(&self) -> Player {
        self.player
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let left = self.budget.map(|b| {
            b.saturating_sub(state.history().iter().filter(|a| a.player == Player::Maker).count())
        });
        Ok(match self.engine.borrow_mut().winning_move(state, left)? {
            Some(mv) => Play::Claim(mv),
            None => lowest_free(state),
        })
    }
}

/// Replays an extracted strategy.
pub struct TreeScript(pub StrategyTree);

impl Script for TreeScript {
    fn name(&self) -> String {
        "strategy-tree".into()
    }

    fn player(&self) -> Player {
        self.0.player
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        self.0.reply(state).map(Play::Claim).ok_or_else(|| Error::Script {
            script: self.name(),
            msg: format!("no reply recorded for {}", state.code()),
            history_len: state.history().len(),
        })
    }
}

/// Claims the free edge lying in the most alive winning sets, ties by
/// lowest id. A heuristic.
pub struct GreedyBreaker;

impl Script for GreedyBreaker {
    fn name(&self) -> String {
        "greedy-breaker".into()
    }

    fn player(&self) -> Player {
        Player::Breaker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let board = state.board();
        let best = state
            .free_edges()
            .map(|e| {
                let live = board.sets_through(e).iter().filter(|&&(s, _)| state.is_alive(s as usize)).count();
                (std::cmp::Reverse(live), e)
            })
            .min();
        Ok(best.map_or(Play::Skip, |(_, e)| claim(e)))
    }
}

/// Uniform free edge, drawn from a stream fixed by the seed and the number
/// of Breaker actions so far.
pub struct RandomBreaker {
    pub seed: u64,
}

impl Script for RandomBreaker {
    fn name(&self) -> String {
        format!("random-breaker({})", self.seed)
    }

    fn player(&self) -> Player {
        Player::Breaker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let free: Vec<usize> = state.free_edges().collect();
        if free.is_empty() {
            return Ok(Play::Skip);
        }
        let step = state.history().iter().filter(|a| a.player == Player::Breaker).count() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(step);
        Ok(claim(free[rng.gen_range(0..free.len())]))
    }

    fn context(&self, state: &GameState) -> u64 {
        state.history().len() as u64
    }
}

#[cfg(test)]
mod tests;

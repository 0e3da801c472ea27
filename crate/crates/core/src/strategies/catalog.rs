use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{claim, ctx_hash, lowest_free, norm, pairing_reply, Edge, Pairing};
use crate::collections::named_collection;
use crate::error::{Error, Result};
use crate::game::{Board, EdgeStatus, GameConfig, GameState, Goal, Move, Orientation, Play, Player};
use crate::graph::{canonical_form, Graph};
use crate::solver::{duel, DuelOptions, Engine, Script, SolverConfig};

pub const CATALOG_IDS: [&str; 5] = ["K5minus", "S1", "S2", "S3", "S4"];

/// A K4 or W4 inside a collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub kind: &'static str,
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

/// Breaker's plan on an S graph: open on `a1` (or `a2` if Maker has
/// oriented `a1`), then answer inside the cover Maker just played in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPlan {
    pub covers: [Cover; 2],
    pub a1: Edge,
    pub a2: Edge,
}

impl SPlan {
    fn mapped(&self, perm: &[usize]) -> SPlan {
        let e = |(u, v): Edge| norm((perm[u], perm[v]));
        let c = |c: &Cover| Cover {
            kind: c.kind,
            vertices: c.vertices.iter().map(|&v| perm[v]).collect(),
            edges: c.edges.iter().map(|&x| e(x)).collect(),
        };
        SPlan { covers: [c(&self.covers[0]), c(&self.covers[1])], a1: e(self.a1), a2: e(self.a2) }
    }
}

fn k4s_and_w4s(g: &Graph) -> Vec<Cover> {
    let mut out = Vec::new();
    for q in g.k_cliques(4) {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push(norm((q[i], q[j])));
            }
        }
        out.push(Cover { kind: "K4", vertices: q, edges });
    }
    for c in 0..g.n() {
        let nb: Vec<usize> = g.neighbors(c).collect();
        // rims a-b-d-e-a among the neighbours, each listed once
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                for &d in &nb[i + 1..] {
                    for &e in &nb[i + 1..] {
                        let rim = [a, b, d, e];
                        if b >= e || d == b || d == e {
                            continue;
                        }
                        if !(g.has_edge(a, b) && g.has_edge(b, d) && g.has_edge(d, e) && g.has_edge(e, a)) {
                            continue;
                        }
                        let mut edges: Vec<Edge> = rim.iter().map(|&r| norm((c, r))).collect();
                        edges.extend([(a, b), (b, d), (d, e), (e, a)].map(norm));
                        edges.sort_unstable();
                        let mut vertices = vec![c, a, b, d, e];
                        vertices.sort_unstable();
                        out.push(Cover { kind: "W4", vertices, edges });
                    }
                }
            }
        }
    }
    out
}

/// The plan for a named S graph, in that graph's labels. Candidates are
/// pairs of K4/W4 covers leaving at most one edge uncovered, and ordered
/// pairs of opening edges; the first whose script wins every duel is kept.
pub fn s_plan(id: &str) -> Result<SPlan> {
    static PLANS: OnceLock<Mutex<HashMap<String, SPlan>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = plans.lock().unwrap().get(id) {
        return Ok(p.clone());
    }
    if !id.starts_with('S') || !CATALOG_IDS.contains(&id) {
        return Err(Error::UnknownGraph(id.to_string()));
    }
    let g = named_collection(id)?;
    let board = Board::new(g.clone(), Goal::tc(), GameConfig::default())?;
    let edges = g.edges();
    let covers = k4s_and_w4s(&g);
    for i in 0..covers.len() {
        for j in i + 1..covers.len() {
            let uncovered =
                edges.iter().filter(|e| !covers[i].edges.contains(e) && !covers[j].edges.contains(e)).count();
            if uncovered > 1 {
                continue;
            }
            let shared: Vec<Edge> = edges.iter().copied().filter(|e| covers[i].edges.contains(e) && covers[j].edges.contains(e)).collect();
            let mut openers: Vec<Edge> = shared.clone();
            openers.extend(edges.iter().copied().filter(|e| !shared.contains(e)));
            for &a1 in &openers {
                for &a2 in &openers {
                    if a1 == a2 {
                        continue;
                    }
                    let plan = SPlan { covers: [covers[i].clone(), covers[j].clone()], a1, a2 };
                    let script = CatalogScript::s_script(id, &board, plan.clone())?;
                    if duel(&GameState::new(board.clone()), &script, DuelOptions::default())?.always_wins() {
                        plans.lock().unwrap().insert(id.to_string(), plan.clone());
                        return Ok(plan);
                    }
                }
            }
        }
    }
    Err(Error::Precondition(format!("no cover plan for {id} survives the duel")))
}

struct Sub {
    board: Arc<Board>,
    vmap: Vec<Option<usize>>,
    back: Vec<usize>,
    engine: RefCell<Engine>,
    cache: RefCell<HashMap<String, Option<Move>>>,
}

impl Sub {
    fn new(parent: &Board, cover: &Cover) -> Result<Sub> {
        let mut vmap = vec![None; parent.graph.n()];
        for (i, &v) in cover.vertices.iter().enumerate() {
            vmap[v] = Some(i);
        }
        let local: Vec<Edge> = cover.edges.iter().map(|&(u, v)| (vmap[u].unwrap(), vmap[v].unwrap())).collect();
        let board = Board::new(Graph::from_edges(cover.vertices.len(), &local)?, parent.goal.clone(), GameConfig::default())?;
        let engine = RefCell::new(Engine::new(&board, SolverConfig::default())?);
        Ok(Sub { board, vmap, back: cover.vertices.clone(), engine, cache: RefCell::new(HashMap::new()) })
    }

    fn contains(&self, (u, v): Edge) -> bool {
        matches!((self.vmap[u], self.vmap[v]), (Some(a), Some(b)) if self.board.edge_id(a, b).is_some())
    }

    /// Breaker's winning reply inside this cover, as a parent edge.
    fn reply(&self, state: &GameState) -> Result<Option<Edge>> {
        let sub = state.project(self.board.clone(), &self.vmap)?;
        if sub.is_over() || sub.mover() != Player::Breaker {
            return Ok(None);
        }
        let code = sub.code();
        let cached = self.cache.borrow().get(&code).copied();
        let mv = match cached {
            Some(m) => m,
            None => {
                let m = self.engine.borrow_mut().winning_move(&sub, None)?;
                self.cache.borrow_mut().insert(code, m);
                m
            }
        };
        Ok(mv.map(|m| {
            let (a, b) = self.board.edge(m.edge);
            norm((self.back[a], self.back[b]))
        }))
    }
}

/// K5minus labels: `x` are the three vertices of degree 4, `y` the two of
/// degree 3.
struct K5Roles {
    x: [usize; 3],
    y: [usize; 2],
}

enum Kind {
    K5 { roles: K5Roles, engine: RefCell<Engine> },
    S { plan: SPlan, subs: Vec<Sub> },
}

/// Breaker's transcribed script for one of the minimal collections.
pub struct CatalogScript {
    id: String,
    kind: Kind,
}

/// Script for the named collection, transported onto `board` (which must
/// be isomorphic to it).
pub fn catalog_breaker_script(id: &str, board: &Board) -> Result<CatalogScript> {
    let id = CATALOG_IDS
        .iter()
        .find(|c| c.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownGraph(id.to_string()))?;
    let named = named_collection(id)?;
    let (cb, cn) = (canonical_form(&board.graph)?, canonical_form(&named)?);
    if cb != cn {
        return Err(Error::Precondition(format!("board is not isomorphic to {id}")));
    }
    if *id == "K5minus" {
        let g = &board.graph;
        let x: Vec<usize> = (0..5).filter(|&v| g.degree(v) == 4).collect();
        let y: Vec<usize> = (0..5).filter(|&v| g.degree(v) == 3).collect();
        let roles = K5Roles { x: [x[0], x[1], x[2]], y: [y[0], y[1]] };
        let engine = RefCell::new(Engine::new(board, SolverConfig::default())?);
        return Ok(CatalogScript { id: id.to_string(), kind: Kind::K5 { roles, engine } });
    }
    let mut inv_b = vec![0; board.graph.n()];
    for (v, &c) in cb.labeling.iter().enumerate() {
        inv_b[c as usize] = v;
    }
    let perm: Vec<usize> = cn.labeling.iter().map(|&c| inv_b[c as usize]).collect();
    let plan = s_plan(id)?.mapped(&perm);
    CatalogScript::s_script(id, board, plan)
}

impl CatalogScript {
    fn s_script(id: &str, board: &Board, plan: SPlan) -> Result<CatalogScript> {
        let subs = plan.covers.iter().map(|c| Sub::new(board, c)).collect::<Result<_>>()?;
        Ok(CatalogScript { id: id.to_string(), kind: Kind::S { plan, subs } })
    }

    pub fn plan(&self) -> Option<&SPlan> {
        match &self.kind {
            Kind::S { plan, .. } => Some(plan),
            Kind::K5 { .. } => None,
        }
    }
}

fn maker_arcs(state: &GameState) -> Vec<(usize, usize)> {
    let board = state.board();
    state
        .history()
        .iter()
        .filter_map(|a| match (a.player, a.play) {
            (Player::Maker, Play::Claim(m)) => {
                let (u, v) = board.edge(m.edge);
                Some(if m.orientation == Orientation::Backward { (v, u) } else { (u, v) })
            }
            _ => None,
        })
        .collect()
}

fn free_id(state: &GameState, (u, v): Edge) -> Option<usize> {
    state.board().edge_id(u, v).map(|i| i as usize).filter(|&i| state.edge_status(i) == EdgeStatus::Free)
}

impl CatalogScript {
    fn k5(&self, state: &GameState, roles: &K5Roles, engine: &RefCell<Engine>) -> Result<Play> {
        let arcs = maker_arcs(state);
        let nb = state.breaker_edges().len();
        let in_x = |v: usize| roles.x.contains(&v);
        let Some(&(t1, h1)) = arcs.first() else {
            return Ok(lowest_free(state));
        };
        let cross = in_x(t1) != in_x(h1);
        // v[1..=5] as in the case analysis
        let v = if cross {
            let v1 = if in_x(t1) { t1 } else { h1 };
            let v4 = if in_x(t1) { h1 } else { t1 };
            let rest: Vec<usize> = roles.x.iter().copied().filter(|&w| w != v1).collect();
            let v5 = roles.y.iter().copied().find(|&w| w != v4).unwrap();
            [usize::MAX, v1, rest[0], rest[1], v4, v5]
        } else {
            let v3 = roles.x.iter().copied().find(|&w| w != t1 && w != h1).unwrap();
            [usize::MAX, t1, h1, v3, roles.y[0], roles.y[1]]
        };
        let e = |a: usize, b: usize| norm((v[a], v[b]));
        if nb == 0 {
            let target = if cross { e(1, 2) } else { e(2, 4) };
            if let Some(id) = free_id(state, target) {
                return Ok(claim(id));
            }
        }
        let mut pairing = Pairing::default();
        if !cross && arcs.len() >= 2 {
            let (t2, h2) = arcs[1];
            let label = |w: usize| v.iter().position(|&x| x == w).unwrap();
            let (a, b) = (label(t2), label(h2));
            let (reply, pairs): (Edge, Vec<[Edge; 2]>) = match (a, b) {
                (1, 3) | (3, 2) => (e(2, 5), vec![[e(1, 4), e(3, 4)], [e(1, 5), e(3, 5)]]),
                (1, 4) | (4, 1) | (3, 4) | (4, 3) | (1, 5) | (5, 2) | (2, 3) | (3, 5) => (e(1, 3), vec![]),
                (2, 5) | (5, 3) => (e(1, 5), vec![[e(1, 4), e(3, 4)]]),
                (3, 1) => (e(2, 3), vec![[e(1, 4), e(3, 4)]]),
                (5, 1) => (e(2, 5), vec![[e(1, 4), e(3, 4)]]),
                _ => (e(1, 3), vec![]),
            };
            if nb == 1 {
                if let Some(id) = free_id(state, reply) {
                    return Ok(claim(id));
                }
            }
            pairing = Pairing::new(pairs);
        }
        if let Play::Claim(m) = pairing_reply(state, &pairing) {
            let answered = state.maker_moves().iter().any(|mm| pairing.partner(state.board().edge(mm.edge)) == Some(state.board().edge(m.edge)));
            if answered {
                return Ok(Play::Claim(m));
            }
        }
        Ok(match engine.borrow_mut().winning_move(state, None)? {
            Some(m) => Play::Claim(m),
            None => lowest_free(state),
        })
    }

    fn s(&self, state: &GameState, plan: &SPlan, subs: &[Sub]) -> Result<Play> {
        if state.breaker_edges().is_empty() {
            for a in [plan.a1, plan.a2] {
                if let Some(id) = free_id(state, a) {
                    return Ok(claim(id));
                }
            }
        }
        let last = state.history().iter().rev().find_map(|a| match (a.player, a.play) {
            (Player::Maker, Play::Claim(m)) => Some(state.board().edge(m.edge)),
            _ => None,
        });
        let order: Vec<&Sub> = match last {
            Some(e) => subs.iter().filter(|s| s.contains(e)).chain(subs.iter().filter(|s| !s.contains(e))).collect(),
            None => subs.iter().collect(),
        };
        for sub in order {
            if let Some(e) = sub.reply(state)? {
                if let Some(id) = free_id(state, e) {
                    return Ok(claim(id));
                }
            }
        }
        Ok(lowest_free(state))
    }
}

impl Script for CatalogScript {
    fn name(&self) -> String {
        format!("catalog-{}", self.id)
    }

    fn player(&self) -> Player {
        Player::Breaker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        match &self.kind {
            Kind::K5 { roles, engine } => self.k5(state, roles, engine),
            Kind::S { plan, subs } => self.s(state, plan, subs),
        }
    }

    fn context(&self, state: &GameState) -> u64 {
        match &self.kind {
            Kind::K5 { .. } => {
                let arcs = maker_arcs(state);
                ctx_hash(&arcs[..arcs.len().min(2)])
            }
            Kind::S { .. } => {
                let last = state.history().iter().rev().find_map(|a| match (a.player, a.play) {
                    (Player::Maker, Play::Claim(m)) => Some(m.edge),
                    _ => None,
                });
                ctx_hash(&last)
            }
        }
    }
}

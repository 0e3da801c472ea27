//! AND-OR search over compact positions.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::game::{Board, EdgeStatus, GameState, Move, Orientation, Player, Req};

/// Limits for a search. Exceeding any of them is an error.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Edge cap for boards with oriented goals.
    pub max_oriented_edges: usize,
    pub max_nodes: u64,
    pub max_table: usize,
    /// Reduce root moves by board symmetries.
    pub symmetry: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_oriented_edges: 18, max_nodes: 2_000_000_000, max_table: 40_000_000, symmetry: true }
    }
}

/// Hard limit from the 64-bit edge masks.
pub const MAX_SEARCH_EDGES: usize = 64;

#[derive(Clone, Copy, Debug)]
pub(crate) struct CSet {
    mask: u64,
    fwd: u64,
    bwd: u64,
}

/// A position in mask form. `back` marks Maker edges oriented backward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Pos {
    pub maker: u64,
    pub back: u64,
    pub breaker: u64,
    pub mover: Player,
    pub remaining: u8,
    pub maker_started: bool,
    /// Maker claims still allowed, for depth-limited searches.
    pub limit: u8,
}

pub(crate) const NO_LIMIT: u8 = u8::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct CMove {
    pub edge: u8,
    pub back: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Stats {
    pub nodes: u64,
    pub hits: u64,
}

/// Per-board search context with its transposition table.
pub struct Engine {
    pub(crate) m: usize,
    all: u64,
    sets: Vec<CSet>,
    oriented: bool,
    breaker_bias: u8,
    handicap: u8,
    pub(crate) cfg: SolverConfig,
    table: FxHashMap<(u128, u32), bool>,
    pub(crate) stats: Stats,
    started: Instant,
}

impl Engine {
    pub fn new(board: &Board, cfg: SolverConfig) -> Result<Engine> {
        let m = board.edge_count();
        if m > MAX_SEARCH_EDGES {
            return Err(Error::ResourceCap(format!("board has {m} edges, search limit is {MAX_SEARCH_EDGES}")));
        }
        let oriented = board.goal.is_oriented();
        if oriented && m > cfg.max_oriented_edges {
            return Err(Error::ResourceCap(format!(
                "oriented board has {m} edges, cap is {}",
                cfg.max_oriented_edges
            )));
        }
        let sets = board
            .winning_sets()
            .iter()
            .map(|s| {
                let mut c = CSet { mask: 0, fwd: 0, bwd: 0 };
                for &(e, r) in s {
                    let bit = 1u64 << e;
                    c.mask |= bit;
                    match r {
                        Req::Forward => c.fwd |= bit,
                        Req::Backward => c.bwd |= bit,
                        Req::Any => {}
                    }
                }
                c
            })
            .collect();
        let all = if m == 64 { !0 } else { (1u64 << m) - 1 };
        Ok(Engine {
            m,
            all,
            sets,
            oriented,
            breaker_bias: board.config.breaker_bias.min(64) as u8,
            handicap: board.config.handicap as u8,
            cfg,
            table: FxHashMap::default(),
            stats: Stats::default(),
            started: Instant::now(),
        })
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub(crate) fn table(&self) -> &FxHashMap<(u128, u32), bool> {
        &self.table
    }

    pub(crate) fn table_mut(&mut self) -> &mut FxHashMap<(u128, u32), bool> {
        &mut self.table
    }

    pub(crate) fn reset_clock(&mut self) {
        self.started = Instant::now();
    }

    pub(crate) fn elapsed(&self) -> std::time::Duration {
        self.started.elapsed()
    }

    pub(crate) fn pos_of(&self, st: &GameState, limit: u8) -> Pos {
        let mut p = Pos {
            maker: 0,
            back: 0,
            breaker: 0,
            mover: st.mover(),
            remaining: st.remaining() as u8,
            maker_started: st.maker_turns() > 0,
            limit,
        };
        for (e, s) in st.statuses().iter().enumerate() {
            match s {
                EdgeStatus::Free => {}
                EdgeStatus::Breaker => p.breaker |= 1 << e,
                EdgeStatus::Maker(o) => {
                    p.maker |= 1 << e;
                    if *o == Orientation::Backward {
                        p.back |= 1 << e;
                    }
                }
            }
        }
        p
    }

    pub(crate) fn to_move(&self, mv: CMove, mover: Player) -> Move {
        let o = match (mover, self.oriented, mv.back) {
            (Player::Breaker, _, _) | (Player::Maker, false, _) => Orientation::Undirected,
            (Player::Maker, true, false) => Orientation::Forward,
            (Player::Maker, true, true) => Orientation::Backward,
        };
        Move::new(mv.edge as usize, o)
    }

    #[inline]
    fn alive(&self, s: &CSet, p: &Pos) -> bool {
        s.mask & p.breaker == 0 && s.fwd & p.maker & p.back == 0 && s.bwd & p.maker & !p.back == 0
    }

    pub(crate) fn apply(&self, p: &Pos, mv: CMove) -> Pos {
        let mut q = *p;
        let bit = 1u64 << mv.edge;
        match p.mover {
            Player::Maker => {
                q.maker |= bit;
                if mv.back && self.oriented {
                    q.back |= bit;
                }
                if q.limit != NO_LIMIT {
                    q.limit -= 1;
                }
            }
            Player::Breaker => q.breaker |= bit,
        }
        let free = (self.all & !(q.maker | q.breaker)).count_ones() as u8;
        q.remaining -= 1;
        if q.remaining == 0 || free == 0 {
            match p.mover {
                Player::Maker => {
                    q.mover = Player::Breaker;
                    q.remaining = self.breaker_bias.min(free);
                }
                Player::Breaker => {
                    q.mover = Player::Maker;
                    let extra = if q.maker_started { 0 } else { self.handicap };
                    q.maker_started = true;
                    q.remaining = (1 + extra).min(free);
                }
            }
        }
        q
    }

    /// Whether Maker wins from `p` under perfect play.
    pub(crate) fn maker_wins(&mut self, p: &Pos) -> Result<bool> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.cfg.max_nodes {
            return Err(Error::ResourceCap(format!("node limit {} exceeded", self.cfg.max_nodes)));
        }
        let an = self.analyze(p);
        if let Some(v) = an.decided {
            return Ok(v);
        }
        let key = self.key(p, an.relevant);
        if let Some(&v) = self.table.get(&key) {
            self.stats.hits += 1;
            return Ok(v);
        }
        let moves = self.moves_from(p, &an);
        let mut result = p.mover == Player::Breaker;
        for mv in moves {
            let child = self.apply(p, mv);
            let w = self.maker_wins(&child)?;
            if p.mover == Player::Maker && w {
                result = true;
                break;
            }
            if p.mover == Player::Breaker && !w {
                result = false;
                break;
            }
        }
        if self.table.len() >= self.cfg.max_table {
            return Err(Error::ResourceCap(format!("transposition table limit {} exceeded", self.cfg.max_table)));
        }
        self.table.insert(key, result);
        Ok(result)
    }

    pub(crate) fn analyze(&self, p: &Pos) -> Analysis {
        let free = self.all & !(p.maker | p.breaker);
        let mut relevant = 0u64;
        let mut any_alive = false;
        let mut decided = None;
        let mut threats = 0u64;
        let maker_reach = if p.mover == Player::Maker { p.remaining.min(p.limit) as u32 } else { 0 };
        let next_quota: u32 = if p.maker_started { 1 } else { 1 + self.handicap as u32 };
        for s in &self.sets {
            if !self.alive(s, p) {
                continue;
            }
            let missing_mask = s.mask & !p.maker;
            let missing = missing_mask.count_ones();
            if missing == 0 {
                decided = Some(true);
                break;
            }
            any_alive = true;
            relevant |= s.mask;
            if p.mover == Player::Maker && missing <= maker_reach {
                decided = Some(true);
                break;
            }
            if p.mover == Player::Breaker && next_quota == 1 && missing == 1 && p.limit >= 1 {
                threats |= missing_mask;
            }
        }
        if decided.is_none() {
            if !any_alive || free == 0 || p.limit == 0 {
                decided = Some(false);
            } else if p.mover == Player::Breaker && threats.count_ones() > p.remaining as u32 {
                decided = Some(true);
            }
        }
        Analysis { free, relevant, threats, decided }
    }

    /// Candidate moves in search order. Exact: every omitted move is
    /// dominated by or equivalent to an included one.
    pub(crate) fn moves_from(&self, p: &Pos, an: &Analysis) -> Vec<CMove> {
        let free_rel = an.relevant & an.free;
        let irrelevant = an.free & !an.relevant;
        let mut scored: Vec<(u32, CMove)> = Vec::new();
        match p.mover {
            Player::Breaker => {
                if an.threats != 0 {
                    return vec![CMove { edge: an.threats.trailing_zeros() as u8, back: false }];
                }
                for e in crate::graph::BitIter(free_rel) {
                    let bit = 1u64 << e;
                    let kills = self.sets.iter().filter(|s| s.mask & bit != 0 && self.alive(s, p)).count() as u32;
                    scored.push((kills, CMove { edge: e as u8, back: false }));
                }
                if scored.is_empty() && irrelevant != 0 {
                    scored.push((0, CMove { edge: irrelevant.trailing_zeros() as u8, back: false }));
                }
            }
            Player::Maker => {
                let mut useless = Vec::new();
                for e in crate::graph::BitIter(free_rel) {
                    let bit = 1u64 << e;
                    let (mut f, mut b) = (0u32, 0u32);
                    for s in &self.sets {
                        if s.mask & bit != 0 && self.alive(s, p) {
                            if s.bwd & bit == 0 {
                                f += 1;
                            }
                            if s.fwd & bit == 0 {
                                b += 1;
                            }
                        }
                    }
                    let choices: &[(u32, bool)] = if self.oriented { &[(f, false), (b, true)] } else { &[(f, false)] };
                    for &(score, back) in choices {
                        let mv = CMove { edge: e as u8, back };
                        if score > 0 {
                            scored.push((score, mv));
                        } else {
                            useless.push(mv);
                        }
                    }
                }
                if irrelevant != 0 {
                    scored.push((0, CMove { edge: irrelevant.trailing_zeros() as u8, back: false }));
                } else {
                    scored.extend(useless.into_iter().map(|m| (0, m)));
                }
            }
        }
        scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.edge.cmp(&b.1.edge)).then(a.1.back.cmp(&b.1.back)));
        scored.into_iter().map(|(_, m)| m).collect()
    }

    /// Transposition key: 2 bits per edge (dead, free, Maker forward or
    /// unoriented, Maker backward) restricted to edges of live goal copies,
    /// plus the count of other free edges and the turn ledger.
    fn key(&self, p: &Pos, relevant: u64) -> (u128, u32) {
        let mut code = 0u128;
        for e in crate::graph::BitIter(relevant) {
            let bit = 1u64 << e;
            let c: u128 = if p.maker & bit == 0 {
                1
            } else if p.back & bit != 0 {
                3
            } else {
                2
            };
            code |= c << (2 * e);
        }
        let spare = (self.all & !(p.maker | p.breaker) & !relevant).count_ones();
        let ledger = (p.mover == Player::Maker) as u32
            | (p.remaining as u32) << 1
            | (p.maker_started as u32) << 8
            | (p.limit as u32) << 9
            | spare << 17;
        (code, ledger)
    }
}

pub(crate) struct Analysis {
    pub free: u64,
    pub relevant: u64,
    pub threats: u64,
    pub decided: Option<bool>,
}

//! Exact perfect-play solving, strategy extraction and script duels.

mod cache;
mod duel;
mod mindensity;
mod search;
mod tree;

pub use cache::{board_fingerprint, load_cache, save_cache, CACHE_VERSION};
pub use duel::{duel, transcript, DuelOptions, DuelOutcome, Script, TranscriptEntry};
pub use mindensity::{
    all_triangles_cyclic_orientation, min_density_maker_win_search, MinDensityReport, SearchConstraints, WinClass,
};
pub use search::{Engine, SolverConfig, Stats, MAX_SEARCH_EDGES};
pub use tree::{extract_strategy, StrategyTree};

use std::time::Duration;

use serde::Serialize;

use crate::error::Result;
use crate::game::{GameState, Move, Player, Status};
use crate::graph::{automorphism_generators, MAX_CANON_VERTICES};
use search::{CMove, Pos, NO_LIMIT};

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub winner: Player,
    /// A winning move for the player to move, when that player wins and a
    /// move is available.
    pub best_move: Option<Move>,
    pub nodes_visited: u64,
    pub table_hits: u64,
    #[serde(serialize_with = "ser_secs")]
    pub elapsed: Duration,
}

fn ser_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Solves `state` exactly with default limits.
pub fn solve(state: &GameState) -> Result<SolveResult> {
    solve_with(state, SolverConfig::default())
}

pub fn solve_with(state: &GameState, cfg: SolverConfig) -> Result<SolveResult> {
    let mut engine = Engine::new(state.board(), cfg)?;
    engine.solve_state(state)
}

/// Winner only.
pub fn winner(state: &GameState) -> Result<Player> {
    Ok(solve(state)?.winner)
}

impl Engine {
    /// Solves a position, reusing this engine's table across calls.
    pub fn solve_state(&mut self, state: &GameState) -> Result<SolveResult> {
        self.reset_clock();
        self.stats = Stats::default();
        let (winner, best) = self.root(state, NO_LIMIT)?;
        Ok(SolveResult {
            winner,
            best_move: best,
            nodes_visited: self.stats.nodes,
            table_hits: self.stats.hits,
            elapsed: self.elapsed(),
        })
    }

    /// Whether Maker can win using at most `maker_moves` more claims.
    pub fn maker_wins_within(&mut self, state: &GameState, maker_moves: usize) -> Result<bool> {
        let limit = maker_moves.min(NO_LIMIT as usize - 1) as u8;
        let p = self.pos_of(state, limit);
        self.maker_wins(&p)
    }

    /// A move for the player to move that keeps their win (within the
    /// Maker move budget when given), or `None` if they do not win.
    pub fn winning_move(&mut self, state: &GameState, maker_moves: Option<usize>) -> Result<Option<Move>> {
        let limit = maker_moves.map_or(NO_LIMIT, |l| l.min(NO_LIMIT as usize - 1) as u8);
        let (w, mv) = self.root_plain(state, limit)?;
        Ok(if w == state.mover() { mv } else { None })
    }

    fn root(&mut self, state: &GameState, limit: u8) -> Result<(Player, Option<Move>)> {
        match state.status() {
            Status::MakerWon => return Ok((Player::Maker, None)),
            Status::BreakerWonEarly | Status::BreakerWonFull => return Ok((Player::Breaker, None)),
            Status::Ongoing => {}
        }
        let p = self.pos_of(state, limit);
        let an = self.analyze(&p);
        if let Some(v) = an.decided {
            let w = if v { Player::Maker } else { Player::Breaker };
            let mv = if w == state.mover() { self.first_winning(&p, None)? } else { None };
            return Ok((w, mv));
        }
        let mut moves = self.moves_from(&p, &an);
        if self.cfg.symmetry {
            moves = orbit_representatives(self, state, moves);
        }
        let best = self.first_winning(&p, Some(moves))?;
        let w = if best.is_some() { state.mover() } else { state.mover().other() };
        Ok((w, best))
    }

    fn root_plain(&mut self, state: &GameState, limit: u8) -> Result<(Player, Option<Move>)> {
        if state.status() != Status::Ongoing {
            return Ok((state.status().winner().expect("terminal"), None));
        }
        let p = self.pos_of(state, limit);
        let best = self.first_winning(&p, None)?;
        let w = if best.is_some() { state.mover() } else { state.mover().other() };
        Ok((w, best))
    }

    /// First move (in search order) after which the mover still wins.
    fn first_winning(&mut self, p: &Pos, moves: Option<Vec<CMove>>) -> Result<Option<Move>> {
        let moves = match moves {
            Some(m) => m,
            None => {
                let an = self.analyze(p);
                let mut ms = self.moves_from(p, &an);
                if ms.is_empty() {
                    // decided positions: any legal move keeps the result
                    ms = all_moves(self, p);
                }
                ms
            }
        };
        for mv in moves {
            let child = self.apply(p, mv);
            let maker = self.maker_wins(&child)?;
            if maker == (p.mover == Player::Maker) {
                return Ok(Some(self.to_move(mv, p.mover)));
            }
        }
        Ok(None)
    }
}

fn all_moves(engine: &Engine, p: &Pos) -> Vec<CMove> {
    let m = engine.m;
    let mut out = Vec::new();
    for e in 0..m {
        let bit = 1u64 << e;
        if (p.maker | p.breaker) & bit == 0 {
            out.push(CMove { edge: e as u8, back: false });
            if p.mover == Player::Maker {
                out.push(CMove { edge: e as u8, back: true });
            }
        }
    }
    out
}

/// Keeps one move per orbit of the position's symmetry group (board
/// automorphisms fixing the position, plus global arc reversal when the goal
/// copies allow it and Maker owns nothing yet).
fn orbit_representatives(engine: &Engine, state: &GameState, moves: Vec<CMove>) -> Vec<CMove> {
    let board = state.board();
    let g = &board.graph;
    if g.n() > MAX_CANON_VERTICES || moves.len() < 2 {
        return moves;
    }
    let Ok(gens) = automorphism_generators(g) else {
        return moves;
    };
    let mut maps: Vec<(Vec<usize>, bool)> = gens
        .into_iter()
        .filter(|perm| fixes_position(state, perm, false) && board.preserves_goal(perm))
        .map(|perm| (perm, false))
        .collect();
    if board.reversal_symmetric() && state.maker_moves().is_empty() {
        maps.push(((0..g.n()).collect(), true));
    }
    if maps.is_empty() {
        return moves;
    }
    let idx = |mv: Move| mv.edge * 3 + orient_index(mv);
    let all: Vec<Move> = moves.iter().map(|&m| engine.to_move(m, state.mover())).collect();
    let size = board.edge_count() * 3;
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // orbits over every legal move, so representatives are well defined
    let legal = state.legal_moves().unwrap_or_default();
    for (perm, rev) in &maps {
        for &mv in &legal {
            let mut img = board.map_move(mv, perm);
            if *rev {
                img.orientation = img.orientation.reversed();
            }
            let (a, b) = (find(&mut parent, idx(mv)), find(&mut parent, idx(img)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    moves
        .into_iter()
        .zip(all)
        .filter(|(_, mv)| seen.insert(find(&mut parent, idx(*mv))))
        .map(|(c, _)| c)
        .collect()
}

fn orient_index(mv: Move) -> usize {
    match mv.orientation {
        crate::game::Orientation::Undirected => 0,
        crate::game::Orientation::Forward => 1,
        crate::game::Orientation::Backward => 2,
    }
}

fn fixes_position(state: &GameState, perm: &[usize], _rev: bool) -> bool {
    let board = state.board();
    state.statuses().iter().enumerate().all(|(e, &s)| {
        use crate::game::EdgeStatus;
        let img = board.map_move(Move::plain(e), perm).edge;
        match s {
            EdgeStatus::Free | EdgeStatus::Breaker => state.edge_status(img) == s,
            EdgeStatus::Maker(o) => {
                let mapped = board.map_move(Move::new(e, o), perm);
                state.edge_status(img) == EdgeStatus::Maker(mapped.orientation)
            }
        }
    })
}

#[cfg(test)]
mod tests;

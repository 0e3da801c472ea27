//! Rules of (a:b) Maker-Breaker games on graph edges, with optional
//! orientation of Maker's edges and a first-turn handicap.

mod goal;

pub use goal::{Goal, Tournament};

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "Maker",
            Player::Breaker => "Breaker",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub maker_bias: usize,
    pub breaker_bias: usize,
    /// Extra claims in Maker's first turn (0 or 1).
    pub handicap: usize,
    pub maker_moves_first: bool,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig { maker_bias: 1, breaker_bias: 1, handicap: 0, maker_moves_first: true }
    }
}

impl GameConfig {
    pub fn with_handicap() -> Self {
        GameConfig { handicap: 1, ..Default::default() }
    }

    pub fn biased(b: usize) -> Self {
        GameConfig { breaker_bias: b, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.maker_bias != 1 {
            return Err(Error::InvalidConfig(format!("maker bias {} is not supported", self.maker_bias)));
        }
        if self.breaker_bias == 0 {
            return Err(Error::InvalidConfig("breaker bias must be at least 1".into()));
        }
        if self.handicap > 1 {
            return Err(Error::InvalidConfig(format!("handicap {} not in 0..=1", self.handicap)));
        }
        Ok(())
    }
}

/// Direction of a Maker edge. `Forward` runs from the lower to the higher
/// vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Undirected,
    Forward,
    Backward,
}

impl Orientation {
    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
            Orientation::Undirected => Orientation::Undirected,
        }
    }

    /// Orientation of the arc `tail -> head`.
    pub fn of_arc(tail: usize, head: usize) -> Orientation {
        if tail < head {
            Orientation::Forward
        } else {
            Orientation::Backward
        }
    }
}

/// What a winning set needs from one of its edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Req {
    Any,
    Forward,
    Backward,
}

impl Req {
    pub fn accepts(self, o: Orientation) -> bool {
        match self {
            Req::Any => true,
            Req::Forward => o == Orientation::Forward,
            Req::Backward => o == Orientation::Backward,
        }
    }

    fn reversed(self) -> Req {
        match self {
            Req::Forward => Req::Backward,
            Req::Backward => Req::Forward,
            Req::Any => Req::Any,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub edge: usize,
    pub orientation: Orientation,
}

impl Move {
    pub fn new(edge: usize, orientation: Orientation) -> Self {
        Move { edge, orientation }
    }

    pub fn plain(edge: usize) -> Self {
        Move { edge, orientation: Orientation::Undirected }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeStatus {
    Free,
    Breaker,
    Maker(Orientation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    MakerWon,
    /// No goal copy can still be completed; free edges remain.
    BreakerWonEarly,
    /// Board exhausted without a Maker win.
    BreakerWonFull,
    Ongoing,
}

impl Status {
    pub fn winner(self) -> Option<Player> {
        match self {
            Status::MakerWon => Some(Player::Maker),
            Status::BreakerWonEarly | Status::BreakerWonFull => Some(Player::Breaker),
            Status::Ongoing => None,
        }
    }
}

/// Immutable description of a game: the board, its goal copies and rules.
#[derive(Debug)]
pub struct Board {
    pub graph: Graph,
    pub goal: Goal,
    pub config: GameConfig,
    edges: Vec<(usize, usize)>,
    index: Vec<u32>,
    sets: Vec<Vec<(u32, Req)>>,
    incidence: Vec<Vec<(u32, Req)>>,
}

const NO_EDGE: u32 = u32::MAX;

impl Board {
    pub fn new(graph: Graph, goal: Goal, config: GameConfig) -> Result<Arc<Board>> {
        goal.validate()?;
        config.validate()?;
        if matches!(goal, Goal::GoodClique(_)) && graph.partition().is_none() {
            return Err(Error::InvalidGoal("good-clique goal needs a partitioned board".into()));
        }
        let n = graph.n();
        let edges = graph.edges();
        let mut index = vec![NO_EDGE; n * n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            index[u * n + v] = i as u32;
            index[v * n + u] = i as u32;
        }
        let mut board = Board { graph, goal, config, edges, index, sets: Vec::new(), incidence: Vec::new() };
        board.sets = board.build_sets();
        board.incidence = vec![Vec::new(); board.edges.len()];
        for (s, set) in board.sets.iter().enumerate() {
            for &(e, r) in set {
                board.incidence[e as usize].push((s as u32, r));
            }
        }
        Ok(Arc::new(board))
    }

    fn build_sets(&self) -> Vec<Vec<(u32, Req)>> {
        let k = self.goal.k();
        let cliques = self.graph.k_cliques(k);
        let mut out = Vec::new();
        match &self.goal {
            Goal::Clique(_) => {
                for c in cliques {
                    out.push(self.clique_edges(&c).into_iter().map(|e| (e, Req::Any)).collect());
                }
            }
            Goal::GoodClique(_) => {
                let part = self.graph.partition().expect("checked");
                for c in cliques {
                    let classes: HashSet<u16> = c.iter().map(|&v| part[v]).collect();
                    if classes.len() == k {
                        out.push(self.clique_edges(&c).into_iter().map(|e| (e, Req::Any)).collect());
                    }
                }
            }
            Goal::Tournament(t) => {
                let arcs = t.arcs();
                for c in cliques {
                    let mut seen: HashSet<Vec<(u32, Req)>> = HashSet::new();
                    for perm in permutations(k) {
                        let mut set: Vec<(u32, Req)> = arcs
                            .iter()
                            .map(|&(i, j)| {
                                let (a, b) = (c[perm[i]], c[perm[j]]);
                                let req = if a < b { Req::Forward } else { Req::Backward };
                                (self.edge_id(a, b).expect("clique edge"), req)
                            })
                            .collect();
                        set.sort_unstable();
                        if seen.insert(set.clone()) {
                            out.push(set);
                        }
                    }
                }
            }
        }
        out
    }

    fn clique_edges(&self, c: &[usize]) -> Vec<u32> {
        let mut es = Vec::new();
        for (i, &u) in c.iter().enumerate() {
            for &v in &c[i + 1..] {
                es.push(self.edge_id(u, v).expect("clique edge"));
            }
        }
        es.sort_unstable();
        es
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<u32> {
        let n = self.graph.n();
        if u >= n || v >= n {
            return None;
        }
        let id = self.index[u * n + v];
        (id != NO_EDGE).then_some(id)
    }

    /// Move claiming the arc `tail -> head`.
    pub fn arc(&self, tail: usize, head: usize) -> Option<Move> {
        self.edge_id(tail, head).map(|e| Move::new(e as usize, Orientation::of_arc(tail, head)))
    }

    /// Goal copies as lists of `(edge, requirement)`.
    pub fn winning_sets(&self) -> &[Vec<(u32, Req)>] {
        &self.sets
    }

    pub fn sets_through(&self, edge: usize) -> &[(u32, Req)] {
        &self.incidence[edge]
    }

    /// True when reversing every arc maps the goal copies onto themselves.
    pub fn reversal_symmetric(&self) -> bool {
        if !self.goal.is_oriented() {
            return false;
        }
        let all: HashSet<&Vec<(u32, Req)>> = self.sets.iter().collect();
        self.sets.iter().all(|s| {
            let mut r: Vec<(u32, Req)> = s.iter().map(|&(e, q)| (e, q.reversed())).collect();
            r.sort_unstable();
            all.contains(&r)
        })
    }

    /// Whether a vertex permutation maps the goal copies onto themselves.
    pub fn preserves_goal(&self, perm: &[usize]) -> bool {
        let all: HashSet<&Vec<(u32, Req)>> = self.sets.iter().collect();
        self.sets.iter().all(|s| match self.map_set(s, perm) {
            Some(m) => all.contains(&m),
            None => false,
        })
    }

    fn map_set(&self, set: &[(u32, Req)], perm: &[usize]) -> Option<Vec<(u32, Req)>> {
        let mut out = Vec::with_capacity(set.len());
        for &(e, r) in set {
            let (u, v) = self.edges[e as usize];
            let (a, b) = (perm[u], perm[v]);
            let id = self.edge_id(a, b)?;
            let flip = a > b;
            out.push((id, if flip { r.reversed() } else { r }));
        }
        out.sort_unstable();
        Some(out)
    }

    /// Image of a move under a vertex permutation that is a board
    /// automorphism.
    pub fn map_move(&self, mv: Move, perm: &[usize]) -> Move {
        let (u, v) = self.edges[mv.edge];
        let (a, b) = (perm[u], perm[v]);
        let id = self.edge_id(a, b).expect("automorphism") as usize;
        let o = if a > b { mv.orientation.reversed() } else { mv.orientation };
        Move::new(id, o)
    }

    pub fn describe_move(&self, mv: Move) -> String {
        let (u, v) = self.edges[mv.edge];
        match mv.orientation {
            Orientation::Undirected => format!("{u}-{v}"),
            Orientation::Forward => format!("{u}->{v}"),
            Orientation::Backward => format!("{v}->{u}"),
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    fn rec(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(p, i + 1, out);
            p.swap(i, j);
        }
    }
    rec(&mut p, 0, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Play {
    Claim(Move),
    /// A claim forfeited without taking an edge.
    Skip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Turn {
    mover: Player,
    remaining: usize,
    maker_turns: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    pub player: Player,
    pub play: Play,
    prev: Turn,
}

/// A position together with the move history that produced it.
#[derive(Clone)]
pub struct GameState {
    board: Arc<Board>,
    status: Vec<EdgeStatus>,
    owned: Vec<u8>,
    killed: Vec<u8>,
    alive: usize,
    won: usize,
    free: usize,
    turn: Turn,
    history: Vec<Action>,
}

impl GameState {
    pub fn new(board: Arc<Board>) -> GameState {
        let m = board.edge_count();
        let sets = board.sets.len();
        let cfg = board.config;
        let turn = if cfg.maker_moves_first {
            Turn { mover: Player::Maker, remaining: (cfg.maker_bias + cfg.handicap).min(m), maker_turns: 1 }
        } else {
            Turn { mover: Player::Breaker, remaining: cfg.breaker_bias.min(m), maker_turns: 0 }
        };
        GameState {
            board,
            status: vec![EdgeStatus::Free; m],
            owned: vec![0; sets],
            killed: vec![0; sets],
            alive: sets,
            won: 0,
            free: m,
            turn,
            history: Vec::new(),
        }
    }

    pub fn board(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn mover(&self) -> Player {
        self.turn.mover
    }

    /// Claims left in the current turn.
    pub fn remaining(&self) -> usize {
        self.turn.remaining
    }

    /// Number of Maker turns begun so far.
    pub fn maker_turns(&self) -> usize {
        self.turn.maker_turns
    }

    pub fn history(&self) -> &[Action] {
        &self.history
    }

    pub fn edge_status(&self, e: usize) -> EdgeStatus {
        self.status[e]
    }

    pub fn statuses(&self) -> &[EdgeStatus] {
        &self.status
    }

    pub fn free_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.status.iter().enumerate().filter(|(_, s)| **s == EdgeStatus::Free).map(|(e, _)| e)
    }

    pub fn free_count(&self) -> usize {
        self.free
    }

    pub fn alive_sets(&self) -> usize {
        self.alive
    }

    pub fn is_alive(&self, set: usize) -> bool {
        self.killed[set] == 0
    }

    /// Maker-owned matching edges of a goal copy.
    pub fn owned_in(&self, set: usize) -> usize {
        self.owned[set] as usize
    }

    pub fn maker_moves(&self) -> Vec<Move> {
        self.history
            .iter()
            .filter_map(|a| match (a.player, a.play) {
                (Player::Maker, Play::Claim(m)) => Some(m),
                _ => None,
            })
            .collect()
    }

    pub fn breaker_edges(&self) -> Vec<usize> {
        self.history
            .iter()
            .filter_map(|a| match (a.player, a.play) {
                (Player::Breaker, Play::Claim(m)) => Some(m.edge),
                _ => None,
            })
            .collect()
    }

    pub fn status(&self) -> Status {
        if self.won > 0 {
            Status::MakerWon
        } else if self.free == 0 {
            Status::BreakerWonFull
        } else if self.alive == 0 {
            Status::BreakerWonEarly
        } else {
            Status::Ongoing
        }
    }

    /// No further moves are possible: Maker has won or the board is full.
    pub fn is_over(&self) -> bool {
        self.won > 0 || self.free == 0
    }

    pub fn legal_moves(&self) -> Result<Vec<Move>> {
        if self.is_over() {
            return Err(Error::GameOver);
        }
        let oriented = self.turn.mover == Player::Maker && self.board.goal.is_oriented();
        let mut out = Vec::with_capacity(self.free * if oriented { 2 } else { 1 });
        for e in self.free_edges() {
            if oriented {
                out.push(Move::new(e, Orientation::Forward));
                out.push(Move::new(e, Orientation::Backward));
            } else {
                out.push(Move::plain(e));
            }
        }
        Ok(out)
    }

    pub fn check_move(&self, mv: Move) -> Result<()> {
        if self.is_over() {
            return Err(Error::GameOver);
        }
        if mv.edge >= self.status.len() {
            return Err(Error::IllegalMove(format!("edge id {} out of range", mv.edge)));
        }
        if self.status[mv.edge] != EdgeStatus::Free {
            return Err(Error::IllegalMove(format!(
                "edge {} is already claimed",
                self.board.describe_move(Move::plain(mv.edge))
            )));
        }
        match (self.turn.mover, mv.orientation, self.board.goal.is_oriented()) {
            (Player::Maker, Orientation::Undirected, true) => {
                Err(Error::IllegalMove("tournament goals need an orientation".into()))
            }
            (Player::Breaker, o, _) if o != Orientation::Undirected => {
                Err(Error::IllegalMove("Breaker moves carry no orientation".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&mut self, mv: Move) -> Result<()> {
        self.check_move(mv)?;
        let prev = self.turn;
        let player = self.turn.mover;
        match player {
            Player::Maker => {
                self.status[mv.edge] = EdgeStatus::Maker(mv.orientation);
                for &(s, r) in &self.board.incidence[mv.edge] {
                    let s = s as usize;
                    if r.accepts(mv.orientation) {
                        self.owned[s] += 1;
                        if self.owned[s] as usize == self.board.sets[s].len() && self.killed[s] == 0 {
                            self.won += 1;
                        }
                    } else {
                        if self.killed[s] == 0 {
                            self.alive -= 1;
                        }
                        self.killed[s] += 1;
                    }
                }
            }
            Player::Breaker => {
                self.status[mv.edge] = EdgeStatus::Breaker;
                for &(s, _) in &self.board.incidence[mv.edge] {
                    let s = s as usize;
                    if self.killed[s] == 0 {
                        self.alive -= 1;
                    }
                    self.killed[s] += 1;
                }
            }
        }
        self.free -= 1;
        self.history.push(Action { player, play: Play::Claim(mv), prev });
        self.advance();
        Ok(())
    }

    /// Forfeits one claim of the current turn.
    pub fn skip(&mut self) -> Result<()> {
        if self.is_over() {
            return Err(Error::GameOver);
        }
        let prev = self.turn;
        self.history.push(Action { player: prev.mover, play: Play::Skip, prev });
        self.advance();
        Ok(())
    }

    pub fn play(&mut self, play: Play) -> Result<()> {
        match play {
            Play::Claim(m) => self.apply(m),
            Play::Skip => self.skip(),
        }
    }

    fn advance(&mut self) {
        self.turn.remaining -= 1;
        if self.turn.remaining > 0 && self.free > 0 {
            return;
        }
        let cfg = self.board.config;
        match self.turn.mover {
            Player::Maker => {
                self.turn.mover = Player::Breaker;
                self.turn.remaining = cfg.breaker_bias.min(self.free);
            }
            Player::Breaker => {
                self.turn.mover = Player::Maker;
                self.turn.maker_turns += 1;
                let extra = if self.turn.maker_turns == 1 { cfg.handicap } else { 0 };
                self.turn.remaining = (cfg.maker_bias + extra).min(self.free);
            }
        }
    }

    /// Reverts the last action. Returns it, or `None` at the start.
    pub fn undo(&mut self) -> Option<Action> {
        let action = self.history.pop()?;
        self.turn = action.prev;
        if let Play::Claim(mv) = action.play {
            match action.player {
                Player::Maker => {
                    for &(s, r) in &self.board.incidence[mv.edge] {
                        let s = s as usize;
                        if r.accepts(mv.orientation) {
                            if self.owned[s] as usize == self.board.sets[s].len() && self.killed[s] == 0 {
                                self.won -= 1;
                            }
                            self.owned[s] -= 1;
                        } else {
                            self.killed[s] -= 1;
                            if self.killed[s] == 0 {
                                self.alive += 1;
                            }
                        }
                    }
                }
                Player::Breaker => {
                    for &(s, _) in &self.board.incidence[mv.edge] {
                        let s = s as usize;
                        self.killed[s] -= 1;
                        if self.killed[s] == 0 {
                            self.alive += 1;
                        }
                    }
                }
            }
            self.status[mv.edge] = EdgeStatus::Free;
            self.free += 1;
        }
        Some(action)
    }

    /// Hex string of 2-bit edge codes (two edges per digit, first edge in
    /// the high bits) followed by the turn ledger, e.g. `"a4/B1"`.
    pub fn code(&self) -> String {
        let mut s = String::with_capacity(self.status.len() / 2 + 6);
        for pair in self.status.chunks(2) {
            let hi = edge_code(pair[0]);
            let lo = pair.get(1).map_or(0, |&p| edge_code(p));
            s.push(char::from_digit((hi << 2 | lo) as u32, 16).unwrap());
        }
        let who = match self.turn.mover {
            Player::Maker => 'M',
            Player::Breaker => 'B',
        };
        s.push('/');
        s.push(who);
        s.push_str(&self.turn.remaining.to_string());
        if self.turn.maker_turns == 0 && self.board.config.handicap > 0 {
            s.push('h');
        }
        s
    }

    /// Replays this game's claims on another board through a vertex map.
    /// Claims whose edge has no image become skips; the turn structure is
    /// that of the target board's rules.
    pub fn project(&self, target: Arc<Board>, vmap: &[Option<usize>]) -> Result<GameState> {
        let mut st = GameState::new(target);
        for a in &self.history {
            if st.is_over() {
                break;
            }
            if st.mover() != a.player {
                return Err(Error::Precondition("projected turn order diverged".into()));
            }
            let mapped = match a.play {
                Play::Claim(mv) => {
                    let (u, v) = self.board.edges[mv.edge];
                    match (vmap.get(u).copied().flatten(), vmap.get(v).copied().flatten()) {
                        (Some(a2), Some(b2)) => st.board.edge_id(a2, b2).map(|id| {
                            let o = match mv.orientation {
                                Orientation::Undirected => Orientation::Undirected,
                                o if (a2 > b2) => o.reversed(),
                                o => o,
                            };
                            Move::new(id as usize, o)
                        }),
                        _ => None,
                    }
                }
                Play::Skip => None,
            };
            match mapped {
                Some(mv) if st.status[mv.edge] == EdgeStatus::Free => {
                    let mv = if a.player == Player::Breaker || !st.board.goal.is_oriented() {
                        Move::new(mv.edge, if a.player == Player::Breaker { Orientation::Undirected } else { mv.orientation })
                    } else {
                        mv
                    };
                    st.apply(mv)?
                }
                _ => st.skip()?,
            }
        }
        Ok(st)
    }

    /// A position on `board` where the given edges are claimed and `mover`
    /// has `remaining` claims. Used for subgame analysis; the history is
    /// synthetic (Maker and Breaker claims interleaved with skips).
    pub fn from_position(
        board: Arc<Board>,
        maker: &[Move],
        breaker: &[usize],
        mover: Player,
        remaining: usize,
    ) -> Result<GameState> {
        let mut st = GameState::new(board);
        let mut mk = maker.iter();
        let mut br = breaker.iter();
        loop {
            let (m_left, b_left) = (mk.len(), br.len());
            if m_left == 0 && b_left == 0 && st.mover() == mover && (st.remaining() == remaining || st.free == 0) {
                break;
            }
            if st.free == 0 {
                break;
            }
            match st.mover() {
                Player::Maker => match mk.next() {
                    Some(&m) => st.apply(m)?,
                    None => st.skip()?,
                },
                Player::Breaker => match br.next() {
                    Some(&e) => st.apply(Move::plain(e))?,
                    None => st.skip()?,
                },
            }
            if st.history.len() > 4 * (maker.len() + breaker.len()) + 8 {
                return Err(Error::Precondition("cannot reach requested turn ledger".into()));
            }
        }
        Ok(st)
    }
}

fn edge_code(s: EdgeStatus) -> u8 {
    match s {
        EdgeStatus::Free => 0,
        EdgeStatus::Breaker => 1,
        EdgeStatus::Maker(Orientation::Backward) => 3,
        EdgeStatus::Maker(_) => 2,
    }
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GameState({}, {:?})", self.code(), self.status())
    }
}

/// Starts a game.
pub fn new_game(board: Graph, goal: Goal, config: GameConfig) -> Result<GameState> {
    Ok(GameState::new(Board::new(board, goal, config)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn game(name: &str, goal: Goal, cfg: GameConfig) -> GameState {
        new_game(named(name).unwrap(), goal, cfg).unwrap()
    }

    #[test]
    fn fresh_games() {
        let st = game("K:3", Goal::Clique(3), GameConfig::default());
        assert_eq!(st.free_count(), 3);
        assert_eq!((st.mover(), st.remaining()), (Player::Maker, 1));
        let st = game("K:4", Goal::tc(), GameConfig::with_handicap());
        assert_eq!(st.remaining(), 2);
        assert!(new_game(named("K:5").unwrap(), Goal::GoodClique(3), GameConfig::default()).is_err());
    }

    #[test]
    fn move_lists() {
        assert_eq!(game("K:3", Goal::tc(), GameConfig::default()).legal_moves().unwrap().len(), 6);
        assert_eq!(game("K:3", Goal::Clique(3), GameConfig::default()).legal_moves().unwrap().len(), 3);
        let mut st = game("K:3", Goal::Clique(3), GameConfig::default());
        st.apply(Move::plain(0)).unwrap();
        let b = st.legal_moves().unwrap();
        assert!(b.iter().all(|m| m.orientation == Orientation::Undirected));
        st.apply(Move::plain(1)).unwrap();
        st.apply(Move::plain(2)).unwrap();
        assert!(matches!(st.legal_moves(), Err(Error::GameOver)));
    }

    #[test]
    fn turn_schedule_with_bias() {
        let mut st = game("K:4", Goal::Clique(3), GameConfig::biased(2));
        st.apply(Move::plain(0)).unwrap();
        assert_eq!((st.mover(), st.remaining()), (Player::Breaker, 2));
        st.apply(Move::plain(1)).unwrap();
        assert_eq!((st.mover(), st.remaining()), (Player::Breaker, 1));
        st.apply(Move::plain(2)).unwrap();
        assert_eq!(st.mover(), Player::Maker);
        assert!(st.apply(Move::plain(1)).is_err());
    }

    #[test]
    fn breaker_takes_what_is_left() {
        let mut st = game("K:3", Goal::Clique(3), GameConfig::biased(5));
        st.apply(Move::plain(0)).unwrap();
        assert_eq!(st.remaining(), 2);
    }

    #[test]
    fn cyclic_and_acyclic_detection() {
        let arcs = [(0, 1), (1, 2), (2, 0)];
        let mut tc = new_game(named("K:3").unwrap(), Goal::tc(), GameConfig::default()).unwrap();
        let mut ta = new_game(named("K:3").unwrap(), Goal::ta(), GameConfig::default()).unwrap();
        for (i, &(a, b)) in arcs.iter().enumerate() {
            let mv = tc.board().arc(a, b).unwrap();
            tc.apply(mv).unwrap();
            ta.apply(mv).unwrap();
            if i < 2 {
                tc.skip().unwrap();
                ta.skip().unwrap();
            }
        }
        assert_eq!(tc.status(), Status::MakerWon);
        assert_ne!(ta.status(), Status::MakerWon);
    }

    #[test]
    fn early_breaker_win() {
        let mut st = game("K:4", Goal::Clique(3), GameConfig::default());
        // edges of K4: 01 02 03 12 13 23; {01, 23} meet every triangle
        st.skip().unwrap();
        st.apply(Move::plain(0)).unwrap();
        st.skip().unwrap();
        st.apply(Move::plain(5)).unwrap();
        assert_eq!(st.status(), Status::BreakerWonEarly);
    }

    #[test]
    fn undo_restores_code() {
        let mut st = game("W:4", Goal::tc(), GameConfig::with_handicap());
        let start = st.code();
        let moves = [Move::new(0, Orientation::Forward), Move::new(3, Orientation::Backward), Move::plain(5)];
        let mut codes = vec![start.clone()];
        for m in moves {
            st.apply(m).unwrap();
            codes.push(st.code());
        }
        for c in codes.iter().rev().skip(1) {
            st.undo();
            assert_eq!(&st.code(), c);
        }
        assert_eq!(st.code(), start);
    }

    #[test]
    fn code_format() {
        let mut st = game("K:3", Goal::tc(), GameConfig::default());
        st.apply(Move::new(0, Orientation::Backward)).unwrap();
        st.apply(Move::plain(1)).unwrap();
        // 11 01 | 00 00
        assert_eq!(st.code(), "d0/M1");
    }

    #[test]
    fn tournament_copies_per_triangle() {
        let b = Board::new(named("K:3").unwrap(), Goal::tc(), GameConfig::default()).unwrap();
        assert_eq!(b.winning_sets().len(), 2);
        let b = Board::new(named("K:3").unwrap(), Goal::ta(), GameConfig::default()).unwrap();
        assert_eq!(b.winning_sets().len(), 6);
        assert!(b.reversal_symmetric());
    }

    #[test]
    fn projection_drops_unmapped_claims() {
        let mut st = game("K:4", Goal::Clique(3), GameConfig::default());
        st.apply(Move::plain(2)).unwrap(); // 0-3
        st.apply(Move::plain(0)).unwrap(); // 0-1
        let sub = Board::new(named("K:3").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
        let p = st.project(sub, &[Some(0), Some(1), Some(2), None]).unwrap();
        assert_eq!(p.edge_status(0), EdgeStatus::Breaker);
        assert_eq!(p.free_count(), 2);
        assert_eq!(p.mover(), Player::Maker);
    }
}

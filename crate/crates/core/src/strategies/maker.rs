use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Board, EdgeStatus, GameConfig, GameState, Goal, Move, Orientation, Play, Player, Tournament};
use crate::graph::Graph;
use crate::solver::Script;

/// Replays `state`'s claims on `target` through `vmap`, Maker's claims
/// without orientation. Unmapped or taken edges become skips.
pub(crate) fn replay_plain(state: &GameState, target: Arc<Board>, vmap: &[Option<usize>]) -> Result<GameState> {
    let src = state.board();
    let mut st = GameState::new(target);
    for a in state.history() {
        if st.is_over() {
            break;
        }
        if st.mover() != a.player {
            return Err(Error::Precondition("replayed turn order diverged".into()));
        }
        let id = match a.play {
            Play::Claim(m) => {
                let (u, v) = src.edge(m.edge);
                match (vmap[u], vmap[v]) {
                    (Some(x), Some(y)) => st.board().edge_id(x, y).map(|i| i as usize),
                    _ => None,
                }
            }
            Play::Skip => None,
        };
        match id {
            Some(e) if st.edge_status(e) == EdgeStatus::Free => st.apply(Move::plain(e))?,
            _ => st.skip()?,
        }
    }
    Ok(st)
}

/// Vertex classes identified with the vertices of a goal tournament.
#[derive(Clone, Debug)]
pub struct IdentificationMap {
    pub classes: Vec<u16>,
    pub tournament: Tournament,
}

impl IdentificationMap {
    /// `k` near-equal contiguous classes on `n` vertices.
    pub fn balanced(n: usize, tournament: Tournament) -> Result<IdentificationMap> {
        let k = tournament.k();
        if n < k {
            return Err(Error::InvalidParameters(format!("{n} vertices cannot host {k} classes")));
        }
        Ok(IdentificationMap { classes: crate::graph::turan_classes(n, k), tournament })
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.tournament.k();
        let mut sizes = vec![0usize; k];
        for &c in &self.classes {
            *sizes.get_mut(c as usize).ok_or_else(|| Error::InvalidParameters(format!("class {c} out of range")))? += 1;
        }
        let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        if hi - lo > 1 {
            return Err(Error::InvalidParameters("class sizes differ by more than one".into()));
        }
        Ok(())
    }

    /// The arc for a cross edge, or `None` inside a class.
    pub fn orient(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        let (i, j) = (self.classes[u] as usize, self.classes[v] as usize);
        if i == j {
            None
        } else if self.tournament.has_arc(i, j) {
            Some((u, v))
        } else {
            Some((v, u))
        }
    }

    /// The cross edges of `g` with the classes attached, as a good-clique
    /// board.
    pub fn cross_board(&self, g: &Graph) -> Result<Arc<Board>> {
        let edges: Vec<(usize, usize)> = g.edges().into_iter().filter(|&(u, v)| self.classes[u] != self.classes[v]).collect();
        let h = Graph::from_edges(g.n(), &edges)?.with_partition(self.classes.clone())?;
        Board::new(h, Goal::GoodClique(self.tournament.k()), GameConfig::default())
    }
}

/// Maker plays an inner good-clique strategy on the cross edges and orients
/// each claim by the identification.
pub struct IdentificationScript {
    map: IdentificationMap,
    cross: Arc<Board>,
    inner: Box<dyn Script>,
}

pub fn identification_maker_script(
    board: &Board,
    map: IdentificationMap,
    inner: Box<dyn Script>,
) -> Result<IdentificationScript> {
    map.validate()?;
    if map.classes.len() != board.graph.n() {
        return Err(Error::InvalidParameters("identification does not cover the board".into()));
    }
    let cross = map.cross_board(&board.graph)?;
    Ok(IdentificationScript { map, cross, inner })
}

impl IdentificationScript {
    fn inner_state(&self, state: &GameState) -> Result<GameState> {
        let id: Vec<Option<usize>> = (0..state.board().graph.n()).map(Some).collect();
        replay_plain(state, self.cross.clone(), &id)
    }

    fn arc_move(&self, board: &Board, u: usize, v: usize) -> Option<Move> {
        let (t, h) = self.map.orient(u, v)?;
        let id = board.edge_id(u, v)? as usize;
        let o = if board.goal.is_oriented() { Orientation::of_arc(t, h) } else { Orientation::Undirected };
        Some(Move::new(id, o))
    }
}

impl Script for IdentificationScript {
    fn name(&self) -> String {
        format!("identification({})", self.inner.name())
    }

    fn player(&self) -> Player {
        Player::Maker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let board = state.board();
        let sub = self.inner_state(state)?;
        if !sub.is_over() {
            if let Play::Claim(m) = self.inner.choose(&sub)? {
                let (u, v) = self.cross.edge(m.edge);
                if self.map.classes[u] == self.map.classes[v] {
                    return Err(Error::Script {
                        script: self.name(),
                        msg: "inner script chose an edge inside a class".into(),
                        history_len: state.history().len(),
                    });
                }
                if let Some(mv) = self.arc_move(board, u, v) {
                    if state.edge_status(mv.edge) == EdgeStatus::Free {
                        return Ok(Play::Claim(mv));
                    }
                }
            }
        }
        let fallback = state.free_edges().find_map(|e| {
            let (u, v) = board.edge(e);
            self.arc_move(board, u, v)
        });
        Ok(fallback.map_or(Play::Skip, Play::Claim))
    }

    fn context(&self, state: &GameState) -> u64 {
        self.inner_state(state).map_or(0, |s| self.inner.context(&s))
    }
}

/// Maker follows an undirected triangle strategy and orients every claim
/// from the lower to the higher position in `order`.
pub struct TaOrientationScript {
    plain: Arc<Board>,
    inner: Box<dyn Script>,
    rank: Vec<usize>,
}

/// `order` lists the vertices from first to last; `None` is `0..n`.
pub fn ta_orientation_script(
    plain: Arc<Board>,
    inner: Box<dyn Script>,
    order: Option<Vec<usize>>,
) -> Result<TaOrientationScript> {
    let n = plain.graph.n();
    let order = order.unwrap_or_else(|| (0..n).collect());
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(Error::InvalidParameters("vertex order is not a permutation".into()));
        }
        rank[v] = i;
    }
    if rank.contains(&usize::MAX) {
        return Err(Error::InvalidParameters("vertex order is not a permutation".into()));
    }
    Ok(TaOrientationScript { plain, inner, rank })
}

impl TaOrientationScript {
    fn inner_state(&self, state: &GameState) -> Result<GameState> {
        let id: Vec<Option<usize>> = (0..state.board().graph.n()).map(Some).collect();
        replay_plain(state, self.plain.clone(), &id)
    }
}

impl Script for TaOrientationScript {
    fn name(&self) -> String {
        format!("ta-orientation({})", self.inner.name())
    }

    fn player(&self) -> Player {
        Player::Maker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let sub = self.inner_state(state)?;
        let pick = if sub.is_over() { None } else { Some(self.inner.choose(&sub)?) };
        let edge = match pick {
            Some(Play::Claim(m)) => {
                let (u, v) = self.plain.edge(m.edge);
                state.board().edge_id(u, v).map(|i| i as usize).filter(|&e| state.edge_status(e) == EdgeStatus::Free)
            }
            _ => None,
        }
        .or_else(|| state.free_edges().next());
        Ok(match edge {
            Some(e) => {
                let (u, v) = state.board().edge(e);
                let (t, h) = if self.rank[u] < self.rank[v] { (u, v) } else { (v, u) };
                Play::Claim(Move::new(e, Orientation::of_arc(t, h)))
            }
            None => Play::Skip,
        })
    }

    fn context(&self, state: &GameState) -> u64 {
        self.inner_state(state).map_or(0, |s| self.inner.context(&s))
    }
}

/// Maker drawing uniformly among the edges she does not own. A draw that
/// lands on a Breaker edge is a failure and the claim is skipped.
pub struct RandomMaker {
    pub seed: u64,
}

impl RandomMaker {
    fn step(state: &GameState) -> u64 {
        state.history().iter().filter(|a| a.player == Player::Maker).count() as u64
    }
}

impl Script for RandomMaker {
    fn name(&self) -> String {
        format!("random-maker({})", self.seed)
    }

    fn player(&self) -> Player {
        Player::Maker
    }

    fn choose(&self, state: &GameState) -> Result<Play> {
        let pool: Vec<usize> = (0..state.board().edge_count())
            .filter(|&e| !matches!(state.edge_status(e), EdgeStatus::Maker(_)))
            .collect();
        if pool.is_empty() {
            return Ok(Play::Skip);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(Self::step(state));
        let e = pool[rng.gen_range(0..pool.len())];
        let o = if state.board().goal.is_oriented() {
            if rng.gen::<bool>() {
                Orientation::Forward
            } else {
                Orientation::Backward
            }
        } else {
            Orientation::Undirected
        };
        Ok(match state.edge_status(e) {
            EdgeStatus::Free => Play::Claim(Move::new(e, o)),
            _ => Play::Skip,
        })
    }

    fn context(&self, state: &GameState) -> u64 {
        Self::step(state)
    }
}

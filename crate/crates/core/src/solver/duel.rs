use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Action, GameState, Orientation, Play, Player, Status};

/// A deterministic move rule for one player.
pub trait Script {
    fn name(&self) -> String;

    fn player(&self) -> Player;

    /// The play for the current position. Only called when this script's
    /// player is to move.
    fn choose(&self, state: &GameState) -> Result<Play>;

    /// Anything beyond the position itself that `choose` depends on, folded
    /// into a number. Positions with equal codes and equal context get the
    /// same play.
    fn context(&self, _state: &GameState) -> u64 {
        0
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DuelOptions {
    /// The scripted Maker must win using at most this many claims.
    pub maker_move_limit: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum DuelOutcome {
    AlwaysWins { positions: usize },
    Counterexample { history: Vec<Action>, final_status: Status },
}

impl DuelOutcome {
    pub fn always_wins(&self) -> bool {
        matches!(self, DuelOutcome::AlwaysWins { .. })
    }
}

/// Plays `script` against every possible sequence of opponent moves.
pub fn duel(state: &GameState, script: &dyn Script, opts: DuelOptions) -> Result<DuelOutcome> {
    let mut st = state.clone();
    let mut won: HashSet<(String, u64, usize)> = HashSet::new();
    let base_maker = count_maker(state);
    let mut d = Duel { script, opts, won: &mut won, base_maker };
    match d.walk(&mut st)? {
        None => Ok(DuelOutcome::AlwaysWins { positions: won.len() }),
        Some(status) => Ok(DuelOutcome::Counterexample { history: st.history().to_vec(), final_status: status }),
    }
}

fn count_maker(st: &GameState) -> usize {
    st.history().iter().filter(|a| a.player == Player::Maker).count()
}

struct Duel<'a> {
    script: &'a dyn Script,
    opts: DuelOptions,
    won: &'a mut HashSet<(String, u64, usize)>,
    base_maker: usize,
}

impl Duel<'_> {
    /// `None` if the scripted player wins from here against everything;
    /// otherwise the losing final status, with `st` left at the losing leaf.
    fn walk(&mut self, st: &mut GameState) -> Result<Option<Status>> {
        let me = self.script.player();
        let status = st.status();
        match (me, status.winner()) {
            (_, Some(w)) if w == me => return Ok(None),
            (_, Some(_)) => return Ok(Some(status)),
            _ => {}
        }
        if me == Player::Maker {
            if let Some(limit) = self.opts.maker_move_limit {
                if count_maker(st) - self.base_maker >= limit {
                    return Ok(Some(status));
                }
            }
        }
        let used = if self.opts.maker_move_limit.is_some() { count_maker(st) } else { 0 };
        let key = (st.code(), self.script.context(st), used);
        if self.won.contains(&key) {
            return Ok(None);
        }
        if st.mover() == me {
            let play = self.script.choose(st)?;
            if let Err(e) = st.play(play) {
                return Err(Error::Script {
                    script: self.script.name(),
                    msg: e.to_string(),
                    history_len: st.history().len(),
                });
            }
            if let Some(s) = self.walk(st)? {
                return Ok(Some(s));
            }
            st.undo();
        } else {
            for mv in st.legal_moves()? {
                st.apply(mv)?;
                if let Some(s) = self.walk(st)? {
                    return Ok(Some(s));
                }
                st.undo();
            }
        }
        self.won.insert(key);
        Ok(None)
    }
}

/// One line of a game record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub mover: Player,
    pub edge: Option<[usize; 2]>,
    /// `[tail, head]` for oriented Maker claims.
    pub orientation: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub failed: bool,
}

pub fn transcript(state: &GameState) -> Vec<TranscriptEntry> {
    let board = state.board();
    state
        .history()
        .iter()
        .map(|a| match a.play {
            Play::Claim(mv) => {
                let (u, v) = board.edge(mv.edge);
                let orientation = match mv.orientation {
                    Orientation::Undirected => None,
                    Orientation::Forward => Some([u, v]),
                    Orientation::Backward => Some([v, u]),
                };
                TranscriptEntry { mover: a.player, edge: Some([u, v]), orientation, failed: false }
            }
            Play::Skip => TranscriptEntry { mover: a.player, edge: None, orientation: None, failed: true },
        })
        .collect()
}

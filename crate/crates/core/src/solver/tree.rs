use std::collections::HashMap;

use super::{Engine, SolverConfig};
use crate::error::{Error, Result};
use crate::game::{GameState, Move, Play, Player};

/// A winning strategy as a reply table: for every position reachable when
/// the winner follows the table and the opponent plays anything, the
/// winner's move. Keys are position codes.
#[derive(Clone, Debug)]
pub struct StrategyTree {
    pub player: Player,
    replies: HashMap<String, Move>,
    /// Positions visited while building, including opponent nodes.
    pub positions: usize,
}

impl StrategyTree {
    pub fn reply(&self, state: &GameState) -> Option<Move> {
        self.replies.get(&state.code()).copied()
    }

    pub fn len(&self) -> usize {
        self.replies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replies.is_empty()
    }
}

/// Builds `player`'s winning strategy from `state`.
pub fn extract_strategy(state: &GameState, player: Player) -> Result<StrategyTree> {
    let mut engine = Engine::new(state.board(), SolverConfig::default())?;
    let w = engine.solve_state(state)?.winner;
    if w != player {
        return Err(Error::NotWinner(player));
    }
    let mut tree = StrategyTree { player, replies: HashMap::new(), positions: 0 };
    let mut seen = std::collections::HashSet::new();
    let mut st = state.clone();
    build(&mut engine, &mut st, &mut tree, &mut seen)?;
    Ok(tree)
}

fn build(
    engine: &mut Engine,
    st: &mut GameState,
    tree: &mut StrategyTree,
    seen: &mut std::collections::HashSet<String>,
) -> Result<()> {
    if st.status().winner().is_some() {
        return Ok(());
    }
    let code = st.code();
    if !seen.insert(code.clone()) {
        return Ok(());
    }
    tree.positions += 1;
    if st.mover() == tree.player {
        let mv = engine
            .winning_move(st, None)?
            .ok_or_else(|| Error::Precondition(format!("winner has no winning move at {code}")))?;
        tree.replies.insert(code, mv);
        st.play(Play::Claim(mv))?;
        build(engine, st, tree, seen)?;
        st.undo();
    } else {
        for mv in st.legal_moves()? {
            st.apply(mv)?;
            build(engine, st, tree, seen)?;
            st.undo();
        }
    }
    Ok(())
}

//! Checks Breaker's catalogue scripts against every Maker line.
use mbt::collections::named_collection;
use mbt::game::{Board, GameConfig, GameState, Goal};
use mbt::solver::{duel, DuelOptions};
use mbt::strategies::{catalog_breaker_script, CATALOG_IDS};

fn main() -> mbt::Result<()> {
    for id in CATALOG_IDS {
        let board = Board::new(named_collection(id)?, Goal::tc(), GameConfig::default())?;
        let script = catalog_breaker_script(id, &board)?;
        let outcome = duel(&GameState::new(board), &script, DuelOptions::default())?;
        println!("{id:8} always wins: {}", outcome.always_wins());
    }
    Ok(())
}

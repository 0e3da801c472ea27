use rustc_hash::FxHashMap;
use serde::Serialize;

use super::is_collection;
use crate::error::{Error, Result};
use crate::game::{new_game, GameConfig, Goal, Player};
use crate::graph::{canonical_form, to_graph6, Graph};
use crate::solver::winner;

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub consistent: bool,
    pub board_winner: Player,
    /// Distinct collection subgraphs, up to isomorphism.
    pub collections_examined: usize,
    /// A collection subgraph Maker wins on, if any.
    pub maker_win_collection: Option<String>,
    pub counterexample: Option<String>,
}

const MAX_REDUCTION_EDGES: usize = 16;

/// Compares the winner on `g` with the winners on every collection inside
/// `g`. The goal must be a triangle goal.
pub fn reduction_check(g: &Graph, goal: &Goal) -> Result<ReductionReport> {
    if goal.k() != 3 || matches!(goal, Goal::GoodClique(_)) {
        return Err(Error::InvalidGoal(format!("{goal} is not a triangle goal")));
    }
    let edges = g.edges();
    if edges.len() > MAX_REDUCTION_EDGES {
        return Err(Error::ResourceCap(format!("{} edges, limit {MAX_REDUCTION_EDGES}", edges.len())));
    }
    let board_winner = if edges.is_empty() {
        Player::Breaker
    } else {
        winner(&new_game(g.clone(), goal.clone(), GameConfig::default())?)?
    };
    let mut seen: FxHashMap<(u8, u128), Player> = FxHashMap::default();
    let mut maker_win_collection = None;
    for mask in 1u32..1 << edges.len() {
        let sub: Vec<(usize, usize)> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let c = compact(&sub)?;
        if !is_collection(&c) {
            continue;
        }
        let key = canonical_form(&c)?.key();
        if seen.contains_key(&key) {
            continue;
        }
        let w = winner(&new_game(c.clone(), goal.clone(), GameConfig::default())?)?;
        seen.insert(key, w);
        if w == Player::Maker && maker_win_collection.is_none() {
            maker_win_collection = Some(to_graph6(&c)?);
        }
    }
    let sub_maker = maker_win_collection.is_some();
    let consistent = sub_maker == (board_winner == Player::Maker);
    let counterexample = (!consistent).then(|| {
        format!(
            "{}: board winner {board_winner}, collection Maker win {}",
            to_graph6(g).unwrap_or_default(),
            maker_win_collection.as_deref().unwrap_or("none")
        )
    });
    Ok(ReductionReport {
        consistent,
        board_winner,
        collections_examined: seen.len(),
        maker_win_collection,
        counterexample,
    })
}

/// The graph spanned by `edges`, with vertices renumbered in order of
/// appearance.
fn compact(edges: &[(usize, usize)]) -> Result<Graph> {
    let mut ids: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let at = |x: usize| ids.binary_search(&x).unwrap();
    let mapped: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (at(u), at(v))).collect();
    Graph::from_edges(ids.len(), &mapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn small_boards() {
        let k4 = reduction_check(&named("K:4").unwrap(), &Goal::Clique(3)).unwrap();
        assert!(k4.consistent && k4.board_winner == Player::Breaker);
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let r = reduction_check(&two, &Goal::Clique(3)).unwrap();
        assert!(r.consistent && r.board_winner == Player::Breaker);
        assert_eq!(r.collections_examined, 1);
        let k5 = reduction_check(&named("K:5").unwrap(), &Goal::Clique(3)).unwrap();
        assert!(k5.consistent && k5.board_winner == Player::Maker);
        assert!(k5.maker_win_collection.is_some());
    }
}

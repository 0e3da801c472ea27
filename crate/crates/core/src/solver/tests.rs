use std::collections::HashMap;

use super::*;
use crate::game::{new_game, GameConfig, Goal, Play};
use crate::graph::{named, Graph};

/// Plain minimax over every legal move, memoized on the position code.
fn oracle(st: &mut GameState, memo: &mut HashMap<String, Player>) -> Player {
    match st.status() {
        Status::MakerWon => return Player::Maker,
        Status::BreakerWonEarly | Status::BreakerWonFull => return Player::Breaker,
        Status::Ongoing => {}
    }
    let code = st.code();
    if let Some(&w) = memo.get(&code) {
        return w;
    }
    let me = st.mover();
    let mut result = me.other();
    for mv in st.legal_moves().unwrap() {
        st.apply(mv).unwrap();
        let w = oracle(st, memo);
        st.undo();
        if w == me {
            result = me;
            break;
        }
    }
    memo.insert(code, result);
    result
}

fn oracle_winner(g: &Graph, goal: Goal, cfg: GameConfig) -> Player {
    let mut st = new_game(g.clone(), goal, cfg).unwrap();
    oracle(&mut st, &mut HashMap::new())
}

fn solved(name: &str, goal: Goal, cfg: GameConfig) -> Player {
    winner(&new_game(named(name).unwrap(), goal, cfg).unwrap()).unwrap()
}

#[test]
fn known_small_games() {
    assert_eq!(solved("K:3", Goal::Clique(3), GameConfig::default()), Player::Breaker);
    assert_eq!(solved("K:5", Goal::Clique(3), GameConfig::default()), Player::Maker);
    assert_eq!(solved("K:4", Goal::tc(), GameConfig::with_handicap()), Player::Breaker);
    assert_eq!(solved("K5minus", Goal::tc(), GameConfig::default()), Player::Breaker);
    assert_eq!(solved("K5minus", Goal::Clique(3), GameConfig::default()), Player::Maker);
}

#[test]
fn agrees_with_oracle() {
    let boards = ["K:3", "K:4", "K5minus", "W:4", "W:5", "K3plus", "C:5", "P:4"];
    let configs = [GameConfig::default(), GameConfig::with_handicap(), GameConfig::biased(2)];
    for name in boards {
        let g = named(name).unwrap();
        for goal in [Goal::Clique(3), Goal::tc(), Goal::ta()] {
            for cfg in configs {
                let want = oracle_winner(&g, goal.clone(), cfg);
                let got = winner(&new_game(g.clone(), goal.clone(), cfg).unwrap()).unwrap();
                assert_eq!(got, want, "{name} {goal} {cfg:?}");
                let plain = solve_with(
                    &new_game(g.clone(), goal.clone(), cfg).unwrap(),
                    SolverConfig { symmetry: false, ..SolverConfig::default() },
                )
                .unwrap();
                assert_eq!(plain.winner, want, "{name} {goal} {cfg:?} without symmetry");
            }
        }
    }
}

#[test]
fn best_move_keeps_the_win() {
    let st = new_game(named("K:5").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
    let r = solve(&st).unwrap();
    let mv = r.best_move.expect("Maker wins K5");
    let mut next = st.clone();
    next.apply(mv).unwrap();
    assert_eq!(winner(&next).unwrap(), Player::Maker);
}

#[test]
fn move_budget() {
    let st = new_game(named("K:5").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
    let mut e = Engine::new(st.board(), SolverConfig::default()).unwrap();
    assert!(!e.maker_wins_within(&st, 2).unwrap());
    let need = (2..=5).find(|&n| e.maker_wins_within(&st, n).unwrap()).expect("wins within 5");
    assert!(need >= 3);
}

#[test]
fn strategy_trees() {
    let st = new_game(named("K:5").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
    let tree = extract_strategy(&st, Player::Maker).unwrap();
    assert!(!tree.is_empty());
    assert!(matches!(extract_strategy(&st, Player::Breaker), Err(crate::Error::NotWinner(Player::Breaker))));
    let k4 = new_game(named("K:4").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
    let b = extract_strategy(&k4, Player::Breaker).unwrap();
    assert!(b.len() > 0);
}

struct LowestFree;

impl Script for LowestFree {
    fn name(&self) -> String {
        "lowest-free".into()
    }
    fn player(&self) -> Player {
        Player::Breaker
    }
    fn choose(&self, st: &GameState) -> crate::Result<Play> {
        Ok(st.free_edges().next().map_or(Play::Skip, |e| Play::Claim(Move::plain(e))))
    }
}

#[test]
fn naive_breaker_is_refuted() {
    let st = new_game(named("K:4").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
    match duel(&st, &LowestFree, DuelOptions::default()).unwrap() {
        DuelOutcome::Counterexample { final_status, history } => {
            assert_eq!(final_status, Status::MakerWon);
            assert!(!history.is_empty());
        }
        DuelOutcome::AlwaysWins { .. } => panic!("lowest-free cannot block K4"),
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k5.cache");
    let st = new_game(named("K:5").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
    let mut e = Engine::new(st.board(), SolverConfig::default()).unwrap();
    e.solve_state(&st).unwrap();
    save_cache(&e, st.board(), &path).unwrap();
    let mut fresh = Engine::new(st.board(), SolverConfig::default()).unwrap();
    assert_eq!(load_cache(&mut fresh, st.board(), &path).unwrap(), e.table_len());
    assert_eq!(fresh.solve_state(&st).unwrap().winner, Player::Maker);
    let other = new_game(named("K:4").unwrap(), Goal::Clique(3), GameConfig::default()).unwrap();
    let mut e4 = Engine::new(other.board(), SolverConfig::default()).unwrap();
    assert!(load_cache(&mut e4, other.board(), &path).is_err());
}

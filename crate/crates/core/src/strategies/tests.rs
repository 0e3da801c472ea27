use super::*;
use crate::collections::named_collection;
use crate::game::{new_game, GameConfig, Goal};
use crate::graph::named;
use crate::solver::{duel, extract_strategy, winner, DuelOptions, DuelOutcome};

fn board(g: Graph, goal: Goal, cfg: GameConfig) -> std::sync::Arc<Board> {
    Board::new(g, goal, cfg).unwrap()
}

fn wins(b: &std::sync::Arc<Board>, s: &dyn Script) -> bool {
    duel(&GameState::new(b.clone()), s, DuelOptions::default()).unwrap().always_wins()
}

#[test]
fn wheel_pairing_blocks() {
    let w5 = named("W:5").unwrap();
    let pairs = (1..=5).map(|i| [(0, i), (i, i % 5 + 1)]).collect();
    let p = Pairing::new(pairs);
    let b = board(w5, Goal::Clique(3), GameConfig::default());
    assert!(pairing_is_blocking(&b, &p).unwrap());
    assert!(wins(&b, &PairingScript { pairing: p }));
}

#[test]
fn bad_pairings() {
    let b = board(named("K:3").unwrap(), Goal::Clique(3), GameConfig::default());
    assert!(!pairing_is_blocking(&b, &Pairing::default()).unwrap());
    let overlap = Pairing::new(vec![[(0, 1), (0, 2)], [(0, 2), (1, 2)]]);
    assert!(matches!(pairing_is_blocking(&b, &overlap), Err(Error::InvalidPairing(_))));
    let off = Pairing::new(vec![[(0, 1), (0, 5)]]);
    assert!(pairing_is_blocking(&b, &off).is_err());
}

fn book() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]).unwrap()
}

/// Three triangles on a common edge plus one hanging off the first: the
/// relation graph is a triangle with a pendant.
fn k3plus_collection() -> Graph {
    Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4), (0, 5), (2, 5)]).unwrap()
}

#[test]
fn very_basic_pairings() {
    let p = very_basic_pairing(&book(), &[(0, 1)]).unwrap();
    assert_eq!(p.pairs.len(), 2);
    let b = board(book(), Goal::Clique(3), GameConfig::default());
    assert!(pairing_is_blocking(&b, &p).unwrap());
    assert!(matches!(very_basic_pairing(&named("K:4").unwrap(), &[]), Err(Error::Precondition(_))));
}

#[test]
fn k3plus_shape_has_four_triangles() {
    let g = k3plus_collection();
    let t = crate::collections::triangle_graph(&g);
    assert!(t.len() == 4 && !t.is_linear_forest() && t.embeds_in_k3plus());
    let p = very_basic_pairing(&g, &[(0, 1), (0, 5)]).unwrap();
    assert_eq!(p.pairs.len(), 4);
    let b = board(g, Goal::Clique(3), GameConfig::default());
    assert!(pairing_is_blocking(&b, &p).unwrap());
}

#[test]
fn very_basic_script_survives_handicap() {
    for g in [book(), named("K3plus").unwrap(), named("W:5").unwrap().without_edge(0, 1), k3plus_collection()] {
        assert!(is_very_basic(&g));
        let b = board(g.clone(), Goal::Clique(3), GameConfig::with_handicap());
        assert!(wins(&b, &very_basic_script(&g).unwrap()), "{:?}", g.edges());
    }
}

#[test]
fn basic_scripts() {
    let w4 = named("W:4").unwrap();
    let s = basic_breaker_script(&w4).unwrap();
    assert!(s.e1.0 == 0 && s.e2.0 == 0);
    for goal in [Goal::Clique(3), Goal::tc()] {
        let b = board(w4.clone(), goal, GameConfig::default());
        assert!(wins(&b, &basic_breaker_script(&w4).unwrap()));
    }
    assert!(basic_breaker_script(&named("K5minus").unwrap()).is_err());
}

fn k5_after(arcs: &[(usize, usize)], breaker: &[(usize, usize)]) -> (GameState, CatalogScript) {
    let g = named_collection("K5minus").unwrap();
    let b = board(g, Goal::tc(), GameConfig::default());
    let s = catalog_breaker_script("K5minus", &b).unwrap();
    let mut st = GameState::new(b.clone());
    for (i, &(t, h)) in arcs.iter().enumerate() {
        st.apply(b.arc(t, h).unwrap()).unwrap();
        if let Some(&(u, v)) = breaker.get(i) {
            st.apply(Move::plain(b.edge_id(u, v).unwrap() as usize)).unwrap();
        }
    }
    (st, s)
}

fn chosen(st: &GameState, s: &CatalogScript) -> (usize, usize) {
    match s.choose(st).unwrap() {
        Play::Claim(m) => st.board().edge(m.edge),
        Play::Skip => panic!("skip"),
    }
}

#[test]
fn k5minus_case_table() {
    // degree-4 vertices are 0, 1, 2; degree-3 vertices 3 and 4
    let (st, s) = k5_after(&[(0, 3)], &[]);
    let e = chosen(&st, &s);
    assert!(e.0 == 0 && (e.1 == 1 || e.1 == 2), "cross opening answered by {e:?}");
    // (v1,v2) = (0,1); Breaker deletes v2v4 = 1-3
    let (st, s) = k5_after(&[(0, 1)], &[]);
    assert_eq!(chosen(&st, &s), (1, 3));
    // second arc (v1,v3) = (0,2): Breaker claims v2v5 = 1-4
    let (st, s) = k5_after(&[(0, 1), (0, 2)], &[(1, 3)]);
    assert_eq!(chosen(&st, &s), (1, 4));
    // then the pairs {v1v4, v3v4} and {v1v5, v3v5} answer
    let (mut st, s) = k5_after(&[(0, 1), (0, 2)], &[(1, 3), (1, 4)]);
    st.apply(st.board().arc(3, 0).unwrap()).unwrap();
    assert_eq!(chosen(&st, &s), (2, 3));
}

#[test]
fn catalog_scripts_win() {
    for id in CATALOG_IDS {
        let b = board(named_collection(id).unwrap(), Goal::tc(), GameConfig::default());
        assert!(wins(&b, &catalog_breaker_script(id, &b).unwrap()), "{id}");
    }
    let b = board(named("K:4").unwrap(), Goal::tc(), GameConfig::default());
    assert!(catalog_breaker_script("S1", &b).is_err());
}

#[test]
fn catalog_scripts_transport() {
    let g = named_collection("S3").unwrap();
    let perm = [6, 2, 5, 0, 3, 1, 4];
    let h = g.relabel(&perm);
    let b = board(h, Goal::tc(), GameConfig::default());
    let s = catalog_breaker_script("S3", &b).unwrap();
    assert!(wins(&b, &s));
    let plan = s.plan().unwrap();
    assert!(b.graph.has_edge(plan.a1.0, plan.a1.1));
}

#[test]
fn ta_orientation_follows_triangle_strategy() {
    let g = named("K:5").unwrap();
    let plain = board(g.clone(), Goal::Clique(3), GameConfig::default());
    let tree = extract_strategy(&GameState::new(plain.clone()), Player::Maker).unwrap();
    let s = ta_orientation_script(plain, Box::new(TreeScript(tree)), None).unwrap();
    let ta = board(g, Goal::ta(), GameConfig::default());
    assert!(wins(&ta, &s));
    let mut st = GameState::new(ta.clone());
    let other = LowestFree(Player::Breaker);
    while !st.is_over() {
        let play = if st.mover() == Player::Maker { s.choose(&st).unwrap() } else { other.choose(&st).unwrap() };
        st.play(play).unwrap();
    }
    for mv in st.maker_moves() {
        let (u, v) = ta.edge(mv.edge);
        assert_eq!(mv.orientation, Orientation::of_arc(u, v));
    }
}

#[test]
fn identification_matches_good_clique_game() {
    let turan = named("turan:6:3").unwrap();
    let good = new_game(turan.clone(), Goal::GoodClique(3), GameConfig::default()).unwrap();
    let expected = winner(&good).unwrap();
    let map = IdentificationMap::balanced(6, crate::game::Tournament::cyclic_triangle()).unwrap();
    let k6 = board(named("K:6").unwrap(), Goal::tc(), GameConfig::default());
    let cross = map.cross_board(&k6.graph).unwrap();
    let inner = SolverScript::new(&cross, Player::Maker, None).unwrap();
    let s = identification_maker_script(&k6, map.clone(), Box::new(inner)).unwrap();
    let outcome = duel(&GameState::new(k6.clone()), &s, DuelOptions::default()).unwrap();
    assert_eq!(outcome.always_wins(), expected == Player::Maker);
    if let DuelOutcome::Counterexample { history, .. } = outcome {
        for a in history {
            if let (Player::Maker, Play::Claim(m)) = (a.player, a.play) {
                let (u, v) = k6.edge(m.edge);
                let (t, h) = map.orient(u, v).expect("cross edge");
                assert_eq!(m.orientation, Orientation::of_arc(t, h));
            }
        }
    }
}

#[test]
fn random_maker_is_deterministic() {
    let g = named("turan:9:3").unwrap();
    let play = |seed: u64| {
        let mut st = new_game(g.clone(), Goal::GoodClique(3), GameConfig::default()).unwrap();
        let m = RandomMaker { seed };
        while !st.is_over() {
            let p = if st.mover() == Player::Maker { m.choose(&st).unwrap() } else { GreedyBreaker.choose(&st).unwrap() };
            st.play(p).unwrap();
        }
        st
    };
    let (a, b) = (play(7), play(7));
    assert_eq!(a.history().len(), b.history().len());
    assert!(a.history().iter().zip(b.history()).all(|(x, y)| x.play == y.play));
    let failures = a.history().iter().filter(|x| x.player == Player::Maker && x.play == Play::Skip).count();
    let turns = a.history().iter().filter(|x| x.player == Player::Maker).count();
    assert!(failures <= turns);
}

#[test]
fn random_maker_finds_the_last_edge() {
    let g = named("K:4").unwrap();
    let b = board(g, Goal::Clique(3), GameConfig::default());
    let mut st = GameState::from_position(b, &[], &[0, 1, 2, 3, 4], Player::Maker, 1).unwrap();
    let m = RandomMaker { seed: 3 };
    for _ in 0..64 {
        match m.choose(&st).unwrap() {
            Play::Claim(mv) => {
                assert_eq!(mv.edge, 5);
                return;
            }
            Play::Skip => {
                st.skip().unwrap();
                st.skip().unwrap();
            }
        }
    }
    panic!("never claimed the free edge");
}

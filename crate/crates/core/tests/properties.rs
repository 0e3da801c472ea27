use mbt::collections::{
    bunch_witness, check_bunch_sequence, classify, find_bunch, is_collection, is_very_basic,
};
use mbt::game::{Board, GameConfig, GameState, Goal, Player};
use mbt::graph::{canonical_form, from_graph6, named, to_graph6, Graph};
use mbt::solver::{solve_with, SolverConfig};
use mbt::strategies::{pairing_is_blocking, very_basic_pairing};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn graph(max_n: usize, max_e: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(move |n| {
        let all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let hi = max_e.min(all.len());
        subsequence(all, 0..=hi).prop_map(move |es| Graph::from_edges(n, &es).unwrap())
    })
}

fn relabeled(g: Graph) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    let n = g.n();
    (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
}

fn win(g: &Graph, goal: Goal, cfg: GameConfig) -> Player {
    let board = Board::new(g.clone(), goal, cfg).unwrap();
    solve_with(&GameState::new(board), SolverConfig::default()).unwrap().winner
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn winners_ignore_labels((g, perm) in graph(7, 12).prop_flat_map(relabeled)) {
        let h = g.relabel(&perm);
        for goal in [Goal::Clique(3), Goal::tc(), Goal::ta()] {
            prop_assert_eq!(win(&g, goal.clone(), GameConfig::default()), win(&h, goal, GameConfig::default()));
        }
    }

    #[test]
    fn classification_ignores_labels((g, perm) in graph(7, 14).prop_flat_map(relabeled)) {
        let (a, b) = (classify(&g).unwrap(), classify(&g.relabel(&perm)).unwrap());
        prop_assert_eq!(a.is_collection, b.is_collection);
        prop_assert_eq!(a.is_very_basic, b.is_very_basic);
        prop_assert_eq!(a.is_basic(), b.is_basic());
        prop_assert_eq!(a.bunch_witness.is_some(), b.bunch_witness.is_some());
        prop_assert_eq!(a.max_density, b.max_density);
        prop_assert_eq!(canonical_form(&g).unwrap().key(), canonical_form(&g.relabel(&perm)).unwrap().key());
    }

    #[test]
    fn more_bias_never_helps_maker(g in graph(7, 12), b in 1usize..3) {
        for goal in [Goal::Clique(3), Goal::tc()] {
            if win(&g, goal.clone(), GameConfig::biased(b)) == Player::Breaker {
                prop_assert_eq!(win(&g, goal, GameConfig::biased(b + 1)), Player::Breaker);
            }
        }
    }

    #[test]
    fn more_edges_never_hurt_maker(g in graph(7, 12), pick in any::<prop::sample::Index>()) {
        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let (u, v) = edges[pick.index(edges.len())];
        let sub = g.without_edge(u, v);
        for goal in [Goal::Clique(3), Goal::tc()] {
            if win(&g, goal.clone(), GameConfig::default()) == Player::Breaker {
                prop_assert_eq!(win(&sub, goal, GameConfig::default()), Player::Breaker);
            }
        }
    }

    #[test]
    fn ta_and_triangle_games_agree(g in graph(8, 12)) {
        prop_assert_eq!(win(&g, Goal::ta(), GameConfig::default()), win(&g, Goal::Clique(3), GameConfig::default()));
    }

    #[test]
    fn blocking_pairings_are_breaker_wins(g in graph(7, 14)) {
        prop_assume!(is_very_basic(&g) && !g.triangles().is_empty());
        let board = Board::new(g.clone(), Goal::Clique(3), GameConfig::default()).unwrap();
        let p = very_basic_pairing(&g, &[]).unwrap();
        prop_assert!(pairing_is_blocking(&board, &p).unwrap());
        prop_assert_eq!(win(&g, Goal::Clique(3), GameConfig::with_handicap()), Player::Breaker);
    }

    #[test]
    fn bunches_replay_and_are_dense(g in graph(7, 16)) {
        prop_assume!(is_collection(&g));
        if let Some(seq) = bunch_witness(&g) {
            prop_assert!(check_bunch_sequence(&g, &seq));
        }
        let (b, seq) = find_bunch(&g).unwrap();
        prop_assert!(check_bunch_sequence(&b, &seq));
        prop_assert!(b.is_subgraph_of(&g));
        prop_assert_eq!(b.n(), g.n());
        prop_assert!(b.edge_count() + 3 >= 2 * g.n());
    }

    #[test]
    fn graph6_round_trip(g in graph(9, 36)) {
        let back = from_graph6(&to_graph6(&g).unwrap()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }
}

#[test]
fn small_wheels_are_breaker_wins() {
    for k in 3..=6 {
        let w = named(&format!("W:{k}")).unwrap();
        assert_eq!(win(&w, Goal::Clique(3), GameConfig::default()), Player::Breaker, "W{k}");
    }
}

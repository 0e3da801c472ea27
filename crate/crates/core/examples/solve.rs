//! Perfect play on a few small boards.
use mbt::game::{new_game, GameConfig, Goal};
use mbt::graph::named;
use mbt::solver::solve;

fn main() -> mbt::Result<()> {
    let cases = [
        ("K:4", Goal::tc(), GameConfig::with_handicap()),
        ("K:5", Goal::Clique(3), GameConfig::default()),
        ("K5minus", Goal::tc(), GameConfig::default()),
        ("K:6", Goal::tc(), GameConfig::biased(2)),
        ("turan:6:3", Goal::GoodClique(3), GameConfig::default()),
    ];
    for (name, goal, cfg) in cases {
        let st = new_game(named(name)?, goal.clone(), cfg)?;
        let r = solve(&st)?;
        let mv = r.best_move.map(|m| st.board().describe_move(m)).unwrap_or_else(|| "-".into());
        println!("{name:10} {goal:14} winner={:?} move={mv} nodes={}", r.winner, r.nodes_visited);
    }
    Ok(())
}

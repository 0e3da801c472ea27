//! Seeded probes: a win-frequency curve and a random Maker run.
use mbt::experiments::{empirical_threshold_curve, random_maker_trial, CurveSpec, RandomMakerSpec};

fn main() -> mbt::Result<()> {
    let spec = CurveSpec {
        goal: "clique:3".into(),
        n: 7,
        k: None,
        ps: vec![0.2, 0.4, 0.6, 0.8],
        trials: 200,
        seed: 1,
        heuristic: false,
    };
    let curve = empirical_threshold_curve(&spec)?;
    for c in &curve.cells {
        println!("p={:.1} maker wins {:.3} [{:.3}, {:.3}]", c.params["p"], c.freq, c.ci_lo, c.ci_hi);
    }
    let rm = RandomMakerSpec { n: 30, k: 3, m: None, b: 1, adversary: "greedy".into(), delta: 0.5, trials: 50, seed: 1 };
    let r = random_maker_trial(&rm)?;
    println!("random maker: completed {}/{} mean failures {:.1}", r.cells[0].wins, r.cells[0].trials, r.values["mean_failures"]);
    Ok(())
}

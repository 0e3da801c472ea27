use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    contains_subgraph, count_good_copies, coupled_subgraph, trial_rng, turan_edge_count, Cell, ExperimentReport, Model,
};
use crate::error::{Error, Result};
use crate::game::{new_game, GameConfig, GameState, Goal, Play, Player, Status};
use crate::graph::{canonical_form, max_density, Graph, MAX_CANON_VERTICES};
use crate::solver::{winner, Script};
use crate::strategies::{GreedyBreaker, RandomBreaker, RandomMaker};

/// Largest board order solved exactly in a curve.
pub const MAX_EXACT_CURVE_VERTICES: usize = 7;

fn default_trials() -> usize {
    100
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSpec {
    pub goal: String,
    pub n: usize,
    /// Turán host with `k` classes instead of `K_n`.
    #[serde(default)]
    pub k: Option<usize>,
    pub ps: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Random Maker against greedy Breaker instead of exact solving.
    #[serde(default)]
    pub heuristic: bool,
}

/// Play two scripts to the end.
fn play_out(mut st: GameState, maker: &dyn Script, breaker: &dyn Script, max_maker_turns: Option<usize>) -> Result<GameState> {
    while !st.is_over() {
        if st.mover() == Player::Maker {
            if let Some(limit) = max_maker_turns {
                if st.history().iter().filter(|a| a.player == Player::Maker).count() >= limit {
                    break;
                }
            }
        }
        let p = if st.mover() == Player::Maker { maker.choose(&st)? } else { breaker.choose(&st)? };
        st.play(p)?;
    }
    Ok(st)
}

/// Maker-win frequency per edge probability. Boards for one trial share
/// their uniforms across `ps`, so exact curves are monotone trial by trial.
pub fn empirical_threshold_curve(spec: &CurveSpec) -> Result<ExperimentReport> {
    let goal: Goal = spec.goal.parse()?;
    if spec.trials == 0 || spec.ps.is_empty() {
        return Err(Error::InvalidSpec("need at least one trial and one p".into()));
    }
    if spec.ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidSpec("p outside [0, 1]".into()));
    }
    let model = match spec.k {
        Some(k) => Model::TuranP { n: spec.n, k, p: 1.0 },
        None => Model::Gnp { n: spec.n, p: 1.0 },
    };
    let host = model.host()?;
    let exact = !spec.heuristic && spec.n <= MAX_EXACT_CURVE_VERTICES;
    if !spec.heuristic && !exact {
        return Err(Error::ResourceCap(format!(
            "exact curves need n <= {MAX_EXACT_CURVE_VERTICES}; set heuristic for larger boards"
        )));
    }
    let mut ps = spec.ps.clone();
    ps.sort_by(f64::total_cmp);
    let memo: Mutex<HashMap<(u8, u128), bool>> = Mutex::new(HashMap::new());
    let m = host.edge_count();
    let rows: Vec<Vec<bool>> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<bool>> {
            let mut rng = trial_rng(spec.seed, t);
            let u: Vec<f64> = (0..m).map(|_| rng.gen()).collect();
            let play_seed: u64 = rng.gen();
            ps.iter()
                .map(|&p| {
                    let g = coupled_subgraph(&host, &u, p)?;
                    if g.edge_count() == 0 {
                        return Ok(false);
                    }
                    if exact {
                        let key = if g.partition().is_none() && g.n() <= MAX_CANON_VERTICES {
                            Some(canonical_form(&g)?.key())
                        } else {
                            None
                        };
                        if let Some(k) = key {
                            if let Some(&w) = memo.lock().unwrap().get(&k) {
                                return Ok(w);
                            }
                        }
                        let w = winner(&new_game(g, goal.clone(), GameConfig::default())?)? == Player::Maker;
                        if let Some(k) = key {
                            memo.lock().unwrap().insert(k, w);
                        }
                        Ok(w)
                    } else {
                        let st = new_game(g, goal.clone(), GameConfig::default())?;
                        let end = play_out(st, &RandomMaker { seed: play_seed }, &GreedyBreaker, None)?;
                        Ok(end.status() == Status::MakerWon)
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("curve", spec, spec.seed);
    report.heuristic = !exact;
    for (i, &p) in ps.iter().enumerate() {
        let wins = rows.iter().filter(|r| r[i]).count() as u64;
        report.cells.push(Cell::new(&[("p", p)], wins, spec.trials as u64));
    }
    let per_trial = rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
    let counts = report.cells.windows(2).all(|w| w[0].wins <= w[1].wins);
    report.checks.insert("monotone_per_trial".into(), per_trial);
    report.checks.insert("monotone_counts".into(), counts);
    Ok(report)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomMakerSpec {
    pub n: usize,
    pub k: usize,
    /// Board edges; defaults to `floor(n^(2 - 2/(k+1)))`.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "one")]
    pub b: usize,
    /// `greedy` or `random`.
    #[serde(default = "greedy")]
    pub adversary: String,
    #[serde(default = "half")]
    pub delta: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn greedy() -> String {
    "greedy".into()
}

fn half() -> f64 {
    0.5
}

/// Random Maker against an adversary on `G(T(n,k), M)` for the good-clique
/// game, `2 floor(n^(2-2/(k+1)))` rounds at most.
pub fn random_maker_trial(spec: &RandomMakerSpec) -> Result<ExperimentReport> {
    let base = (spec.n as f64).powf(2.0 - 2.0 / (spec.k as f64 + 1.0)).floor() as usize;
    let cap = turan_edge_count(spec.n, spec.k.max(1).min(spec.n.max(1)));
    let m = spec.m.unwrap_or(base).min(cap);
    let model = Model::TuranM { n: spec.n, k: spec.k, m };
    let host = model.host()?;
    if spec.trials == 0 || spec.b == 0 {
        return Err(Error::InvalidSpec("need trials >= 1 and b >= 1".into()));
    }
    if !["greedy", "random"].contains(&spec.adversary.as_str()) {
        return Err(Error::InvalidSpec(format!("unknown adversary `{}`", spec.adversary)));
    }
    let rounds = (2 * base).min(m);
    struct Trial {
        completed: bool,
        failures: usize,
        maker_turns: usize,
        blocked_fraction: f64,
    }
    let trials: Vec<Trial> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Trial> {
            let mut rng = trial_rng(spec.seed, t);
            let g = model.sample(&host, &mut rng)?;
            let play_seed: u64 = rng.gen();
            let st = new_game(g, Goal::GoodClique(spec.k), GameConfig::biased(spec.b))?;
            let maker = RandomMaker { seed: play_seed };
            let end = match spec.adversary.as_str() {
                "greedy" => play_out(st, &maker, &GreedyBreaker, Some(rounds))?,
                _ => play_out(st, &maker, &RandomBreaker { seed: play_seed ^ 0x9e37_79b9 }, Some(rounds))?,
            };
            let maker_actions: Vec<_> = end.history().iter().filter(|a| a.player == Player::Maker).collect();
            let failures = maker_actions.iter().filter(|a| a.play == Play::Skip).count();
            let owned = end.maker_moves().len();
            let breaker = end.breaker_edges().len();
            let pool = end.board().edge_count() - owned;
            Ok(Trial {
                completed: end.status() == Status::MakerWon,
                failures,
                maker_turns: maker_actions.len(),
                blocked_fraction: if pool == 0 { 0.0 } else { breaker as f64 / pool as f64 },
            })
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("random-maker", spec, spec.seed);
    report.heuristic = true;
    let completed = trials.iter().filter(|t| t.completed).count() as u64;
    report.cells.push(Cell::new(&[("n", spec.n as f64), ("k", spec.k as f64), ("m", m as f64)], completed, spec.trials as u64));
    let nt = trials.len() as f64;
    let mean_fail = trials.iter().map(|t| t.failures as f64).sum::<f64>() / nt;
    let mean_turns = trials.iter().map(|t| t.maker_turns as f64).sum::<f64>() / nt;
    let q = trials.iter().map(|t| t.blocked_fraction).sum::<f64>() / nt;
    let sigma = (mean_turns * q * (1.0 - q)).sqrt();
    report.values.insert("rounds".into(), rounds as f64);
    report.values.insert("mean_failures".into(), mean_fail);
    report.values.insert("max_failures".into(), trials.iter().map(|t| t.failures).max().unwrap_or(0) as f64);
    report.values.insert("mean_maker_turns".into(), mean_turns);
    report.values.insert("blocked_fraction".into(), q);
    report.values.insert("delta_rounds".into(), spec.delta * rounds as f64);
    report.values.insert("failure_bound".into(), q * mean_turns + 3.0 * sigma);
    report.checks.insert("failures_le_turns".into(), trials.iter().all(|t| t.failures <= t.maker_turns));
    report.checks.insert("mean_failures_within_bound".into(), mean_fail <= q * mean_turns + 3.0 * sigma);
    Ok(report)
}

/// `exp(-t^2/(2 lambda) + t^3/(6 lambda^2))`.
pub fn chernoff_bound_eval(lambda: f64, t: f64) -> Result<f64> {
    if lambda <= 0.0 || t < 0.0 || !lambda.is_finite() || !t.is_finite() {
        return Err(Error::InvalidParameters(format!("need lambda > 0 and t >= 0, got {lambda}, {t}")));
    }
    Ok((-t * t / (2.0 * lambda) + t.powi(3) / (6.0 * lambda * lambda)).exp())
}

/// Empirical `Pr(Bin(n, p) >= np + t)` with the bound attached.
pub fn binomial_tail_probe(n: u64, p: f64, t: f64, trials: usize, seed: u64) -> Result<Cell> {
    let lambda = n as f64 * p;
    let bound = chernoff_bound_eval(lambda, t)?;
    let hits = (0..trials as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = trial_rng(seed, i);
            let x = (0..n).filter(|_| rng.gen::<f64>() < p).count() as f64;
            x >= lambda + t
        })
        .count() as u64;
    Ok(Cell::new(&[("n", n as f64), ("p", p), ("t", t)], hits, trials as u64).with_bound(bound))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Property {
    ContainsGoodClique { k: usize },
    Always,
}

impl Property {
    fn holds(&self, g: &Graph) -> Result<bool> {
        match *self {
            Property::ContainsGoodClique { k } => Ok(count_good_copies(g, k)? > 0),
            Property::Always => Ok(true),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PittelSpec {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub property: Property,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Estimates both sides of `Pr(H_M fails) <= 3 sqrt(M) Pr(H_p fails)` with
/// `p = M / e(T(n,k))`.
pub fn model_transfer_check(spec: &PittelSpec) -> Result<ExperimentReport> {
    let n_edges = turan_edge_count(spec.n, spec.k.max(1).min(spec.n.max(1)));
    let mm = Model::TuranM { n: spec.n, k: spec.k, m: spec.m };
    let p = if n_edges == 0 { 0.0 } else { spec.m as f64 / n_edges as f64 };
    let mp = Model::TuranP { n: spec.n, k: spec.k, p };
    let host = mm.host()?;
    mp.validate()?;
    if spec.trials == 0 {
        return Err(Error::InvalidSpec("trials must be at least 1".into()));
    }
    let fails = |model: &Model, salt: u64| -> Result<u64> {
        let v: Vec<bool> = (0..spec.trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(spec.seed ^ salt, t);
                Ok(!spec.property.holds(&model.sample(&host, &mut rng)?)?)
            })
            .collect::<Result<_>>()?;
        Ok(v.into_iter().filter(|&b| b).count() as u64)
    };
    let left = Cell::new(&[("m", spec.m as f64)], fails(&mm, 0)?, spec.trials as u64);
    let right = Cell::new(&[("p", p)], fails(&mp, 0x5851_f42d_4c95_7f2d)?, spec.trials as u64);
    let factor = 3.0 * (spec.m as f64).sqrt();
    let rhs = factor * right.freq;
    let mut report = ExperimentReport::new("pittel", spec, spec.seed);
    report.values.insert("lhs".into(), left.freq);
    report.values.insert("rhs".into(), rhs);
    report.values.insert("p".into(), p);
    report.checks.insert("holds_within_ci".into(), left.ci_lo <= factor * right.ci_hi);
    report.cells.push(left);
    report.cells.push(right.with_bound(rhs));
    Ok(report)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgraphSpec {
    pub n: usize,
    /// Edge probabilities; defaults to multiples of the pivot.
    #[serde(default)]
    pub ps: Option<Vec<f64>>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Frequency of `G(n,p)` containing `h`, beside the pivot `n^(-1/m(h))`.
pub fn subgraph_frequency(h: &Graph, spec: &SubgraphSpec) -> Result<ExperimentReport> {
    if h.n() > 8 {
        return Err(Error::TooManyVertices { n: h.n(), limit: 8 });
    }
    let m = max_density(h)?;
    let pivot = (spec.n as f64).powf(-1.0 / m.to_f64());
    let mut ps = spec
        .ps
        .clone()
        .unwrap_or_else(|| [0.25, 0.5, 1.0, 2.0, 4.0].iter().map(|s| (s * pivot).min(1.0)).collect());
    ps.sort_by(f64::total_cmp);
    if spec.trials == 0 || ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidSpec("need trials >= 1 and p in [0, 1]".into()));
    }
    let host = Model::Gnp { n: spec.n, p: 1.0 }.host()?;
    let e = host.edge_count();
    let rows: Vec<Vec<bool>> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<bool>> {
            let mut rng = trial_rng(spec.seed, t);
            let u: Vec<f64> = (0..e).map(|_| rng.gen()).collect();
            let mut out = Vec::with_capacity(ps.len());
            let mut found = false;
            for &p in &ps {
                // containment is monotone along the coupling
                if !found {
                    found = contains_subgraph(&coupled_subgraph(&host, &u, p)?, h);
                }
                out.push(found);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("subgraph", spec, spec.seed);
    for (i, &p) in ps.iter().enumerate() {
        let wins = rows.iter().filter(|r| r[i]).count() as u64;
        report.cells.push(Cell::new(&[("p", p), ("ratio", p / pivot)], wins, spec.trials as u64));
    }
    report.values.insert("pivot".into(), pivot);
    report.values.insert("m_numer".into(), m.numer() as f64);
    report.values.insert("m_denom".into(), m.denom() as f64);
    report.checks.insert("monotone_counts".into(), report.cells.windows(2).all(|w| w[0].wins <= w[1].wins));
    Ok(report)
}

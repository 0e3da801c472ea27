//! Random boards, copy counting and Monte-Carlo probes. Every trial draws
//! from its own stream derived from `(seed, trial)`, so reports do not
//! depend on the worker count.

mod counting;
mod probes;

pub use counting::{
    contains_subgraph, count_good_copies, pair_intersection_stats, PairIntersectionRow,
};
pub use probes::{
    binomial_tail_probe, chernoff_bound_eval, empirical_threshold_curve, model_transfer_check, random_maker_trial,
    subgraph_frequency, CurveSpec, PittelSpec, Property, RandomMakerSpec, SubgraphSpec,
};

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{turan_classes, Graph};

/// Largest board the samplers build.
pub const MAX_SAMPLE_VERTICES: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    Gnp { n: usize, p: f64 },
    TuranP { n: usize, k: usize, p: f64 },
    TuranM { n: usize, k: usize, m: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    #[serde(flatten)]
    pub model: Model,
    pub seed: u64,
    pub trials: usize,
}

/// Edge count of the Turán graph `T(n, k)`.
pub fn turan_edge_count(n: usize, k: usize) -> usize {
    let classes = turan_classes(n, k);
    let mut sizes = vec![0usize; k];
    for c in classes {
        sizes[c as usize] += 1;
    }
    let same: usize = sizes.iter().map(|s| s * s.saturating_sub(1) / 2).sum();
    n * n.saturating_sub(1) / 2 - same
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        let (n, k) = match *self {
            Model::Gnp { n, p } | Model::TuranP { n, p, .. } if !(0.0..=1.0).contains(&p) => {
                return bad(format!("p = {p} outside [0, 1] for n = {n}"))
            }
            Model::Gnp { n, .. } => (n, 1),
            Model::TuranP { n, k, .. } => (n, k),
            Model::TuranM { n, k, m } => {
                if k >= 1 && k <= n && m > turan_edge_count(n, k) {
                    return bad(format!("M = {m} exceeds e(T({n},{k})) = {}", turan_edge_count(n, k)));
                }
                (n, k)
            }
        };
        if n == 0 || n > MAX_SAMPLE_VERTICES {
            return bad(format!("n = {n} outside 1..={MAX_SAMPLE_VERTICES}"));
        }
        if k == 0 || k > n {
            return bad(format!("k = {k} outside 1..={n}"));
        }
        Ok(())
    }

    /// The host board edges are drawn from, with the partition for Turán
    /// models.
    pub fn host(&self) -> Result<Graph> {
        self.validate()?;
        match *self {
            Model::Gnp { n, .. } => Graph::complete(n),
            Model::TuranP { n, k, .. } | Model::TuranM { n, k, .. } => turan_graph(n, k),
        }
    }

    pub fn sample(&self, host: &Graph, rng: &mut ChaCha8Rng) -> Result<Graph> {
        let edges = host.edges();
        let keep: Vec<(usize, usize)> = match *self {
            Model::Gnp { p, .. } | Model::TuranP { p, .. } => edges.into_iter().filter(|_| rng.gen::<f64>() < p).collect(),
            Model::TuranM { m, .. } => {
                let mut idx = sample(rng, edges.len(), m).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| edges[i]).collect()
            }
        };
        with_host_partition(Graph::from_edges(host.n(), &keep)?, host)
    }
}

fn with_host_partition(g: Graph, host: &Graph) -> Result<Graph> {
    match host.partition() {
        Some(p) => g.with_partition(p.to_vec()),
        None => Ok(g),
    }
}

pub fn turan_graph(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || k > n {
        return Err(Error::InvalidSpec(format!("turan {n} {k}")));
    }
    let classes = turan_classes(n, k);
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if classes[u] != classes[v] {
                g.add_edge(u, v);
            }
        }
    }
    g.with_partition(classes)
}

/// The stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// The boards of a spec, trial by trial.
pub fn sample_board(spec: &SampleSpec) -> Result<impl Iterator<Item = Graph>> {
    if spec.trials == 0 {
        return Err(Error::InvalidSpec("trials must be at least 1".into()));
    }
    let host = spec.model.host()?;
    let model = spec.model.clone();
    let seed = spec.seed;
    Ok((0..spec.trials as u64).map(move |t| model.sample(&host, &mut trial_rng(seed, t)).expect("valid model")))
}

/// Edge subgraph `{e : u[e] < p}` of `host`; with shared `u` the boards
/// grow with `p`.
pub fn coupled_subgraph(host: &Graph, u: &[f64], p: f64) -> Result<Graph> {
    let keep: Vec<(usize, usize)> = host.edges().into_iter().zip(u).filter(|(_, &x)| x < p).map(|(e, _)| e).collect();
    with_host_partition(Graph::from_edges(host.n(), &keep)?, host)
}

/// Wilson score interval at 95%.
pub fn wilson(wins: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let ph = wins as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (ph + z * z / (2.0 * n)) / denom;
    let half = z * (ph * (1.0 - ph) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub params: BTreeMap<String, f64>,
    pub wins: u64,
    pub trials: u64,
    pub freq: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

impl Cell {
    pub fn new(params: &[(&str, f64)], wins: u64, trials: u64) -> Cell {
        let (ci_lo, ci_hi) = wilson(wins, trials);
        Cell {
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            wins,
            trials,
            freq: if trials == 0 { 0.0 } else { wins as f64 / trials as f64 },
            ci_lo,
            ci_hi,
            bound: None,
        }
    }

    pub fn with_bound(mut self, b: f64) -> Cell {
        self.bound = Some(b);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: String,
    pub spec: serde_json::Value,
    pub seed: u64,
    pub version: String,
    /// Script-vs-script play rather than exact solving.
    pub heuristic: bool,
    pub cells: Vec<Cell>,
    /// Named scalar results and checks.
    pub values: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
}

impl ExperimentReport {
    pub fn new(kind: &str, spec: &impl Serialize, seed: u64) -> ExperimentReport {
        ExperimentReport {
            kind: kind.to_string(),
            spec: serde_json::to_value(spec).unwrap_or(serde_json::Value::Null),
            seed,
            version: concat!("mbt ", env!("CARGO_PKG_VERSION")).to_string(),
            heuristic: false,
            cells: Vec::new(),
            values: BTreeMap::new(),
            checks: BTreeMap::new(),
        }
    }

    pub fn write_json(&self, out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// One row per cell; parameters as `key=value` pairs.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["params", "wins", "trials", "freq", "ci_lo", "ci_hi", "bound"]).map_err(io)?;
        for c in &self.cells {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            w.write_record([
                params.join(";"),
                c.wins.to_string(),
                c.trials.to_string(),
                c.freq.to_string(),
                c.ci_lo.to_string(),
                c.ci_hi.to_string(),
                c.bound.map_or(String::new(), |b| b.to_string()),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests;

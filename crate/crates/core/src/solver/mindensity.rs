use rayon::prelude::*;
use serde::Serialize;

use super::{Engine, SolverConfig};
use crate::collections::is_collection;
use crate::error::{Error, Result};
use crate::game::{Board, GameConfig, GameState, Goal, Player};
use crate::graph::{enumerate_nonisomorphic, max_density, to_graph6, EnumerationFilter, Graph, Rational};

#[derive(Clone, Debug)]
pub struct SearchConstraints {
    pub v_min: usize,
    pub v_max: usize,
    /// Inclusive edge-count range.
    pub edges: Option<(usize, usize)>,
    pub min_degree: usize,
    /// `(bound, strict)`.
    pub max_density: Option<(Rational, bool)>,
    /// Only triangle collections (every edge in a triangle, connected
    /// triangle relation).
    pub collections_only: bool,
    pub solver: SolverConfig,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        SearchConstraints {
            v_min: 3,
            v_max: 5,
            edges: None,
            min_degree: 0,
            max_density: None,
            collections_only: true,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WinClass {
    pub graph6: String,
    pub vertices: usize,
    pub edges: usize,
    pub max_density: Rational,
    #[serde(skip)]
    pub graph: Graph,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinDensityReport {
    pub goal: String,
    pub classes_examined: usize,
    pub maker_win_classes: Vec<WinClass>,
    pub min_density: Option<Rational>,
    pub witness: Option<WinClass>,
    /// For oriented triangle goals: arcs `(tail, head)` of the witness making
    /// every triangle cyclic, when such an orientation exists.
    pub cyclic_orientation: Option<Vec<(usize, usize)>>,
}

/// Enumerates candidate boards and solves each; reports the Maker wins and
/// the least maximum density among them.
pub fn min_density_maker_win_search(goal: &Goal, c: &SearchConstraints) -> Result<MinDensityReport> {
    let cap = match goal {
        Goal::Tournament(_) => 8,
        _ => 6,
    };
    if c.v_max > cap {
        return Err(Error::ResourceCap(format!("v_max {} exceeds {cap} for goal {goal}", c.v_max)));
    }
    let mut candidates = Vec::new();
    for v in c.v_min.max(1)..=c.v_max {
        let (lo, hi) = c.edges.unwrap_or((1, v * (v - 1) / 2));
        let filter = EnumerationFilter {
            min_edges: lo.max(1),
            max_edges: hi,
            min_degree: c.min_degree.max(if c.collections_only { 2 } else { 0 }),
            every_edge_in_triangle: c.collections_only,
            connected: c.collections_only,
            max_density: c.max_density,
        };
        for g in enumerate_nonisomorphic(v, &filter)? {
            if !c.collections_only || is_collection(&g) {
                candidates.push(g);
            }
        }
    }
    let prefilter = matches!(goal, Goal::Tournament(t) if t.k() == 3);
    let verdicts: Vec<Result<bool>> = candidates
        .par_iter()
        .map(|g| {
            if prefilter && solve_fresh(g, &Goal::Clique(3), c.solver)? == Player::Breaker {
                return Ok(false);
            }
            Ok(solve_fresh(g, goal, c.solver)? == Player::Maker)
        })
        .collect();
    let mut wins = Vec::new();
    for (g, v) in candidates.iter().zip(verdicts) {
        if v? {
            wins.push(WinClass {
                graph6: to_graph6(g)?,
                vertices: g.n(),
                edges: g.edge_count(),
                max_density: max_density(g)?,
                graph: g.clone(),
            });
        }
    }
    let min_density = wins.iter().map(|w| w.max_density).min();
    let mut witness = None;
    let mut cyclic_orientation = None;
    if let Some(m) = min_density {
        let best: Vec<&WinClass> = wins.iter().filter(|w| w.max_density == m).collect();
        if prefilter {
            for w in &best {
                if let Some(o) = all_triangles_cyclic_orientation(&w.graph) {
                    witness = Some((*w).clone());
                    cyclic_orientation = Some(o);
                    break;
                }
            }
        }
        if witness.is_none() {
            witness = best.first().map(|w| (*w).clone());
        }
    }
    Ok(MinDensityReport {
        goal: goal.to_string(),
        classes_examined: candidates.len(),
        maker_win_classes: wins,
        min_density,
        witness,
        cyclic_orientation,
    })
}

fn solve_fresh(g: &Graph, goal: &Goal, cfg: SolverConfig) -> Result<Player> {
    let board = Board::new(g.clone(), goal.clone(), GameConfig::default())?;
    let mut e = Engine::new(&board, cfg)?;
    Ok(e.solve_state(&GameState::new(board))?.winner)
}

/// An orientation of all edges under which every triangle is cyclic, found
/// by exhaustive search over the edges lying in triangles.
pub fn all_triangles_cyclic_orientation(g: &Graph) -> Option<Vec<(usize, usize)>> {
    let edges = g.edges();
    let tris = g.triangles();
    let id = |u: usize, v: usize| edges.iter().position(|&e| e == (u.min(v), u.max(v))).unwrap();
    // a triangle [a<b<c] is cyclic iff ab, bc forward and ac backward, or
    // the reverse
    let tri_edges: Vec<[usize; 3]> = tris.iter().map(|&[a, b, c]| [id(a, b), id(b, c), id(a, c)]).collect();
    let mut order: Vec<usize> = Vec::new();
    for t in &tri_edges {
        for &e in t {
            if !order.contains(&e) {
                order.push(e);
            }
        }
    }
    let mut fwd: Vec<Option<bool>> = vec![None; edges.len()];
    fn ok(tri_edges: &[[usize; 3]], fwd: &[Option<bool>]) -> bool {
        tri_edges.iter().all(|t| match (fwd[t[0]], fwd[t[1]], fwd[t[2]]) {
            (Some(x), Some(y), Some(z)) => x == y && z != x,
            _ => true,
        })
    }
    fn rec(i: usize, order: &[usize], tri_edges: &[[usize; 3]], fwd: &mut Vec<Option<bool>>) -> bool {
        if i == order.len() {
            return true;
        }
        for val in [true, false] {
            fwd[order[i]] = Some(val);
            if ok(tri_edges, fwd) && rec(i + 1, order, tri_edges, fwd) {
                return true;
            }
        }
        fwd[order[i]] = None;
        false
    }
    if !rec(0, &order, &tri_edges, &mut fwd) {
        return None;
    }
    Some(
        edges
            .iter()
            .zip(&fwd)
            .map(|(&(u, v), f)| if f.unwrap_or(true) { (u, v) } else { (v, u) })
            .collect(),
    )
}

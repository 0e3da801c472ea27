use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{basic_witness, bunch_witness, is_collection, is_very_basic};
use crate::error::{Error, Result};
use crate::game::{new_game, GameConfig, Goal, Player};
use crate::graph::{
    canonical_form, enumerate_nonisomorphic, from_graph6, max_density, to_graph6, EnumerationFilter, Graph, Rational,
};
use crate::solver::winner;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub clique3: Option<Player>,
    pub tc: Option<Player>,
}

/// A graph with its collection taxonomy.
#[derive(Clone, Debug)]
pub struct CollectionClass {
    pub name: Option<String>,
    pub graph: Graph,
    pub is_collection: bool,
    pub is_very_basic: bool,
    pub basic_witness: Option<((usize, usize), (usize, usize))>,
    pub bunch_witness: Option<Vec<[usize; 3]>>,
    pub max_density: Rational,
    pub verdicts: Verdicts,
}

impl CollectionClass {
    pub fn is_basic(&self) -> bool {
        self.basic_witness.is_some()
    }

    pub fn v(&self) -> usize {
        self.graph.n()
    }

    pub fn e(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| to_graph6(&self.graph).unwrap_or_default())
    }

    /// Solves the triangle and cyclic-triangle games on this graph.
    pub fn compute_verdicts(&mut self) -> Result<()> {
        let g = self.graph.clone();
        self.verdicts.clique3 = Some(winner(&new_game(g.clone(), Goal::Clique(3), GameConfig::default())?)?);
        self.verdicts.tc = Some(if self.verdicts.clique3 == Some(Player::Breaker) {
            Player::Breaker
        } else {
            winner(&new_game(g, Goal::tc(), GameConfig::default())?)?
        });
        Ok(())
    }
}

pub fn classify(g: &Graph) -> Result<CollectionClass> {
    if g.n() > 10 {
        return Err(Error::TooManyVertices { n: g.n(), limit: 10 });
    }
    Ok(CollectionClass {
        name: None,
        graph: g.clone(),
        is_collection: is_collection(g),
        is_very_basic: is_very_basic(g),
        basic_witness: basic_witness(g),
        bunch_witness: bunch_witness(g),
        max_density: max_density(g)?,
        verdicts: Verdicts::default(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasicFilter {
    Include,
    Exclude,
    Only,
}

#[derive(Clone, Debug)]
pub struct CollectionConstraints {
    pub v_min: usize,
    pub v_max: usize,
    /// `e = a * v + b`.
    pub edge_formula: Option<(i64, i64)>,
    pub min_degree: usize,
    /// `(bound, strict)`.
    pub max_density: Option<(Rational, bool)>,
    pub basic: BasicFilter,
}

impl CollectionConstraints {
    /// Conditions satisfied by a minimal Maker-win collection below 15/8.
    pub fn minimal_candidates() -> Self {
        CollectionConstraints {
            v_min: 5,
            v_max: 7,
            edge_formula: Some((2, -1)),
            min_degree: 3,
            max_density: Some((Rational::new(15, 8).unwrap(), true)),
            basic: BasicFilter::Include,
        }
    }
}

/// All isomorphism classes of collections meeting the constraints, sorted by
/// `(v, e, canonical form)`.
pub fn enumerate_collections(c: &CollectionConstraints) -> Result<Vec<CollectionClass>> {
    if c.v_min < 3 || c.v_max > 8 {
        return Err(Error::InvalidParameters(format!("vertex range {}..={} outside 3..=8", c.v_min, c.v_max)));
    }
    let mut graphs = Vec::new();
    for v in c.v_min..=c.v_max {
        let (lo, hi) = match c.edge_formula {
            Some((a, b)) => {
                let e = a * v as i64 + b;
                if e < 0 {
                    continue;
                }
                (e as usize, e as usize)
            }
            None => (3, v * (v - 1) / 2),
        };
        let filter = EnumerationFilter {
            min_edges: lo,
            max_edges: hi,
            min_degree: c.min_degree.max(2),
            every_edge_in_triangle: true,
            connected: true,
            max_density: c.max_density,
        };
        graphs.extend(enumerate_nonisomorphic(v, &filter)?.into_iter().filter(is_collection));
    }
    let classes: Vec<CollectionClass> = graphs.par_iter().map(classify).collect::<Result<_>>()?;
    let mut out: Vec<CollectionClass> = classes
        .into_iter()
        .filter(|cc| match c.basic {
            BasicFilter::Include => true,
            BasicFilter::Exclude => !cc.is_basic(),
            BasicFilter::Only => cc.is_basic(),
        })
        .collect();
    name_classes(&mut out);
    Ok(out)
}

/// Collections reconstructed from their textual descriptions. Vertices
/// `0..4` form the first K4 or wheel, then `x = 4`, `y = 5`, `z = 6`.
pub const NAMED_COLLECTIONS: &[(&str, usize, &[(usize, usize)])] = &[
    ("K5minus", 5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]),
    ("S1", 6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (0, 4), (0, 5), (1, 4), (1, 5)]),
    (
        "S2",
        7,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (0, 4), (0, 5), (0, 6), (1, 4)],
    ),
    (
        "S3",
        7,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (0, 4), (0, 5), (1, 6), (1, 4)],
    ),
    (
        "S4",
        7,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (0, 4), (0, 5), (4, 6), (1, 5), (0, 6), (1, 6)],
    ),
    ("A1", 6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (0, 4), (0, 5), (1, 4), (2, 5)]),
    ("A2", 6, &[(0, 1), (0, 3), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (4, 5), (0, 5), (2, 5), (1, 5)]),
    ("A3", 6, &[(0, 1), (0, 3), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (0, 4), (0, 5), (1, 5), (2, 5)]),
    (
        "B1",
        7,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (0, 4), (0, 5), (4, 6), (1, 5), (0, 6), (2, 6)],
    ),
];

pub fn named_collection(name: &str) -> Result<Graph> {
    NAMED_COLLECTIONS
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(name))
        .map(|&(_, v, es)| Graph::from_edges(v, es))
        .ok_or_else(|| Error::UnknownGraph(name.to_string()))?
}

/// Names classes isomorphic to a reconstructed collection; remaining basic
/// classes get the unused `A` (6 vertices) or `B` (7 vertices) labels in
/// sort order.
fn name_classes(classes: &mut [CollectionClass]) {
    let known: Vec<(&str, _)> = NAMED_COLLECTIONS
        .iter()
        .map(|&(n, v, es)| (n, canonical_form(&Graph::from_edges(v, es).unwrap()).unwrap()))
        .collect();
    let mut used: Vec<String> = Vec::new();
    for c in classes.iter_mut() {
        if let Ok(cf) = canonical_form(&c.graph) {
            if let Some((n, _)) = known.iter().find(|(_, k)| *k == cf) {
                c.name = Some(n.to_string());
                used.push(n.to_string());
            }
        }
    }
    for c in classes.iter_mut() {
        if c.name.is_some() || !c.is_basic() {
            continue;
        }
        let prefix = match c.v() {
            6 => 'A',
            7 => 'B',
            _ => continue,
        };
        let label = (1..)
            .map(|i| format!("{prefix}{i}"))
            .find(|l| !used.contains(l))
            .expect("unbounded");
        used.push(label.clone());
        c.name = Some(label);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub pass: bool,
    pub minimal: Vec<String>,
    pub basic: Vec<String>,
    pub minimal_per_order: BTreeMap<usize, usize>,
    pub basic_per_order: BTreeMap<usize, usize>,
    pub problems: Vec<String>,
    #[serde(skip)]
    pub classes: Vec<CollectionClass>,
}

/// Enumerates collections with `5 <= v <= 7`, `e = 2v - 1`, minimum degree
/// 3 and `m < 15/8`, splits them into basic and non-basic, and solves the
/// triangle games on each.
pub fn verify_classification() -> Result<ClassificationReport> {
    let mut classes = enumerate_collections(&CollectionConstraints::minimal_candidates())?;
    classes.par_iter_mut().try_for_each(|c| c.compute_verdicts())?;
    let mut problems = Vec::new();
    let mut minimal_per_order = BTreeMap::new();
    let mut basic_per_order = BTreeMap::new();
    for v in 5..=7 {
        minimal_per_order.insert(v, 0);
        basic_per_order.insert(v, 0);
    }
    for c in &classes {
        let slot = if c.is_basic() { &mut basic_per_order } else { &mut minimal_per_order };
        *slot.entry(c.v()).or_insert(0) += 1;
        if c.is_basic() && c.verdicts.clique3 != Some(Player::Breaker) {
            problems.push(format!("basic class {} is not a Breaker win for triangles", c.label()));
        }
        if !c.is_basic() && c.verdicts.tc != Some(Player::Breaker) {
            problems.push(format!("class {} is not a Breaker win for cyclic triangles", c.label()));
        }
    }
    let minimal: Vec<String> = classes.iter().filter(|c| !c.is_basic()).map(|c| c.label()).collect();
    let basic: Vec<String> = classes.iter().filter(|c| c.is_basic()).map(|c| c.label()).collect();
    let want_min: BTreeMap<usize, usize> = [(5, 1), (6, 1), (7, 3)].into_iter().collect();
    let want_basic: BTreeMap<usize, usize> = [(5, 0), (6, 3), (7, 7)].into_iter().collect();
    if minimal_per_order != want_min {
        problems.push(format!("non-basic counts {minimal_per_order:?}, expected {want_min:?}"));
    }
    if basic_per_order != want_basic {
        problems.push(format!("basic counts {basic_per_order:?}, expected {want_basic:?}"));
    }
    let mut sorted = minimal.clone();
    sorted.sort();
    if sorted != ["K5minus", "S1", "S2", "S3", "S4"] {
        problems.push(format!("non-basic classes {minimal:?} do not match K5minus, S1..S4"));
    }
    Ok(ClassificationReport {
        pass: problems.is_empty(),
        minimal,
        basic,
        minimal_per_order,
        basic_per_order,
        problems,
        classes,
    })
}

/// One line of the collection atlas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasRecord {
    pub name: Option<String>,
    pub graph6: String,
    pub vertices: usize,
    pub edges: usize,
    pub edge_list: Vec<[usize; 2]>,
    pub collection: bool,
    pub very_basic: bool,
    pub basic: bool,
    pub basic_witness: Option<[[usize; 2]; 2]>,
    pub bunch: bool,
    pub m: Rational,
    pub verdicts: Verdicts,
}

impl From<&CollectionClass> for AtlasRecord {
    fn from(c: &CollectionClass) -> Self {
        AtlasRecord {
            name: c.name.clone(),
            graph6: to_graph6(&c.graph).expect("small graph"),
            vertices: c.v(),
            edges: c.e(),
            edge_list: c.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            collection: c.is_collection,
            very_basic: c.is_very_basic,
            basic: c.is_basic(),
            basic_witness: c.basic_witness.map(|(a, b)| [[a.0, a.1], [b.0, b.1]]),
            bunch: c.bunch_witness.is_some(),
            m: c.max_density,
            verdicts: c.verdicts,
        }
    }
}

impl AtlasRecord {
    pub fn graph(&self) -> Result<Graph> {
        from_graph6(&self.graph6)
    }
}

pub fn write_atlas(classes: &[CollectionClass], mut out: impl Write) -> Result<()> {
    for c in classes {
        serde_json::to_writer(&mut out, &AtlasRecord::from(c))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_atlas(path: &Path) -> Result<Vec<AtlasRecord>> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in f.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

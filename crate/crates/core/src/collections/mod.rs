//! Triangle collections: the triangle relation graph and the very basic,
//! basic, collection and bunch properties.

mod classes;
mod reduction;

pub use classes::{
    classify, enumerate_collections, named_collection, read_atlas, verify_classification, write_atlas,
    AtlasRecord, BasicFilter, ClassificationReport, CollectionClass, CollectionConstraints, Verdicts,
    NAMED_COLLECTIONS,
};
pub use reduction::{reduction_check, ReductionReport};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Triangles of a graph and the share-an-edge relation between them.
#[derive(Clone, Debug)]
pub struct TriangleGraph {
    pub triangles: Vec<[usize; 3]>,
    pub adj: Vec<Vec<usize>>,
}

pub fn triangle_graph(g: &Graph) -> TriangleGraph {
    let triangles = g.triangles();
    let t = triangles.len();
    let mut adj = vec![Vec::new(); t];
    for i in 0..t {
        for j in i + 1..t {
            let shared = triangles[i].iter().filter(|v| triangles[j].contains(v)).count();
            if shared == 2 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    TriangleGraph { triangles, adj }
}

impl TriangleGraph {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        component_ids(&self.adj).iter().all(|&c| c == 0)
    }

    /// Disjoint union of paths.
    pub fn is_linear_forest(&self) -> bool {
        if self.adj.iter().any(|a| a.len() > 2) {
            return false;
        }
        // a forest has |E| = |V| - components
        let comps = component_ids(&self.adj).into_iter().max().map_or(0, |c| c + 1);
        self.edge_count() + comps == self.len()
    }

    /// Embeds as a (not necessarily induced) subgraph of a triangle with a
    /// pendant edge.
    pub fn embeds_in_k3plus(&self) -> bool {
        const K3PLUS: [[bool; 4]; 4] =
            [[false, true, true, false], [true, false, true, false], [true, true, false, true], [false, false, true, false]];
        let t = self.len();
        if t > 4 {
            return false;
        }
        let mut image = vec![0usize; t];
        fn place(i: usize, image: &mut Vec<usize>, used: u8, adj: &[Vec<usize>]) -> bool {
            if i == image.len() {
                return true;
            }
            for slot in 0..4 {
                if used >> slot & 1 == 1 {
                    continue;
                }
                if adj[i].iter().filter(|&&j| j < i).all(|&j| K3PLUS[image[j]][slot]) {
                    image[i] = slot;
                    if place(i + 1, image, used | 1 << slot, adj) {
                        return true;
                    }
                }
            }
            false
        }
        place(0, &mut image, 0, &self.adj)
    }
}

fn component_ids(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut comp = vec![usize::MAX; adj.len()];
    let mut next = 0;
    for s in 0..adj.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Triangle graph is a linear forest or fits inside K3plus.
pub fn is_very_basic(g: &Graph) -> bool {
    let t = triangle_graph(g);
    t.is_linear_forest() || t.embeds_in_k3plus()
}

/// First pair of distinct edges `e1 < e2` (lexicographic) whose individual
/// removal leaves a very basic graph.
pub fn basic_witness(g: &Graph) -> Option<((usize, usize), (usize, usize))> {
    let good: Vec<(usize, usize)> =
        g.edges().into_iter().filter(|&(u, v)| is_very_basic(&g.without_edge(u, v))).collect();
    (good.len() >= 2).then(|| (good[0], good[1]))
}

pub fn is_basic(g: &Graph) -> bool {
    basic_witness(g).is_some()
}

/// Every edge in a triangle, no isolated vertices, at least one triangle,
/// and a connected triangle graph.
pub fn is_collection(g: &Graph) -> bool {
    if g.edge_count() == 0 || g.isolated_vertices() > 0 {
        return false;
    }
    let edges_in_triangles: HashSet<(usize, usize)> = g
        .triangles()
        .into_iter()
        .flat_map(|[a, b, c]| [(a, b), (a, c), (b, c)])
        .collect();
    if edges_in_triangles.len() != g.edge_count() {
        return false;
    }
    triangle_graph(g).is_connected()
}

fn tri_edges(t: [usize; 3]) -> [(usize, usize); 3] {
    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
}

/// A triangle sequence covering every edge where each triangle after the
/// first brings exactly one new vertex and at least two new edges.
pub fn bunch_witness(g: &Graph) -> Option<Vec<[usize; 3]>> {
    if !is_collection(g) || g.n() > 64 {
        return None;
    }
    let edges = g.edges();
    let eid = |u: usize, v: usize| edges.iter().position(|&e| e == (u.min(v), u.max(v))).unwrap();
    let tris: Vec<([usize; 3], u64, u128)> = g
        .triangles()
        .into_iter()
        .map(|t| {
            let vm = t.iter().fold(0u64, |m, &v| m | 1 << v);
            let em = tri_edges(t).iter().fold(0u128, |m, &(a, b)| m | 1 << eid(a, b));
            (t, vm, em)
        })
        .collect();
    if edges.len() > 128 {
        return None;
    }
    let all_v = (0..g.n()).fold(0u64, |m, v| m | 1 << v);
    let all_e = if edges.len() == 128 { !0u128 } else { (1u128 << edges.len()) - 1 };
    let mut failed: HashSet<(u64, u128)> = HashSet::new();
    fn rec(
        vm: u64,
        em: u128,
        seq: &mut Vec<[usize; 3]>,
        tris: &[([usize; 3], u64, u128)],
        goal: (u64, u128),
        failed: &mut HashSet<(u64, u128)>,
    ) -> bool {
        if (vm, em) == goal {
            return true;
        }
        if failed.contains(&(vm, em)) {
            return false;
        }
        for &(t, tv, te) in tris {
            if (tv & !vm).count_ones() == 1 && (te & !em).count_ones() >= 2 {
                seq.push(t);
                if rec(vm | tv, em | te, seq, tris, goal, failed) {
                    return true;
                }
                seq.pop();
            }
        }
        failed.insert((vm, em));
        false
    }
    for &(t, tv, te) in &tris {
        let mut seq = vec![t];
        if rec(tv, te, &mut seq, &tris, (all_v, all_e), &mut failed) {
            return Some(seq);
        }
    }
    None
}

/// Checks a bunch witness step by step.
pub fn check_bunch_sequence(g: &Graph, seq: &[[usize; 3]]) -> bool {
    let mut vs: HashSet<usize> = HashSet::new();
    let mut es: HashSet<(usize, usize)> = HashSet::new();
    for (i, &t) in seq.iter().enumerate() {
        if tri_edges(t).iter().any(|&(a, b)| !g.has_edge(a, b)) {
            return false;
        }
        let new_v = t.iter().filter(|v| !vs.contains(v)).count();
        let new_e = tri_edges(t).iter().filter(|e| !es.contains(e)).count();
        if (i > 0 && new_v != 1) || new_e < 2 {
            return false;
        }
        vs.extend(t);
        es.extend(tri_edges(t));
    }
    vs.len() == g.n() && es.len() == g.edge_count()
}

/// A spanning bunch inside a collection: triangles added one new vertex at
/// a time, each sharing an edge with the part built so far. Has at least
/// `2v - 3` edges.
pub fn find_bunch(g: &Graph) -> Result<(Graph, Vec<[usize; 3]>)> {
    if !is_collection(g) {
        return Err(Error::Precondition("graph is not a triangle collection".into()));
    }
    let tris = g.triangles();
    let n = g.n();
    let mut failed: HashSet<Vec<(usize, usize)>> = HashSet::new();
    fn rec(
        inside: &mut Vec<bool>,
        edges: &mut Vec<(usize, usize)>,
        seq: &mut Vec<[usize; 3]>,
        tris: &[[usize; 3]],
        failed: &mut HashSet<Vec<(usize, usize)>>,
    ) -> bool {
        if inside.iter().all(|&b| b) {
            return true;
        }
        let mut key = edges.clone();
        key.sort_unstable();
        if failed.contains(&key) {
            return false;
        }
        for &t in tris {
            let outside: Vec<usize> = t.iter().copied().filter(|&v| !inside[v]).collect();
            if outside.len() != 1 {
                continue;
            }
            let x = outside[0];
            let base: Vec<usize> = t.iter().copied().filter(|&v| v != x).collect();
            let (u, v) = (base[0], base[1]);
            if !edges.contains(&(u, v)) {
                continue;
            }
            inside[x] = true;
            edges.push((u.min(x), u.max(x)));
            edges.push((v.min(x), v.max(x)));
            seq.push(t);
            if rec(inside, edges, seq, tris, failed) {
                return true;
            }
            seq.pop();
            edges.truncate(edges.len() - 2);
            inside[x] = false;
        }
        failed.insert(key);
        false
    }
    for &t in &tris {
        let mut inside = vec![false; n];
        for &v in &t {
            inside[v] = true;
        }
        let mut edges: Vec<(usize, usize)> = tri_edges(t).to_vec();
        let mut seq = vec![t];
        if rec(&mut inside, &mut edges, &mut seq, &tris, &mut failed) {
            return Ok((Graph::from_edges(n, &edges)?, seq));
        }
        failed.clear();
    }
    Err(Error::Precondition("no spanning bunch found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn book() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn triangle_graphs() {
        let t = triangle_graph(&book());
        assert_eq!((t.len(), t.edge_count()), (2, 1));
        let t = triangle_graph(&named("K:4").unwrap());
        assert_eq!((t.len(), t.edge_count()), (4, 6));
        assert!(triangle_graph(&named("C:5").unwrap()).is_empty());
    }

    #[test]
    fn flags() {
        let b = book();
        assert!(is_very_basic(&b) && is_collection(&b) && bunch_witness(&b).is_some());
        let w4 = named("W:4").unwrap();
        assert!(is_collection(&w4) && !is_very_basic(&w4) && is_basic(&w4));
        let (e1, e2) = basic_witness(&w4).unwrap();
        assert!(e1.0 == 0 && e2.0 == 0, "spokes: {e1:?} {e2:?}");
        let k4 = named("K:4").unwrap();
        assert!(is_collection(&k4) && !is_very_basic(&k4) && bunch_witness(&k4).is_none());
        assert!(!is_basic(&named("K5minus").unwrap()));
        assert!(is_very_basic(&named("K3plus").unwrap()));
    }

    #[test]
    fn spanning_bunches() {
        for (name, min) in [("K:4", 5), ("K:3", 3), ("K5minus", 7), ("W:6", 11)] {
            let g = named(name).unwrap();
            let (b, seq) = find_bunch(&g).unwrap();
            assert!(b.edge_count() >= min && b.edge_count() >= 2 * g.n() - 3, "{name}");
            assert!(b.is_subgraph_of(&g));
            assert!(check_bunch_sequence(&b, &seq), "{name}");
        }
    }
}

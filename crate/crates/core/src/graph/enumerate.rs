//! Isomorph-free generation of graphs on a fixed vertex set by canonical
//! edge augmentation.
//!
//! A graph `H` produced as `G + e` is kept only when `e` lies in the
//! `Aut(H)`-orbit of `H`'s canonical deletion edge (the edge whose canonical
//! image comes first). Parents are expanded once per `Aut(G)`-orbit of
//! non-edges. Pruning predicates must be closed under edge deletion.

use rayon::prelude::*;

use super::canon::{canonize_rows, orbits_on_pairs};
use super::{Graph, Rational};
use crate::error::{Error, Result};

pub const MAX_ENUM_VERTICES: usize = 10;

/// Constraints on enumerated graphs.
///
/// `max_density` and the degree feasibility bound derived from
/// `min_degree`/`max_edges` prune during growth; the rest are checked on
/// output only.
#[derive(Clone, Debug)]
pub struct EnumerationFilter {
    pub min_edges: usize,
    pub max_edges: usize,
    pub min_degree: usize,
    pub every_edge_in_triangle: bool,
    pub connected: bool,
    /// `(bound, strict)`: keep graphs with `m(G) < bound` (strict) or `<=`.
    pub max_density: Option<(Rational, bool)>,
}

impl Default for EnumerationFilter {
    fn default() -> Self {
        EnumerationFilter {
            min_edges: 0,
            max_edges: usize::MAX,
            min_degree: 0,
            every_edge_in_triangle: false,
            connected: false,
            max_density: None,
        }
    }
}

impl EnumerationFilter {
    pub fn edges(mut self, lo: usize, hi: usize) -> Self {
        self.min_edges = lo;
        self.max_edges = hi;
        self
    }
}

/// One representative (in canonical labelling) per isomorphism class of
/// graphs on exactly `v` vertices satisfying `filter`, sorted by edge count
/// then canonical code.
pub fn enumerate_nonisomorphic(v: usize, filter: &EnumerationFilter) -> Result<Vec<Graph>> {
    if v > MAX_ENUM_VERTICES {
        return Err(Error::TooManyVertices { n: v, limit: MAX_ENUM_VERTICES });
    }
    let max_edges = filter.max_edges.min(v * v.saturating_sub(1) / 2);
    if filter.min_edges > max_edges {
        return Ok(Vec::new());
    }
    let ctx = Ctx { v, filter, max_edges };
    let root = Node { rows: vec![0u16; v], edges: 0, gens: canonize_rows(&vec![0u16; v]).1 };

    // Expand sequentially until there is enough work to shard.
    let mut found: Vec<(usize, u128, Vec<u16>)> = Vec::new();
    let mut frontier = vec![root];
    while !frontier.is_empty() && frontier.len() < 64 && frontier[0].edges < max_edges {
        let mut next = Vec::new();
        for node in &frontier {
            ctx.emit(node, &mut found);
            next.extend(ctx.children(node));
        }
        frontier = next;
    }
    let sharded: Vec<Vec<(usize, u128, Vec<u16>)>> = frontier
        .into_par_iter()
        .map(|node| {
            let mut out = Vec::new();
            ctx.dfs(node, &mut out);
            out
        })
        .collect();
    found.extend(sharded.into_iter().flatten());
    found.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    Ok(found.into_iter().map(|(_, _, rows)| rows_to_graph(&rows)).collect())
}

struct Node {
    rows: Vec<u16>,
    edges: usize,
    gens: Vec<Vec<u8>>,
}

struct Ctx<'a> {
    v: usize,
    filter: &'a EnumerationFilter,
    max_edges: usize,
}

impl Ctx<'_> {
    fn dfs(&self, node: Node, out: &mut Vec<(usize, u128, Vec<u16>)>) {
        self.emit(&node, out);
        if node.edges == self.max_edges {
            return;
        }
        for child in self.children(&node) {
            self.dfs(child, out);
        }
    }

    fn emit(&self, node: &Node, out: &mut Vec<(usize, u128, Vec<u16>)>) {
        if node.edges < self.filter.min_edges || !self.accept_final(&node.rows) {
            return;
        }
        let (cf, _) = canonize_rows(&node.rows);
        let g = cf.canonical_graph();
        let rows: Vec<u16> = (0..self.v).map(|u| g.row(u)[0] as u16).collect();
        out.push((node.edges, cf.code, rows));
    }

    fn children(&self, node: &Node) -> Vec<Node> {
        let v = self.v;
        if node.edges >= self.max_edges {
            return Vec::new();
        }
        let gens: Vec<Vec<usize>> = node.gens.iter().map(|g| g.iter().map(|&x| x as usize).collect()).collect();
        let orbit = orbits_on_pairs(v, &gens);
        let mut out = Vec::new();
        let mut slot = 0;
        for a in 0..v {
            for b in a + 1..v {
                let this = slot;
                slot += 1;
                if orbit[this] != this || node.rows[a] >> b & 1 == 1 {
                    continue;
                }
                let mut rows = node.rows.clone();
                rows[a] |= 1 << b;
                rows[b] |= 1 << a;
                if !self.prune_ok(&rows, node.edges + 1, a, b) {
                    continue;
                }
                let (cf, child_gens) = canonize_rows(&rows);
                let deletion = canonical_deletion(&rows, &cf.labeling);
                let child_gens_usize: Vec<Vec<usize>> =
                    child_gens.iter().map(|g| g.iter().map(|&x| x as usize).collect()).collect();
                let child_orbit = orbits_on_pairs(v, &child_gens_usize);
                if child_orbit[this] != child_orbit[deletion] {
                    continue;
                }
                out.push(Node { rows, edges: node.edges + 1, gens: child_gens });
            }
        }
        out
    }

    /// Checks that are inherited by every subgraph obtained by deleting edges.
    fn prune_ok(&self, rows: &[u16], edges: usize, a: usize, b: usize) -> bool {
        let f = self.filter;
        if f.min_degree > 0 && self.max_edges != usize::MAX {
            let deficit: usize = rows.iter().map(|r| f.min_degree.saturating_sub(r.count_ones() as usize)).sum();
            if deficit > 2 * (self.max_edges - edges) {
                return false;
            }
        }
        if let Some((bound, strict)) = f.max_density {
            // Only subsets containing the new edge can have gained density.
            let others: Vec<usize> = (0..self.v).filter(|&x| x != a && x != b).collect();
            for sub in 0u32..(1 << others.len()) {
                let mut mask: u16 = 1 << a | 1 << b;
                for (i, &x) in others.iter().enumerate() {
                    if sub >> i & 1 == 1 {
                        mask |= 1 << x;
                    }
                }
                let e: u32 = (0..self.v)
                    .filter(|&x| mask >> x & 1 == 1)
                    .map(|x| (rows[x] & mask).count_ones())
                    .sum::<u32>()
                    / 2;
                let lhs = e as i128 * bound.denom() as i128;
                let rhs = bound.numer() as i128 * mask.count_ones() as i128;
                if lhs > rhs || (strict && lhs == rhs) {
                    return false;
                }
            }
        }
        true
    }

    fn accept_final(&self, rows: &[u16]) -> bool {
        let f = self.filter;
        if rows.iter().any(|r| (r.count_ones() as usize) < f.min_degree) {
            return false;
        }
        let g = rows_to_graph(rows);
        if f.connected && !g.is_connected() {
            return false;
        }
        if f.every_edge_in_triangle {
            for (u, w) in g.edges() {
                if rows[u] & rows[w] == 0 {
                    return false;
                }
            }
        }
        true
    }
}

fn canonical_deletion(rows: &[u16], labeling: &[u8]) -> usize {
    let n = rows.len();
    let mut best: Option<(usize, usize)> = None;
    for u in 0..n {
        for w in u + 1..n {
            if rows[u] >> w & 1 == 1 {
                let key = Graph::pair_slot(n, labeling[u] as usize, labeling[w] as usize);
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, Graph::pair_slot(n, u, w)));
                }
            }
        }
    }
    best.expect("child has an edge").1
}

fn rows_to_graph(rows: &[u16]) -> Graph {
    let n = rows.len();
    let mut g = Graph::new(n).expect("small");
    for u in 0..n {
        for w in u + 1..n {
            if rows[u] >> w & 1 == 1 {
                g.add_edge(u, w);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::canonical_form;

    #[test]
    fn counts_of_all_graphs() {
        // OEIS A000088.
        for (v, count) in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156), (7, 1044)] {
            let all = enumerate_nonisomorphic(v, &EnumerationFilter::default()).unwrap();
            assert_eq!(all.len(), count, "v={v}");
        }
    }

    #[test]
    fn single_graph_with_nine_edges_on_five_vertices() {
        let f = EnumerationFilter::default().edges(9, 9);
        let gs = enumerate_nonisomorphic(5, &f).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(canonical_form(&gs[0]).unwrap(), canonical_form(&crate::graph::named("K5minus").unwrap()).unwrap());
    }

    #[test]
    fn density_pruning_matches_post_filter() {
        let bound: Rational = "3/2".parse().unwrap();
        let pruned = enumerate_nonisomorphic(
            6,
            &EnumerationFilter { max_density: Some((bound, false)), ..Default::default() },
        )
        .unwrap();
        let all = enumerate_nonisomorphic(6, &EnumerationFilter::default()).unwrap();
        let post: Vec<_> = all
            .into_iter()
            .filter(|g| g.edge_count() == 0 || crate::graph::max_density(g).unwrap() <= bound)
            .collect();
        assert_eq!(pruned, post);
    }

    #[test]
    fn cap() {
        assert!(enumerate_nonisomorphic(11, &EnumerationFilter::default()).is_err());
    }
}

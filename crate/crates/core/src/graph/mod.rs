//! Simple undirected graphs stored as adjacency bit rows, plus the named
//! boards used throughout the crate.

mod canon;
mod codec;
mod density;
mod enumerate;
mod rational;

pub use canon::{
    automorphism_generators, canonical_form, orbits_on_pairs, CanonicalForm, MAX_CANON_VERTICES,
};
pub use codec::{from_edge_list, from_graph6, to_edge_list, to_graph6};
pub use density::{density_and_max_density, max_density, DensityReport, MAX_DENSITY_VERTICES};
pub use enumerate::{enumerate_nonisomorphic, EnumerationFilter, MAX_ENUM_VERTICES};
pub use rational::Rational;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex limit for any board. Exact search paths impose tighter caps.
pub const MAX_VERTICES: usize = 256;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    m: usize,
    partition: Option<Vec<u16>>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, limit: MAX_VERTICES });
        }
        let words = n.div_ceil(64).max(1);
        Ok(Graph { n, words, adj: vec![0; n * words], m: 0, partition: None })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidParameters(format!("self-loop at {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidParameters(format!("edge {u}-{v} out of range for n={n}")));
            }
            if !g.add_edge(u, v) {
                return Err(Error::InvalidParameters(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(g)
    }

    /// Complete graph.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adds `uv`; returns false when it was already present.
    ///
    /// Panics on self-loops or out-of-range vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n, "bad edge {u}-{v}");
        if self.has_edge(u, v) {
            return false;
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        self.m += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        self.adj[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.words + u / 64] &= !(1 << (u % 64));
        self.m -= 1;
        true
    }

    /// Adjacency row of `u` as bit words.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    /// Adjacency row as a single word. Only valid for `n <= 64`.
    #[inline]
    pub fn row64(&self, u: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.adj[u * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(w, &bits)| BitIter(bits).map(move |b| w * 64 + b))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order. This order
    /// defines edge ids on game boards.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Position of the pair `{u, v}` among all `n(n-1)/2` slots in
    /// lexicographic order.
    pub fn pair_slot(n: usize, u: usize, v: usize) -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        u * (2 * n - u - 1) / 2 + (v - u - 1)
    }

    pub fn partition(&self) -> Option<&[u16]> {
        self.partition.as_deref()
    }

    /// Attaches a vertex partition. Classes must be near-equal in size and
    /// contain no edges.
    pub fn with_partition(mut self, classes: Vec<u16>) -> Result<Self> {
        if classes.len() != self.n {
            return Err(Error::InvalidParameters(format!(
                "partition has {} entries for {} vertices",
                classes.len(),
                self.n
            )));
        }
        let k = classes.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut sizes = vec![0usize; k];
        for &c in &classes {
            sizes[c as usize] += 1;
        }
        let (lo, hi) = (sizes.iter().min().copied().unwrap_or(0), sizes.iter().max().copied().unwrap_or(0));
        if hi - lo > 1 {
            return Err(Error::InvalidParameters(format!("class sizes {sizes:?} are not balanced")));
        }
        for (u, v) in self.edges() {
            if classes[u] == classes[v] {
                return Err(Error::InvalidParameters(format!("edge {u}-{v} lies inside class {}", classes[u])));
            }
        }
        self.partition = Some(classes);
        Ok(self)
    }

    pub fn class_count(&self) -> usize {
        self.partition.as_ref().map_or(0, |p| p.iter().map(|&c| c as usize + 1).max().unwrap_or(0))
    }

    pub fn without_partition(mut self) -> Self {
        self.partition = None;
        self
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the
    /// given order. The partition is dropped.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len()).expect("subgraph is smaller");
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Image of the graph under `perm`, where vertex `u` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::new(self.n).expect("same size");
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        if let Some(p) = &self.partition {
            let mut classes = vec![0u16; self.n];
            for u in 0..self.n {
                classes[perm[u]] = p[u];
            }
            g.partition = Some(classes);
        }
        g
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.remove_edge(u, v);
        g
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n <= other.n && self.edges().iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// All triangles as sorted vertex triples, lexicographic.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u).filter(|&v| v > u) {
                let common = self.row(u).iter().zip(self.row(v)).enumerate();
                for (w_idx, (a, b)) in common {
                    for bit in BitIter(a & b) {
                        let w = w_idx * 64 + bit;
                        if w > v {
                            out.push([u, v, w]);
                        }
                    }
                }
            }
        }
        out
    }

    /// All `k`-cliques as increasing vertex lists, lexicographic.
    pub fn k_cliques(&self, k: usize) -> Vec<Vec<usize>> {
        fn grow(g: &Graph, k: usize, cur: &mut Vec<usize>, cand: Vec<u64>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for (w, &bits) in cand.iter().enumerate() {
                for b in BitIter(bits) {
                    let v = w * 64 + b;
                    let next: Vec<u64> = cand
                        .iter()
                        .zip(g.row(v))
                        .enumerate()
                        .map(|(i, (&c, &r))| {
                            // keep only candidates above v
                            let above = if i < w { 0 } else if i > w { !0 } else if b == 63 { 0 } else { !0u64 << (b + 1) };
                            c & r & above
                        })
                        .collect();
                    cur.push(v);
                    grow(g, k, cur, next, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut all = vec![0u64; self.words];
        for v in 0..self.n {
            all[v / 64] |= 1 << (v % 64);
        }
        grow(self, k, &mut Vec::with_capacity(k), all, &mut out);
        out
    }

    pub fn density(&self) -> Result<Rational> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        Rational::new(self.m as i64, self.n as i64)
    }

    pub fn isolated_vertices(&self) -> usize {
        (0..self.n).filter(|&u| self.degree(u) == 0).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?}", self.n, self.edges())?;
        if let Some(p) = &self.partition {
            write!(f, ", classes={p:?}")?;
        }
        write!(f, ")")
    }
}

/// Iterates set bit positions of a word, lowest first.
#[derive(Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Names accepted by [`build_named_graph`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedGraph {
    Complete(usize),
    Wheel(usize),
    K5Minus,
    Cycle(usize),
    Path(usize),
    K3Plus,
    Turan(usize, usize),
}

impl std::str::FromStr for NamedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| Error::InvalidParameters(format!("`{s}` is missing a parameter")))?
                .parse()
                .map_err(|_| Error::InvalidParameters(format!("bad number in `{s}`")))
        };
        let exact = |len: usize| -> Result<()> {
            if parts.len() == len {
                Ok(())
            } else {
                Err(Error::InvalidParameters(format!("`{s}` expects {} parameter(s)", len - 1)))
            }
        };
        let named = match parts[0].to_ascii_lowercase().as_str() {
            "k" => {
                exact(2)?;
                NamedGraph::Complete(num(1)?)
            }
            "w" => {
                exact(2)?;
                NamedGraph::Wheel(num(1)?)
            }
            "c" => {
                exact(2)?;
                NamedGraph::Cycle(num(1)?)
            }
            "p" => {
                exact(2)?;
                NamedGraph::Path(num(1)?)
            }
            "turan" => {
                exact(3)?;
                NamedGraph::Turan(num(1)?, num(2)?)
            }
            "k5minus" | "k5-" => {
                exact(1)?;
                NamedGraph::K5Minus
            }
            "k3plus" | "k3+" => {
                exact(1)?;
                NamedGraph::K3Plus
            }
            _ => return Err(Error::UnknownGraph(s.to_string())),
        };
        Ok(named)
    }
}

/// Builds one of the catalogued boards.
///
/// `W:k` has its center at vertex 0 and rim cycle `1..=k`; `K5minus` is
/// `K5` without the edge `3-4`; `K3plus` is the triangle `012` with the
/// pendant edge `2-3`; `turan:n:k` splits `0..n` into `k` contiguous
/// classes, larger classes first.
pub fn build_named_graph(name: &NamedGraph) -> Result<Graph> {
    let check = |n: usize| {
        if n > 64 {
            Err(Error::TooManyVertices { n, limit: 64 })
        } else {
            Ok(())
        }
    };
    match *name {
        NamedGraph::Complete(n) => {
            check(n)?;
            Graph::complete(n)
        }
        NamedGraph::Wheel(k) => {
            if k < 3 {
                return Err(Error::InvalidParameters("wheel needs k >= 3".into()));
            }
            check(k + 1)?;
            let mut g = Graph::new(k + 1)?;
            for i in 1..=k {
                g.add_edge(0, i);
                g.add_edge(i, if i == k { 1 } else { i + 1 });
            }
            Ok(g)
        }
        NamedGraph::K5Minus => {
            let mut g = Graph::complete(5)?;
            g.remove_edge(3, 4);
            Ok(g)
        }
        NamedGraph::Cycle(k) => {
            if k < 3 {
                return Err(Error::InvalidParameters("cycle needs k >= 3".into()));
            }
            check(k)?;
            let mut g = Graph::new(k)?;
            for i in 0..k {
                g.add_edge(i, (i + 1) % k);
            }
            Ok(g)
        }
        NamedGraph::Path(k) => {
            if k < 1 {
                return Err(Error::InvalidParameters("path needs k >= 1".into()));
            }
            check(k)?;
            let mut g = Graph::new(k)?;
            for i in 1..k {
                g.add_edge(i - 1, i);
            }
            Ok(g)
        }
        NamedGraph::K3Plus => Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]),
        NamedGraph::Turan(n, k) => {
            if k == 0 || k > n {
                return Err(Error::InvalidParameters(format!("turan:{n}:{k} needs 1 <= k <= n")));
            }
            check(n)?;
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
    }
}

/// Class index per vertex for the Turán split of `0..n` into `k` blocks.
pub fn turan_classes(n: usize, k: usize) -> Vec<u16> {
    let (q, r) = (n / k, n % k);
    let mut classes = Vec::with_capacity(n);
    for c in 0..k {
        let size = q + usize::from(c < r);
        classes.extend(std::iter::repeat(c as u16).take(size));
    }
    classes
}

/// Convenience wrapper: parse then build.
pub fn named(name: &str) -> Result<Graph> {
    build_named_graph(&name.parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sizes() {
        let k4 = named("K:4").unwrap();
        assert_eq!((k4.n(), k4.edge_count()), (4, 6));
        let t = named("turan:6:3").unwrap();
        assert_eq!((t.n(), t.edge_count()), (6, 12));
        assert_eq!(t.partition().unwrap(), &[0, 0, 1, 1, 2, 2]);
        let w4 = named("W:4").unwrap();
        assert_eq!((w4.n(), w4.edge_count()), (5, 8));
        let tri = w4.triangles();
        assert_eq!(tri.len(), 4);
        assert!(tri.iter().all(|t| t[0] == 0));
        assert_eq!(named("K5minus").unwrap().edge_count(), 9);
        assert_eq!(named("K3plus").unwrap().edge_count(), 4);
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(named("Q:3"), Err(Error::UnknownGraph(_))));
        assert!(matches!(named("K:65"), Err(Error::TooManyVertices { .. })));
        assert!(named("W:2").is_err());
        assert!(named("turan:3:5").is_err());
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(named("K:4").unwrap().triangles().len(), 4);
        assert_eq!(named("C:5").unwrap().triangles().len(), 0);
        assert_eq!(named("K:6").unwrap().triangles(), {
            let mut v = Vec::new();
            for a in 0..6 {
                for b in a + 1..6 {
                    for c in b + 1..6 {
                        v.push([a, b, c]);
                    }
                }
            }
            v
        });
    }

    #[test]
    fn wide_rows() {
        let mut g = Graph::new(130).unwrap();
        g.add_edge(0, 129);
        g.add_edge(64, 129);
        g.add_edge(0, 64);
        assert_eq!(g.neighbors(129).collect::<Vec<_>>(), vec![0, 64]);
        assert_eq!(g.triangles(), vec![[0, 64, 129]]);
        assert_eq!(g.edges(), vec![(0, 64), (0, 129), (64, 129)]);
    }

    #[test]
    fn partition_rules() {
        let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
        assert!(g.clone().with_partition(vec![0, 0, 1, 1]).is_err());
        assert!(g.clone().with_partition(vec![0, 1, 1, 1]).is_err());
        assert!(g.with_partition(vec![0, 1, 0, 1]).is_ok());
    }

    #[test]
    fn pair_slots_are_lexicographic() {
        let n = 6;
        let mut expect = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(Graph::pair_slot(n, u, v), expect);
                assert_eq!(Graph::pair_slot(n, v, u), expect);
                expect += 1;
            }
        }
    }
}

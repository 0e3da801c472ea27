//! Canonical labelling by partition refinement and individualization, with
//! pruning by automorphisms discovered during the search.

use std::fmt;
use std::hash::{Hash, Hasher};

use super::Graph;
use crate::error::{Error, Result};

pub const MAX_CANON_VERTICES: usize = 16;

/// Canonical representative of an isomorphism class.
///
/// Equality and hashing look only at `(n, code)`; `labeling` is the map
/// taking the input graph onto the canonical graph.
#[derive(Clone)]
pub struct CanonicalForm {
    pub n: u8,
    /// Adjacency of the canonical graph, one bit per vertex pair; the pair
    /// `(0, 1)` is the most significant used bit.
    pub code: u128,
    /// `labeling[v]` is the canonical label of input vertex `v`.
    pub labeling: Vec<u8>,
}

impl CanonicalForm {
    pub fn key(&self) -> (u8, u128) {
        (self.n, self.code)
    }

    pub fn canonical_graph(&self) -> Graph {
        let n = self.n as usize;
        let pairs = n * n.saturating_sub(1) / 2;
        let mut g = Graph::new(n).expect("canonical size is small");
        let mut slot = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.code >> (pairs - 1 - slot) & 1 == 1 {
                    g.add_edge(i, j);
                }
                slot += 1;
            }
        }
        g
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm(n={}, code={:#x})", self.n, self.code)
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    Ok(canonize(g)?.0)
}

/// Generators of the automorphism group; `perm[v]` is the image of `v`.
pub fn automorphism_generators(g: &Graph) -> Result<Vec<Vec<usize>>> {
    Ok(canonize(g)?.1.into_iter().map(|p| p.into_iter().map(usize::from).collect()).collect())
}

pub(crate) fn canonize(g: &Graph) -> Result<(CanonicalForm, Vec<Vec<u8>>)> {
    let n = g.n();
    if n > MAX_CANON_VERTICES {
        return Err(Error::TooManyVertices { n, limit: MAX_CANON_VERTICES });
    }
    let rows: Vec<u16> = (0..n).map(|u| g.row(u)[0] as u16).collect();
    Ok(canonize_rows(&rows))
}

pub(crate) fn canonize_rows(rows: &[u16]) -> (CanonicalForm, Vec<Vec<u8>>) {
    let n = rows.len();
    let mut search = Search { rows, n, best: None, autos: Vec::new() };
    let root: Vec<Vec<u8>> = if n == 0 { Vec::new() } else { vec![(0..n as u8).collect()] };
    search.dfs(root, &mut Vec::new());
    let (code, labeling) = search.best.unwrap_or((0, Vec::new()));
    (CanonicalForm { n: n as u8, code, labeling }, search.autos)
}

struct Search<'a> {
    rows: &'a [u16],
    n: usize,
    best: Option<(u128, Vec<u8>)>,
    autos: Vec<Vec<u8>>,
}

impl Search<'_> {
    fn dfs(&mut self, mut cells: Vec<Vec<u8>>, prefix: &mut Vec<u8>) {
        refine(self.rows, &mut cells);
        if cells.len() == self.n {
            self.leaf(&cells);
            return;
        }
        let target = cells.iter().position(|c| c.len() > 1).expect("partition is not discrete");
        let cell = cells[target].clone();
        let mut explored: Vec<u8> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() {
                let orbit = self.stabilizer_orbits(prefix);
                if explored.iter().any(|&w| orbit[w as usize] == orbit[v as usize]) {
                    continue;
                }
            }
            explored.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend(cells[..target].iter().cloned());
            next.push(vec![v]);
            next.push(cell.iter().copied().filter(|&w| w != v).collect());
            next.extend(cells[target + 1..].iter().cloned());
            prefix.push(v);
            self.dfs(next, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, cells: &[Vec<u8>]) {
        let n = self.n;
        let mut labeling = vec![0u8; n];
        for (label, cell) in cells.iter().enumerate() {
            labeling[cell[0] as usize] = label as u8;
        }
        let code = encode(self.rows, &labeling);
        match &self.best {
            None => self.best = Some((code, labeling)),
            Some((best_code, _)) if code > *best_code => self.best = Some((code, labeling)),
            Some((best_code, best_lab)) if code == *best_code => {
                let mut inverse = vec![0u8; n];
                for (v, &l) in best_lab.iter().enumerate() {
                    inverse[l as usize] = v as u8;
                }
                let perm: Vec<u8> = labeling.iter().map(|&l| inverse[l as usize]).collect();
                if perm.iter().enumerate().any(|(i, &p)| i as u8 != p) && !self.autos.contains(&perm) {
                    self.autos.push(perm);
                }
            }
            _ => {}
        }
    }

    /// Orbit representative per vertex under the automorphisms found so far
    /// that fix every vertex of `prefix`.
    fn stabilizer_orbits(&self, prefix: &[u8]) -> Vec<u8> {
        let mut parent: Vec<u8> = (0..self.n as u8).collect();
        for g in &self.autos {
            if prefix.iter().all(|&p| g[p as usize] == p) {
                for v in 0..self.n {
                    union(&mut parent, v as u8, g[v]);
                }
            }
        }
        (0..self.n as u8).map(|v| find(&mut parent, v)).collect()
    }
}

fn find(parent: &mut [u8], mut v: u8) -> u8 {
    while parent[v as usize] != v {
        parent[v as usize] = parent[parent[v as usize] as usize];
        v = parent[v as usize];
    }
    v
}

fn union(parent: &mut [u8], a: u8, b: u8) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

fn encode(rows: &[u16], labeling: &[u8]) -> u128 {
    let n = rows.len();
    let pairs = n * n.saturating_sub(1) / 2;
    let mut code = 0u128;
    for u in 0..n {
        let mut r = rows[u] as u32 & !((1u32 << (u + 1)) - 1);
        while r != 0 {
            let v = r.trailing_zeros() as usize;
            r &= r - 1;
            let slot = Graph::pair_slot(n, labeling[u] as usize, labeling[v] as usize);
            code |= 1u128 << (pairs - 1 - slot);
        }
    }
    code
}

/// Equitable refinement of an ordered partition. Each cell is split by the
/// vector of neighbour counts into every current cell; sub-cells are ordered
/// by that vector, so the result depends only on structure.
fn refine(rows: &[u16], cells: &mut Vec<Vec<u8>>) {
    loop {
        let masks: Vec<u16> = cells.iter().map(|c| c.iter().fold(0u16, |m, &v| m | 1 << v)).collect();
        let k = cells.len();
        let mut next: Vec<Vec<u8>> = Vec::with_capacity(k);
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<([u8; MAX_CANON_VERTICES], u8)> = cell
                .iter()
                .map(|&v| {
                    let mut sig = [0u8; MAX_CANON_VERTICES];
                    for (j, &m) in masks.iter().enumerate() {
                        sig[j] = (rows[v as usize] & m).count_ones() as u8;
                    }
                    (sig, v)
                })
                .collect();
            keyed.sort_unstable();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                    start = i;
                }
            }
        }
        let done = next.len() == k;
        *cells = next;
        if done {
            return;
        }
    }
}

/// Orbit representative (smallest slot) for each vertex pair slot under the
/// group generated by `gens`.
pub fn orbits_on_pairs(n: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut parent: Vec<usize> = (0..pairs).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for u in 0..n {
            for v in u + 1..n {
                let a = root(&mut parent, Graph::pair_slot(n, u, v));
                let b = root(&mut parent, Graph::pair_slot(n, g[u], g[v]));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
    }
    (0..pairs).map(|x| root(&mut parent, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use std::collections::HashSet;

    fn group_order(n: usize, gens: &[Vec<usize>]) -> usize {
        let id: Vec<usize> = (0..n).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn automorphism_group_orders() {
        let k4 = named("K:4").unwrap();
        assert_eq!(group_order(4, &automorphism_generators(&k4).unwrap()), 24);
        let w4 = named("W:4").unwrap();
        let gens = automorphism_generators(&w4).unwrap();
        assert!(gens.iter().all(|g| g[0] == 0));
        assert_eq!(group_order(5, &gens), 8);
        let p3 = named("P:3").unwrap();
        assert_eq!(group_order(3, &automorphism_generators(&p3).unwrap()), 2);
    }

    #[test]
    fn k5minus_differs_from_k5() {
        let a = canonical_form(&named("K5minus").unwrap()).unwrap();
        let b = canonical_form(&named("K:5").unwrap()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn canonical_graph_is_relabelled_input() {
        let g = named("W:5").unwrap();
        let cf = canonical_form(&g).unwrap();
        let perm: Vec<usize> = cf.labeling.iter().map(|&l| l as usize).collect();
        assert_eq!(g.relabel(&perm), cf.canonical_graph());
    }

    #[test]
    fn size_cap() {
        assert!(canonical_form(&Graph::new(17).unwrap()).is_err());
    }
}

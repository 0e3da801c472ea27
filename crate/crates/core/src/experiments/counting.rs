use serde::{Deserialize, Serialize};

use super::turan_graph;
use crate::error::{Error, Result};
use crate::graph::{BitIter, Graph};

/// Cliques on `k` vertices using at most one vertex per class.
pub fn count_good_copies(g: &Graph, k: usize) -> Result<u64> {
    let classes = g.partition().ok_or_else(|| Error::Precondition("board has no partition".into()))?;
    if k == 0 {
        return Ok(1);
    }
    let words = g.n().div_ceil(64).max(1);
    fn rec(g: &Graph, classes: &[u16], cand: &[u64], left: usize, used: &mut Vec<u16>) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for (w, &bits) in cand.iter().enumerate() {
            for b in BitIter(bits) {
                let v = w * 64 + b;
                if used.contains(&classes[v]) {
                    continue;
                }
                // only larger vertices next, so each clique is counted once
                let next: Vec<u64> = cand
                    .iter()
                    .zip(g.row(v))
                    .enumerate()
                    .map(|(i, (&c, &r))| {
                        let above = if i < w {
                            0
                        } else if i == w {
                            if b == 63 { 0 } else { !0u64 << (b + 1) }
                        } else {
                            !0
                        };
                        c & r & above
                    })
                    .collect();
                used.push(classes[v]);
                total += rec(g, classes, &next, left - 1, used);
                used.pop();
            }
        }
        total
    }
    let mut all = vec![!0u64; words];
    let tail = g.n() % 64;
    if tail != 0 {
        all[words - 1] = (1u64 << tail) - 1;
    }
    if g.n() == 0 {
        return Ok(0);
    }
    Ok(rec(g, classes, &all, k, &mut Vec::new()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairIntersectionRow {
    pub t: usize,
    /// Ordered pairs of good copies meeting in exactly `t` vertices.
    pub count: u64,
    /// `n^(2k - t)`.
    pub bound: u128,
    pub holds: bool,
}

/// Exact double count over the good copies of `K_k` in `T(n, k)`.
pub fn pair_intersection_stats(n: usize, k: usize) -> Result<Vec<PairIntersectionRow>> {
    if n > 12 || !(2..=6).contains(&k) || k > n {
        return Err(Error::InvalidParameters(format!("pair statistics need k in 2..=6 and k <= n <= 12, got n={n} k={k}")));
    }
    let g = turan_graph(n, k)?;
    let classes = g.partition().unwrap();
    let mut copies: Vec<u64> = Vec::new();
    let members: Vec<Vec<usize>> = (0..k).map(|c| (0..n).filter(|&v| classes[v] as usize == c).collect()).collect();
    fn build(c: usize, mask: u64, members: &[Vec<usize>], out: &mut Vec<u64>) {
        if c == members.len() {
            out.push(mask);
            return;
        }
        for &v in &members[c] {
            build(c + 1, mask | 1 << v, members, out);
        }
    }
    build(0, 0, &members, &mut copies);
    let mut counts = vec![0u64; k + 1];
    for &a in &copies {
        for &b in &copies {
            counts[(a & b).count_ones() as usize] += 1;
        }
    }
    Ok((2..=k)
        .map(|t| {
            let bound = (n as u128).pow((2 * k - t) as u32);
            PairIntersectionRow { t, count: counts[t], bound, holds: counts[t] as u128 <= bound }
        })
        .collect())
}

/// Whether `g` has a (not necessarily induced) subgraph isomorphic to `h`.
pub fn contains_subgraph(g: &Graph, h: &Graph) -> bool {
    let k = h.n();
    if k == 0 {
        return true;
    }
    if k > g.n() || h.edge_count() > g.edge_count() {
        return false;
    }
    // most constrained first: each next vertex has the most placed neighbours
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (h.neighbors(v).filter(|&w| placed[w]).count(), h.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let back: Vec<Vec<usize>> =
        order.iter().enumerate().map(|(i, &v)| (0..i).filter(|&j| h.has_edge(v, order[j])).collect()).collect();
    let words = g.n().div_ceil(64);
    let mut img = vec![0usize; k];
    fn rec(i: usize, g: &Graph, h: &Graph, order: &[usize], back: &[Vec<usize>], img: &mut Vec<usize>, words: usize) -> bool {
        if i == order.len() {
            return true;
        }
        let mut cand = vec![!0u64; words];
        for &j in &back[i] {
            for (c, r) in cand.iter_mut().zip(g.row(img[j])) {
                *c &= r;
            }
        }
        for &u in &img[..i] {
            cand[u / 64] &= !(1u64 << (u % 64));
        }
        let need = h.degree(order[i]);
        for (w, &bits) in cand.iter().enumerate() {
            for b in BitIter(bits) {
                let v = w * 64 + b;
                if v >= g.n() || g.degree(v) < need {
                    continue;
                }
                img[i] = v;
                if rec(i + 1, g, h, order, back, img, words) {
                    return true;
                }
            }
        }
        false
    }
    rec(0, g, h, &order, &back, &mut img, words)
}

//! Text formats: a plain edge list and graph6.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

/// `"n m"`, then one `"u v"` line per edge in lexicographic order, then an
/// optional `"classes k"` trailer with one class index per line.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    if let Some(p) = g.partition() {
        writeln!(s, "classes {}", g.class_count()).unwrap();
        for c in p {
            writeln!(s, "{c}").unwrap();
        }
    }
    s
}

pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let nums = parse_ints(header).ok_or_else(|| perr(hline, "malformed header"))?;
    let [n, m] = nums[..] else {
        return Err(perr(hline, "malformed header"));
    };
    let mut g = Graph::new(n)?;
    for _ in 0..m {
        let (ln, l) = lines.next().ok_or_else(|| perr(hline, "fewer edge lines than declared"))?;
        let Some(&[u, v]) = parse_ints(l).as_deref() else {
            return Err(perr(ln, "malformed edge line"));
        };
        if u == v {
            return Err(perr(ln, "self-loop"));
        }
        if u >= n || v >= n {
            return Err(perr(ln, "vertex index out of range"));
        }
        if !g.add_edge(u, v) {
            return Err(perr(ln, "duplicate edge"));
        }
    }
    if let Some((ln, l)) = lines.next() {
        let k: usize = l
            .strip_prefix("classes")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| perr(ln, "unexpected trailing line"))?;
        let mut classes = Vec::with_capacity(n);
        for _ in 0..n {
            let (cl, c) = lines.next().ok_or_else(|| perr(ln, "partition trailer too short"))?;
            let c: usize = c.parse().map_err(|_| perr(cl, "malformed class index"))?;
            if c >= k {
                return Err(perr(cl, "class index out of range"));
            }
            classes.push(c as u16);
        }
        if let Some((extra, _)) = lines.next() {
            return Err(perr(extra, "unexpected trailing line"));
        }
        g = g.with_partition(classes)?;
    }
    Ok(g)
}

fn parse_ints(line: &str) -> Option<Vec<usize>> {
    line.split_whitespace().map(|t| t.parse().ok()).collect()
}

/// Standard graph6 for `n <= 62`.
pub fn to_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > 62 {
        return Err(Error::TooManyVertices { n, limit: 62 });
    }
    let mut bytes = vec![n as u8 + 63];
    let mut acc = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | g.has_edge(u, v) as u8;
            k += 1;
            if k == 6 {
                bytes.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        bytes.push((acc << (6 - k)) + 63);
    }
    Ok(String::from_utf8(bytes).expect("printable ASCII"))
}

pub fn from_graph6(text: &str) -> Result<Graph> {
    let s = text.trim().strip_prefix(">>graph6<<").unwrap_or(text.trim()).as_bytes();
    let perr = |msg: &str| Error::Parse { line: 1, msg: msg.to_string() };
    let (&first, body) = s.split_first().ok_or_else(|| perr("empty graph6 string"))?;
    if !(63..=125).contains(&first) {
        return Err(perr("unsupported graph6 size prefix"));
    }
    let n = (first - 63) as usize;
    let pairs = n * n.saturating_sub(1) / 2;
    if body.len() != pairs.div_ceil(6) {
        return Err(perr("graph6 body has wrong length"));
    }
    let mut g = Graph::new(n)?;
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            let b = body[idx / 6];
            if !(63..=126).contains(&b) {
                return Err(perr("invalid graph6 character"));
            }
            if (b - 63) >> (5 - idx % 6) & 1 == 1 {
                g.add_edge(u, v);
            }
            idx += 1;
        }
    }
    Ok(g)
}

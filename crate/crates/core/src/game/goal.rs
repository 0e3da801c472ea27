use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tournament on goal vertices `0..k`, stored as out-neighbour masks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tournament {
    out: Vec<u16>,
}

impl Tournament {
    /// `arcs[i][j]` means `i -> j`.
    pub fn from_matrix(arcs: &[Vec<bool>]) -> Result<Self> {
        let k = arcs.len();
        if !(3..=8).contains(&k) {
            return Err(Error::InvalidGoal(format!("tournament on {k} vertices, need 3..=8")));
        }
        let mut out = vec![0u16; k];
        for i in 0..k {
            if arcs[i].len() != k {
                return Err(Error::InvalidGoal("tournament matrix is not square".into()));
            }
            for j in 0..k {
                let (a, b) = (arcs[i][j], arcs[j][i]);
                if i == j && a {
                    return Err(Error::InvalidGoal(format!("loop at {i}")));
                }
                if i != j && a == b {
                    return Err(Error::InvalidGoal(format!("pair {i},{j} is not oriented exactly once")));
                }
                if a {
                    out[i] |= 1 << j;
                }
            }
        }
        Ok(Tournament { out })
    }

    /// Parses `k` rows of `0`/`1` digits (whitespace optional).
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<bool>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::InvalidGoal(format!("bad matrix entry `{c}`"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Tournament::from_matrix(&rows)
    }

    pub fn cyclic_triangle() -> Self {
        Tournament { out: vec![0b010, 0b100, 0b001] }
    }

    /// The transitive tournament `i -> j` for `i < j`.
    pub fn transitive(k: usize) -> Self {
        Tournament { out: (0..k).map(|i| ((1u16 << k) - 1) & !((1u16 << (i + 1)) - 1)).collect() }
    }

    pub fn k(&self) -> usize {
        self.out.len()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.out[i] >> j & 1 == 1
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let k = self.k();
        (0..k).flat_map(|i| (0..k).filter(move |&j| self.has_arc(i, j)).map(move |j| (i, j))).collect()
    }
}

/// What Maker is trying to build.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Goal {
    Clique(usize),
    /// A `k`-clique using at most one vertex per partition class.
    GoodClique(usize),
    Tournament(Tournament),
}

impl Goal {
    pub fn tc() -> Self {
        Goal::Tournament(Tournament::cyclic_triangle())
    }

    pub fn ta() -> Self {
        Goal::Tournament(Tournament::transitive(3))
    }

    pub fn k(&self) -> usize {
        match self {
            Goal::Clique(k) | Goal::GoodClique(k) => *k,
            Goal::Tournament(t) => t.k(),
        }
    }

    pub fn is_oriented(&self) -> bool {
        matches!(self, Goal::Tournament(_))
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if !(3..=8).contains(&k) {
            return Err(Error::InvalidGoal(format!("goal size {k}, need 3..=8")));
        }
        Ok(())
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Clique(k) => write!(f, "clique:{k}"),
            Goal::GoodClique(k) => write!(f, "good-clique:{k}"),
            Goal::Tournament(t) if *t == Tournament::cyclic_triangle() => write!(f, "tc"),
            Goal::Tournament(t) if *t == Tournament::transitive(3) => write!(f, "ta"),
            Goal::Tournament(t) => write!(f, "tournament{:?}", t.arcs()),
        }
    }
}

/// Accepts `clique:k`, `good-clique:k`, `tc`, `ta`.
impl FromStr for Goal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let goal = match lower.split_once(':') {
            None if lower == "tc" => Goal::tc(),
            None if lower == "ta" => Goal::ta(),
            Some(("clique", k)) => Goal::Clique(parse_k(k)?),
            Some(("good-clique", k)) => Goal::GoodClique(parse_k(k)?),
            _ => return Err(Error::InvalidGoal(s.to_string())),
        };
        goal.validate()?;
        Ok(goal)
    }
}

fn parse_k(k: &str) -> Result<usize> {
    k.parse().map_err(|_| Error::InvalidGoal(format!("bad size `{k}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_goals() {
        assert_eq!("tc".parse::<Goal>().unwrap(), Goal::tc());
        assert_eq!("clique:4".parse::<Goal>().unwrap(), Goal::Clique(4));
        assert!("clique:2".parse::<Goal>().is_err());
        assert!("square".parse::<Goal>().is_err());
    }

    #[test]
    fn tournament_matrix() {
        let t = Tournament::parse("010\n001\n100\n").unwrap();
        assert_eq!(t, Tournament::cyclic_triangle());
        assert!(Tournament::parse("011\n001\n100\n").is_err());
        assert_eq!(Tournament::transitive(3).arcs(), vec![(0, 1), (0, 2), (1, 2)]);
    }
}

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact non-negative ratio used for graph densities.
///
/// Always stored in lowest terms with a positive denominator; ordering is
/// exact (cross multiplication), there is no floating point path.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidParameters("zero denominator".into()));
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(Ratio::from_integer(v))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Lossy conversion for reports and plots only.
    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numer() as i128 * other.denom() as i128;
        let rhs = other.numer() as i128 * self.denom() as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("not a rational: `{s}`"));
        match s.trim().split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                Rational::new(p, q)
            }
            None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

//! Exact non-negative rationals used for means, thresholds and ratios.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A non-negative rational number kept in lowest terms.
///
/// Comparisons are exact, so a count `c` is at or above a threshold `n/d`
/// exactly when `c * d >= n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<u64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`: expected `n` or `n/d` with d > 0")]
pub struct ParseRationalError(String);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Builds `numer / denom`, reduced.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(value: u64) -> Self {
        Rational(Ratio::from_integer(value))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_integer(&self) -> bool {
        self.denom() == 1
    }

    /// Exact test of `count >= self`.
    pub fn le_count(&self, count: u64) -> bool {
        (count as u128) * (self.denom() as u128) >= self.numer() as u128
    }

    /// Multiplies by a non-negative integer.
    pub fn scale(&self, factor: u64) -> Self {
        Rational(self.0 * Ratio::from_integer(factor))
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Decimal rendering with a fixed number of places, rounding half up.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let n = self.numer() as u128;
        let d = self.denom() as u128;
        let scaled = (2 * n * scale + d) / (2 * d);
        let int = scaled / scale;
        if places == 0 {
            return int.to_string();
        }
        let frac = scaled % scale;
        format!("{int}.{frac:0width$}", width = places as usize)
    }

    /// Lossless `num/den` rendering, used in reports.
    pub fn to_exact_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<u64> for Rational {
    fn from(value: u64) -> Self {
        Rational::from_integer(value)
    }
}

impl PartialEq<u64> for Rational {
    fn eq(&self, other: &u64) -> bool {
        self.denom() == 1 && self.numer() == *other
    }
}

impl PartialOrd<u64> for Rational {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        let lhs = self.numer() as u128;
        let rhs = (*other as u128) * (self.denom() as u128);
        Some(lhs.cmp(&rhs))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer: u64 = n.parse().map_err(|_| err())?;
        let denom: u64 = d.parse().map_err(|_| err())?;
        if denom == 0 {
            return Err(err());
        }
        Ok(Rational::new(numer, denom))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Integer(u64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Integer(n) => Ok(Rational::from(n)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Non-negative rational number stored in lowest terms. Depths of clusters
/// and discs live in (1/e)Z for the field degree e; everything is exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RationalDepth(Ratio<i64>);

impl RationalDepth {
    pub fn zero() -> Self {
        RationalDepth(Ratio::from_integer(0))
    }

    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom <= 0 {
            return Err(Error::BadRational(format!("{numer}/{denom}")));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i64) -> Result<Self> {
        Self::from_ratio(Ratio::from_integer(n))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self> {
        if r < Ratio::from_integer(0) {
            return Err(Error::NegativeDepth(r.to_string()));
        }
        Ok(RationalDepth(r))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor_int(&self) -> i64 {
        self.0.floor().to_integer()
    }
}

impl fmt::Display for RationalDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for RationalDepth {
    type Err = Error;

    /// Accepts "n" and "n/d". Canonical output is `Display`: integers bare,
    /// everything else "n/d" in lowest terms.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRational(s.to_string());
        let (n, d) = match s.split_once('/') {
            None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
            Some((n, d)) => (
                n.trim().parse::<i64>().map_err(|_| bad())?,
                d.trim().parse::<i64>().map_err(|_| bad())?,
            ),
        };
        if d <= 0 {
            return Err(bad());
        }
        Self::from_ratio(Ratio::new(n, d))
    }
}

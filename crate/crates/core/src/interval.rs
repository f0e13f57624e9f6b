use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, serde_rat, Rational};

/// Closed interval `[lo, hi]` with exact endpoints; `lo == hi` is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadParam(format!(
                "interval endpoints out of order: [{}, {}]",
                fmt_rat(&lo),
                fmt_rat(&hi)
            )));
        }
        Ok(RatInterval { lo, hi })
    }

    /// Interval with endpoints in either order, i.e. `[a : b]`.
    pub fn hull_of(a: Rational, b: Rational) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        (lo <= hi).then(|| RatInterval {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    /// Smallest distance between a point of `self` and a point of `other`
    /// (zero when they meet).
    pub fn gap(&self, other: &RatInterval) -> Rational {
        if self.hi < other.lo {
            &other.lo - &self.hi
        } else if other.hi < self.lo {
            &self.lo - &other.hi
        } else {
            Rational::zero()
        }
    }

    /// Largest distance between a point of `self` and a point of `other`.
    pub fn spread(&self, other: &RatInterval) -> Rational {
        let a = &other.hi - &self.lo;
        let b = &self.hi - &other.lo;
        a.max(b)
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// Image under `x -> -x`.
    pub fn reflect(&self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

#[derive(Serialize, Deserialize)]
struct RawInterval(
    #[serde(with = "serde_rat")] Rational,
    #[serde(with = "serde_rat")] Rational,
);

impl TryFrom<RawInterval> for RatInterval {
    type Error = Error;
    fn try_from(r: RawInterval) -> Result<Self> {
        RatInterval::new(r.0, r.1)
    }
}

impl From<RatInterval> for RawInterval {
    fn from(i: RatInterval) -> Self {
        RawInterval(i.lo, i.hi)
    }
}

/// Shorthand used heavily in tests: `iv(lo, hi)` with panicking construction.
pub fn iv(lo: Rational, hi: Rational) -> RatInterval {
    RatInterval::new(lo, hi).expect("ordered endpoints")
}

use thiserror::Error;

use crate::rational::{fmt_rat, Rational};

/// Errors raised by the exact core and the analyses built on it.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{value} lies outside the domain [{lo}, {hi}]")]
    Domain {
        value: String,
        lo: String,
        hi: String,
    },

    #[error("map is not a self-map: node value {value} escapes the domain")]
    SelfMap { value: String },

    #[error("node budget exceeded: {needed} nodes required, cap is {cap}")]
    Budget { needed: usize, cap: usize },

    #[error("unknown builtin map `{0}`")]
    UnknownMap(String),

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("intervals {j0} and {j1} share more than one point")]
    Overlap { j0: String, j1: String },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("orbit leaves I(0) \u{222a} I(1) at iterate {0}")]
    Escape(usize),

    #[error("enclosure covers the whole domain at step {step}; increase the coding depth")]
    Blowup { step: usize },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("streams {0} and {1} agree on the first {2} symbols")]
    BetaIndistinguishable(usize, usize, usize),

    #[error("horizon too small: events first appear in block {block} (horizon {horizon} needed)")]
    HorizonTooSmall { block: u64, horizon: u64 },

    #[error("bad orbit: {0}")]
    BadOrbit(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(value: &Rational, lo: &Rational, hi: &Rational) -> Self {
        Error::Domain {
            value: fmt_rat(value),
            lo: fmt_rat(lo),
            hi: fmt_rat(hi),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Exact-arithmetic analysis of Li-Yorke chaos for piecewise-linear interval
//! maps: turbulence witnesses, symbolic interval coding, scrambled-set point
//! construction with finite-horizon certificates, Štefan orbits, and the
//! full shift on two symbols.

pub mod builtins;
pub mod cli;
pub mod coding;
pub mod error;
pub mod interval;
pub mod mapfile;
pub mod orbits;
pub mod plmap;
pub mod rational;
pub mod report;
pub mod scramble;
pub mod sigma2;
pub mod stream;
pub mod turbulence;

pub use error::{Error, Result};
pub use interval::RatInterval;
pub use plmap::{Node, PLMap, DEFAULT_NODE_BUDGET};
pub use rational::Rational;

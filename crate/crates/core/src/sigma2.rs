//! The one-sided full shift on two symbols: metric, shift, transitive seed,
//! the τ construction and finite-horizon scrambling checks.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{pow2_neg, serde_rat, Rational};
use crate::stream::{seed_slot, tau_block_start, BinaryStream, SymbolWord};

/// Scans for scrambling events never look past this index.
pub const SCAN_CAP: u64 = 10_000_000;

/// Bounds on `d(A, B) = sum_i |A_i - B_i| / 2^(i+1)` from the first
/// `precision` symbols: `upper - lower = 2^-precision`.
pub fn metric_bounds(a: &BinaryStream, b: &BinaryStream, precision: u32) -> (Rational, Rational) {
    let mut numer = BigInt::zero();
    for i in 0..precision as u64 {
        numer <<= 1;
        if a.symbol(i) != b.symbol(i) {
            numer += 1;
        }
    }
    let denom = BigInt::one() << precision;
    let lower = Rational::new(numer, denom);
    let upper = &lower + pow2_neg(precision);
    (lower, upper)
}

pub fn shift(a: &BinaryStream, k: u64) -> BinaryStream {
    a.shifted(k)
}

pub fn transitive_seed() -> BinaryStream {
    BinaryStream::seed()
}

/// An index where `word` occurs in the transitive seed: the slot the
/// length-lex enumeration assigns to it.
pub fn occurrence_offset(word: &SymbolWord) -> Result<u64> {
    seed_slot(word)
}

/// First index where `word` occurs in `stream`, scanning `limit` symbols.
pub fn first_occurrence(stream: &BinaryStream, word: &SymbolWord, limit: u64) -> Option<u64> {
    let hay = stream.prefix(limit).ok()?;
    hay.symbols()
        .windows(word.len())
        .position(|w| w == word.symbols())
        .map(|p| p as u64)
}

pub fn tau_stream(beta: &BinaryStream) -> BinaryStream {
    BinaryStream::tau(BinaryStream::seed(), beta.clone())
}

/// `k (k+1)^2`.
pub fn tau_block_len(k: u64) -> u64 {
    k * (k + 1) * (k + 1)
}

/// Blocks `1 ..= blocks` of `τ_β`.
pub fn tau_prefix(beta: &BinaryStream, blocks: u64) -> Result<SymbolWord> {
    if blocks == 0 {
        return Err(Error::BadParam("need at least one block".into()));
    }
    tau_stream(beta).prefix(tau_block_start(blocks + 1))
}

/// The τ block containing index `n`.
pub fn tau_block_of(n: u64) -> u64 {
    let mut k = 1;
    while tau_block_start(k + 1) <= n {
        k += 1;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricEvent {
    pub n: u64,
    #[serde(with = "serde_rat")]
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrambleReport {
    pub beta_a: BinaryStream,
    pub beta_b: BinaryStream,
    pub shift_a: u64,
    pub shift_b: u64,
    pub precision: u32,
    pub horizon: u64,
    /// `d(σ^n x, σ^n y) >= bound` with `bound = 1 - 2^-precision`.
    pub separation: MetricEvent,
    /// `d(σ^n x, σ^n y) <= bound` with `bound = 2^-precision`.
    pub proximity: MetricEvent,
}

/// Looks for `n <= horizon` where `σ^n x` and `σ^n y` differ on all of their
/// first `precision` symbols, and one where they agree on all of them, for
/// `x = σ^{shift_a} τ_{β_a}` and `y = σ^{shift_b} τ_{β_b}`.
pub fn sigma_scrambled_check(
    beta_a: &BinaryStream,
    beta_b: &BinaryStream,
    shifts: (u64, u64),
    precision: u32,
    horizon: u64,
) -> Result<ScrambleReport> {
    if precision == 0 {
        return Err(Error::BadParam("precision must be at least 1".into()));
    }
    let (shift_a, shift_b) = shifts;
    let m = precision as u64;
    if shift_a == shift_b && (0..m).all(|i| beta_a.symbol(i) == beta_b.symbol(i)) {
        return Err(Error::BadParam(format!(
            "the two points coincide on the first {m} symbols of β; nothing to separate"
        )));
    }
    let x = tau_stream(beta_a).shifted(shift_a);
    let y = tau_stream(beta_b).shifted(shift_b);
    let (mut differ_run, mut agree_run) = (0u64, 0u64);
    let (mut separation, mut proximity): (Option<u64>, Option<u64>) = (None, None);
    let mut t = 0u64;
    while separation.is_none() || proximity.is_none() {
        if t >= SCAN_CAP {
            return Err(Error::BadParam(format!(
                "no scrambling event within the first {SCAN_CAP} symbols"
            )));
        }
        if x.symbol(t) != y.symbol(t) {
            differ_run += 1;
            agree_run = 0;
        } else {
            agree_run += 1;
            differ_run = 0;
        }
        if differ_run >= m && separation.is_none() {
            separation = Some(t + 1 - m);
        }
        if agree_run >= m && proximity.is_none() {
            proximity = Some(t + 1 - m);
        }
        t += 1;
    }
    let (sep_n, prox_n) = (separation.unwrap(), proximity.unwrap());
    let needed = sep_n.max(prox_n);
    if needed > horizon {
        return Err(Error::HorizonTooSmall {
            block: tau_block_of(needed + shift_a.max(shift_b)),
            horizon,
        });
    }
    let (sep_lower, _) = metric_bounds(&x.shifted(sep_n), &y.shifted(sep_n), precision);
    let (_, prox_upper) = metric_bounds(&x.shifted(prox_n), &y.shifted(prox_n), precision);
    Ok(ScrambleReport {
        beta_a: beta_a.clone(),
        beta_b: beta_b.clone(),
        shift_a,
        shift_b,
        precision,
        horizon,
        separation: MetricEvent {
            n: sep_n,
            bound: sep_lower,
        },
        proximity: MetricEvent {
            n: prox_n,
            bound: prox_upper,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityHit {
    pub word: SymbolWord,
    pub offset: u64,
}

/// An offset `n` with `σ^n τ_β` starting with `word`: the seed part of the
/// first τ block long enough to contain the word's seed slot.
pub fn tau_density_offset(word: &SymbolWord) -> Result<u64> {
    let slot = seed_slot(word)?;
    let block = slot + word.len() as u64;
    Ok(tau_block_start(block) + slot)
}

/// Verifies, symbol by symbol, that every word of length `1..=max_len`
/// begins some shift of `τ_β`.
pub fn tau_density_check(beta: &BinaryStream, max_len: u32) -> Result<Vec<DensityHit>> {
    let tau = tau_stream(beta);
    let mut hits = Vec::new();
    for len in 1..=max_len {
        for word in SymbolWord::all_of_length(len) {
            let offset = tau_density_offset(&word)?;
            if tau.window(offset, len as u64)? != word {
                return Err(Error::Construction(format!(
                    "τ does not show {word} at offset {offset}"
                )));
            }
            hits.push(DensityHit { word, offset });
        }
    }
    Ok(hits)
}

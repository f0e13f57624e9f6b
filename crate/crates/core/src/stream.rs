//! Finite 0/1 words and rule-based infinite 0/1 streams.
//!
//! Streams never materialize more than they are asked for; `symbol(n)` is
//! computed from block arithmetic for the seed, ω and τ constructions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prefix a stream will materialize in one call.
pub const PREFIX_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SymbolWord(Vec<u8>);

impl SymbolWord {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(bad) = symbols.iter().find(|&&s| s > 1) {
            return Err(Error::BadParam(format!("symbol {bad} is not 0 or 1")));
        }
        Ok(SymbolWord(symbols))
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::BadParam(format!("`{other}` is not a binary symbol"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(SymbolWord)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tail(&self) -> SymbolWord {
        SymbolWord(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn push(&mut self, s: u8) {
        debug_assert!(s <= 1);
        self.0.push(s);
    }

    pub fn starts_with(&self, other: &SymbolWord) -> bool {
        self.0.starts_with(&other.0)
    }

    /// Every word of length `len` in lexicographic order.
    pub fn all_of_length(len: u32) -> impl Iterator<Item = SymbolWord> {
        (0..1u64 << len)
            .map(move |v| SymbolWord((0..len).rev().map(|bit| ((v >> bit) & 1) as u8).collect()))
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl Serialize for SymbolWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SymbolWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        SymbolWord::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Rule {
    Constant(u8),
    Periodic(Vec<u8>),
    Seed,
    /// The given symbols followed by zeros forever.
    Literal(Vec<u8>),
    Omega {
        alpha: BinaryStream,
        beta: BinaryStream,
    },
    Tau {
        alpha: BinaryStream,
        beta: BinaryStream,
    },
    Shift {
        inner: BinaryStream,
        by: u64,
    },
}

/// An infinite 0/1 sequence given by a rule. Cheap to clone and safe to
/// share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryStream(Arc<Rule>);

impl BinaryStream {
    fn from_rule(rule: Rule) -> Self {
        BinaryStream(Arc::new(rule))
    }

    pub fn constant(s: u8) -> Result<Self> {
        if s > 1 {
            return Err(Error::BadParam(format!("symbol {s} is not 0 or 1")));
        }
        Ok(Self::from_rule(Rule::Constant(s)))
    }

    pub fn periodic(period: &SymbolWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::BadParam(
                "periodic stream needs a nonempty period".into(),
            ));
        }
        Ok(Self::from_rule(Rule::Periodic(period.symbols().to_vec())))
    }

    /// Length-lexicographic concatenation `0 1 00 01 10 11 000 ...`.
    pub fn seed() -> Self {
        Self::from_rule(Rule::Seed)
    }

    /// `prefix` followed by `0̄`.
    pub fn literal(prefix: &SymbolWord) -> Self {
        Self::from_rule(Rule::Literal(prefix.symbols().to_vec()))
    }

    /// Blocks `k = 0, 1, ...`, block `k` being
    /// `α_0..α_k β_0 0^k β_1 0^k .. β_k 0^k 1 0^k`.
    pub fn omega(alpha: BinaryStream, beta: BinaryStream) -> Self {
        Self::from_rule(Rule::Omega { alpha, beta })
    }

    /// Blocks `k = 1, 2, ...`, block `k` being
    /// `α_0..α_{k-1} (β_0)^k .. (β_{k-1})^k (0 1)^k (0^2 1^2)^k .. (0^k 1^k)^k`.
    pub fn tau(alpha: BinaryStream, beta: BinaryStream) -> Self {
        Self::from_rule(Rule::Tau { alpha, beta })
    }

    /// `σ^by`, folding nested shifts.
    pub fn shifted(&self, by: u64) -> Self {
        if by == 0 {
            return self.clone();
        }
        match &*self.0 {
            Rule::Shift { inner, by: k } => Self::from_rule(Rule::Shift {
                inner: inner.clone(),
                by: k + by,
            }),
            _ => Self::from_rule(Rule::Shift {
                inner: self.clone(),
                by,
            }),
        }
    }

    pub fn symbol(&self, n: u64) -> u8 {
        match &*self.0 {
            Rule::Constant(s) => *s,
            Rule::Periodic(p) => p[(n % p.len() as u64) as usize],
            Rule::Seed => seed_symbol(n),
            Rule::Literal(p) => p.get(n as usize).copied().unwrap_or(0),
            Rule::Omega { alpha, beta } => omega_symbol(alpha, beta, n),
            Rule::Tau { alpha, beta } => tau_symbol(alpha, beta, n),
            Rule::Shift { inner, by } => inner.symbol(n + by),
        }
    }

    /// Symbols `start .. start + len`.
    pub fn window(&self, start: u64, len: u64) -> Result<SymbolWord> {
        if len > PREFIX_CAP {
            return Err(Error::BadParam(format!(
                "refusing to materialize {len} symbols (cap {PREFIX_CAP})"
            )));
        }
        Ok(SymbolWord(
            (start..start + len).map(|n| self.symbol(n)).collect(),
        ))
    }

    pub fn prefix(&self, len: u64) -> Result<SymbolWord> {
        self.window(0, len)
    }

    /// The descriptor accepted by [`BinaryStream::parse`].
    pub fn describe(&self) -> String {
        match &*self.0 {
            Rule::Constant(s) => format!("const:{s}"),
            Rule::Periodic(p) => format!("periodic:{}", SymbolWord(p.clone())),
            Rule::Seed => "seed".to_string(),
            Rule::Literal(p) => format!("literal:{}", SymbolWord(p.clone())),
            Rule::Omega { alpha, beta } if alpha.is_seed() => format!("omega:{}", beta.describe()),
            Rule::Tau { alpha, beta } if alpha.is_seed() => format!("tau:{}", beta.describe()),
            Rule::Omega { alpha, beta } => {
                format!("omega-with:{}|{}", alpha.describe(), beta.describe())
            }
            Rule::Tau { alpha, beta } => {
                format!("tau-with:{}|{}", alpha.describe(), beta.describe())
            }
            Rule::Shift { inner, by } => format!("shift:{by}:{}", inner.describe()),
        }
    }

    fn is_seed(&self) -> bool {
        matches!(&*self.0, Rule::Seed)
    }

    /// Parses `const:0`, `const:1`, `periodic:01`, `seed`, `literal:0110`,
    /// and the composite forms `omega:<stream>`, `tau:<stream>`,
    /// `shift:<k>:<stream>`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::BadParam(format!("unrecognized stream `{text}`"));
        if text == "seed" {
            return Ok(Self::seed());
        }
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => match rest {
                "0" => Self::constant(0),
                "1" => Self::constant(1),
                _ => Err(bad()),
            },
            "periodic" => Self::periodic(&SymbolWord::parse(rest)?),
            "literal" => Ok(Self::literal(&SymbolWord::parse(rest)?)),
            "omega" => Ok(Self::omega(Self::seed(), Self::parse(rest)?)),
            "tau" => Ok(Self::tau(Self::seed(), Self::parse(rest)?)),
            "omega-with" | "tau-with" => {
                let (a, b) = rest.split_once('|').ok_or_else(bad)?;
                let (alpha, beta) = (Self::parse(a)?, Self::parse(b)?);
                Ok(if kind == "omega-with" {
                    Self::omega(alpha, beta)
                } else {
                    Self::tau(alpha, beta)
                })
            }
            "shift" => {
                let (k, inner) = rest.split_once(':').ok_or_else(bad)?;
                let k: u64 = k.parse().map_err(|_| bad())?;
                Ok(Self::parse(inner)?.shifted(k))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for BinaryStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Serialize for BinaryStream {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.describe())
    }
}

impl<'de> Deserialize<'de> for BinaryStream {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        BinaryStream::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Start of the length-`len` words in the seed: `sum_{j<len} j 2^j`.
fn seed_block_start(len: u32) -> u64 {
    if len <= 1 {
        return 0;
    }
    ((len as u64 - 2) << len) + 2
}

fn seed_symbol(n: u64) -> u8 {
    let mut len = 1u32;
    while seed_block_start(len + 1) <= n {
        len += 1;
    }
    let idx = n - seed_block_start(len);
    let value = idx / len as u64;
    let bit = len as u64 - 1 - idx % len as u64;
    ((value >> bit) & 1) as u8
}

/// Where `word` sits in the seed's enumeration (its own slot, not
/// necessarily its first occurrence).
pub fn seed_slot(word: &SymbolWord) -> Result<u64> {
    let len = word.len();
    if len == 0 || len > 40 {
        return Err(Error::BadParam(format!(
            "seed slots are defined for word lengths 1..=40, got {len}"
        )));
    }
    let value = word
        .symbols()
        .iter()
        .fold(0u64, |acc, &s| (acc << 1) | s as u64);
    Ok(seed_block_start(len as u32) + len as u64 * value)
}

/// Total length of ω blocks `0 .. m-1`: `m(m+1)(2m+7)/6`.
pub fn omega_block_start(m: u64) -> u64 {
    m * (m + 1) * (2 * m + 7) / 6
}

fn omega_symbol(alpha: &BinaryStream, beta: &BinaryStream, n: u64) -> u8 {
    let k = last_start_at_most(n, omega_block_start);
    let mut idx = n - omega_block_start(k);
    let w = k + 1;
    if idx < w {
        return alpha.symbol(idx);
    }
    idx -= w;
    if idx < w * w {
        return if idx.is_multiple_of(w) {
            beta.symbol(idx / w)
        } else {
            0
        };
    }
    idx -= w * w;
    u8::from(idx == 0)
}

/// Total length of τ blocks `1 .. k-1`; block `k` has length `k (k+1)^2`.
pub fn tau_block_start(k: u64) -> u64 {
    let n = k.saturating_sub(1);
    let cubes = (n * (n + 1) / 2).pow(2);
    let squares = n * (n + 1) * (2 * n + 1) / 6;
    cubes + 2 * squares + n * (n + 1) / 2
}

fn tau_symbol(alpha: &BinaryStream, beta: &BinaryStream, n: u64) -> u8 {
    let k = last_start_at_most(n, tau_block_start).max(1);
    let mut idx = n - tau_block_start(k);
    if idx < k {
        return alpha.symbol(idx);
    }
    idx -= k;
    if idx < k * k {
        return beta.symbol(idx / k);
    }
    idx -= k * k;
    // Section j holds (0^j 1^j)^k and has length 2jk.
    let mut j = 1;
    while idx >= 2 * j * k {
        idx -= 2 * j * k;
        j += 1;
    }
    u8::from(idx % (2 * j) >= j)
}

/// Largest `k` with `start(k) <= n`, for a strictly increasing `start`
/// with `start(0) = 0` (or `start(1) = 0`).
fn last_start_at_most(n: u64, start: fn(u64) -> u64) -> u64 {
    let mut hi = 1u64;
    while start(hi) <= n {
        hi *= 2;
    }
    let mut lo = 0u64;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if start(mid) <= n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

//! Nested coding intervals `I(w)` and itineraries.
//!
//! `I(s)` for a single symbol is the quadruple's `I0`/`I1`. For longer words,
//! `I(α_0..α_n)` is the shortest (leftmost on ties) subinterval of
//! `I(α_0..α_{n-1})` that `f` maps onto `I(α_1..α_n)`. Both neighbours are
//! themselves coding intervals, so the recursion is memoized on subwords.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::plmap::PLMap;
use crate::rational::{serde_rat, Rational};
use crate::stream::{BinaryStream, SymbolWord};
use crate::turbulence::CanonicalQuadruple;

/// Cached words are at most this long; longer words are refined row by row.
const MEMO_WORD_LIMIT: usize = 64;
const MEMO_CAPACITY: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeEnclosure {
    pub word: SymbolWord,
    pub interval: RatInterval,
    #[serde(with = "serde_rat")]
    pub width: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itinerary {
    pub word: SymbolWord,
    /// Set when some iterate hit `c = a` and symbol 0 was chosen.
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Disjointness {
    Disjoint,
    Overlapping {
        common: RatInterval,
    },
    /// The pair is `γ 0 1 0^k`, `γ 1 1 0^k` (in some order).
    ExceptionalPair {
        common: RatInterval,
        prefix: SymbolWord,
        zeros: usize,
    },
}

/// A map with its canonical quadruple, plus a shared cache of refined
/// intervals.
#[derive(Debug)]
pub struct SymbolicCoding {
    map: PLMap,
    quad: CanonicalQuadruple,
    memo: Mutex<HashMap<(u8, u64), RatInterval>>,
}

fn memo_key(word: &[u8]) -> (u8, u64) {
    let bits = word.iter().fold(0u64, |acc, &s| (acc << 1) | s as u64);
    (word.len() as u8, bits)
}

impl SymbolicCoding {
    pub fn new(map: PLMap, quad: CanonicalQuadruple) -> Self {
        SymbolicCoding {
            map,
            quad,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    pub fn quadruple(&self) -> &CanonicalQuadruple {
        &self.quad
    }

    fn base(&self, s: u8) -> &RatInterval {
        if s == 0 {
            &self.quad.i0
        } else {
            &self.quad.i1
        }
    }

    /// The shortest onto-preimage of `target` inside `parent`, leftmost on
    /// ties.
    fn pull_back(&self, target: &RatInterval, parent: &RatInterval) -> Result<RatInterval> {
        let mut best: Option<RatInterval> = None;
        for comp in self.map.onto_preimage_components(target, parent) {
            let shorter = best.as_ref().is_none_or(|b| comp.width() < b.width());
            if shorter {
                best = Some(comp);
            }
        }
        best.ok_or_else(|| {
            Error::Construction(format!("no subinterval of {parent} maps onto {target}"))
        })
    }

    pub fn refine(&self, word: &SymbolWord) -> Result<RatInterval> {
        self.refine_symbols(word.symbols())
    }

    pub fn refine_symbols(&self, word: &[u8]) -> Result<RatInterval> {
        match word.len() {
            0 => Err(Error::BadParam("cannot refine the empty word".into())),
            1 => Ok(self.base(word[0]).clone()),
            n if n <= MEMO_WORD_LIMIT => self.refine_memo(word),
            _ => self.refine_rows(word),
        }
    }

    fn refine_memo(&self, word: &[u8]) -> Result<RatInterval> {
        if word.len() == 1 {
            return Ok(self.base(word[0]).clone());
        }
        let key = memo_key(word);
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let parent = self.refine_memo(&word[..word.len() - 1])?;
        let target = self.refine_memo(&word[1..])?;
        let out = self.pull_back(&target, &parent)?;
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.len() >= MEMO_CAPACITY {
            memo.clear();
        }
        memo.insert(key, out.clone());
        Ok(out)
    }

    /// Bottom-up over subword lengths: row `len` holds `I(word[i..i+len])`.
    fn refine_rows(&self, word: &[u8]) -> Result<RatInterval> {
        let mut row: Vec<RatInterval> = word.iter().map(|&s| self.base(s).clone()).collect();
        for _ in 1..word.len() {
            row = row
                .windows(2)
                .map(|pair| self.pull_back(&pair[1], &pair[0]))
                .collect::<Result<_>>()?;
        }
        Ok(row.pop().expect("nonempty word"))
    }

    pub fn code_enclosure(&self, stream: &BinaryStream, depth: usize) -> Result<CodeEnclosure> {
        if depth == 0 {
            return Err(Error::BadParam("depth must be at least 1".into()));
        }
        let word = stream.prefix(depth as u64)?;
        let interval = self.refine(&word)?;
        Ok(CodeEnclosure {
            width: interval.width(),
            word,
            interval,
        })
    }

    /// Symbols of `x, f(x), ..., f^{n-1}(x)`; fails with `Escape(k)` at the
    /// first iterate outside `I0 ∪ I1`.
    pub fn itinerary(&self, x: &Rational, n: usize) -> Result<Itinerary> {
        let mut word = SymbolWord::default();
        let mut ambiguous = false;
        let mut current = x.clone();
        for k in 0..n {
            let in0 = self.quad.i0.contains(&current);
            let in1 = self.quad.i1.contains(&current);
            match (in0, in1) {
                (true, true) => {
                    ambiguous = true;
                    word.push(0);
                }
                (true, false) => word.push(0),
                (false, true) => word.push(1),
                (false, false) => return Err(Error::Escape(k)),
            }
            if k + 1 < n {
                current = self.map.eval(&current)?;
            }
        }
        Ok(Itinerary { word, ambiguous })
    }

    pub fn disjointness_check(&self, a: &SymbolWord, b: &SymbolWord) -> Result<Disjointness> {
        if a.len() != b.len() || a == b || a.is_empty() {
            return Err(Error::BadParam(
                "disjointness needs two distinct nonempty words of equal length".into(),
            ));
        }
        let ia = self.refine(a)?;
        let ib = self.refine(b)?;
        let Some(common) = ia.intersect(&ib) else {
            return Ok(Disjointness::Disjoint);
        };
        if let Some((prefix, zeros)) = exceptional_pattern(a.symbols(), b.symbols()) {
            return Ok(Disjointness::ExceptionalPair {
                common,
                prefix,
                zeros,
            });
        }
        Ok(Disjointness::Overlapping { common })
    }
}

/// Matches `{γ 0 1 0^k, γ 1 1 0^k}`.
fn exceptional_pattern(a: &[u8], b: &[u8]) -> Option<(SymbolWord, usize)> {
    let split = a.iter().zip(b).position(|(x, y)| x != y)?;
    let (ta, tb) = (&a[split..], &b[split..]);
    let shape_ok = |t: &[u8]| t.len() >= 2 && t[1] == 1 && t[2..].iter().all(|&s| s == 0);
    if !shape_ok(ta) || !shape_ok(tb) {
        return None;
    }
    let prefix = SymbolWord::new(a[..split].to_vec()).ok()?;
    Some((prefix, ta.len() - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::tent;
    use crate::interval::iv;
    use crate::rational::{int, pow2_neg, rat};
    use crate::turbulence::{canonical_quadruple, find_turbulence};

    fn coding_for(f: PLMap) -> SymbolicCoding {
        let w = find_turbulence(&f).unwrap();
        let q = canonical_quadruple(&f, &w.j0, &w.j1).unwrap();
        SymbolicCoding::new(f, q)
    }

    fn word(s: &str) -> SymbolWord {
        SymbolWord::parse(s).unwrap()
    }

    /// Points of the grid `k / 2^bits` whose first `len` tent iterates
    /// follow `w` (using closed halves).
    fn grid_oracle(w: &SymbolWord, bits: u32) -> (Rational, Rational) {
        let t = tent();
        let denom = 1i64 << bits;
        let mut hits = Vec::new();
        for k in 0..=denom {
            let mut x = rat(k, denom);
            let mut ok = true;
            for &s in w.symbols() {
                let inside = if s == 0 {
                    x <= rat(1, 2)
                } else {
                    x >= rat(1, 2)
                };
                if !inside {
                    ok = false;
                    break;
                }
                x = t.eval(&x).unwrap();
            }
            if ok {
                hits.push(rat(k, denom));
            }
        }
        (hits[0].clone(), hits[hits.len() - 1].clone())
    }

    #[test]
    fn tent_refinement_examples() {
        let c = coding_for(tent());
        assert_eq!(c.refine(&word("00")).unwrap(), iv(int(0), rat(1, 4)));
        assert_eq!(c.refine(&word("10")).unwrap(), iv(rat(3, 4), int(1)));
        for n in 1..=20u32 {
            let zeros = SymbolWord::new(vec![0; n as usize]).unwrap();
            assert_eq!(c.refine(&zeros).unwrap(), iv(int(0), pow2_neg(n)));
        }
    }

    #[test]
    fn tent_refinement_matches_grid_oracle() {
        let c = coding_for(tent());
        for len in 1..=7 {
            for w in SymbolWord::all_of_length(len) {
                let (lo, hi) = grid_oracle(&w, len + 2);
                assert_eq!(c.refine(&w).unwrap(), iv(lo, hi), "word {w}");
                assert_eq!(c.refine(&w).unwrap().width(), pow2_neg(len));
            }
        }
    }

    #[test]
    fn long_words_agree_between_strategies() {
        let c = coding_for(tent());
        let s = BinaryStream::parse("periodic:0110100").unwrap();
        let w = s.prefix(80).unwrap();
        let rows = c.refine_rows(&w.symbols()[..60]).unwrap();
        assert_eq!(rows, c.refine_symbols(&w.symbols()[..60]).unwrap());
        assert_eq!(c.refine(&w).unwrap().width(), pow2_neg(80));
    }

    #[test]
    fn enclosures_by_depth() {
        let c = coding_for(tent());
        let zero = BinaryStream::parse("const:0").unwrap();
        let e = c.code_enclosure(&zero, 10).unwrap();
        assert_eq!(e.interval, iv(int(0), rat(1, 1024)));
        let b = BinaryStream::parse("literal:1").unwrap();
        let e = c.code_enclosure(&b, 10).unwrap();
        assert!(e.interval.contains(&int(1)));
        assert_eq!(e.width, pow2_neg(10));
        let e1 = c.code_enclosure(&zero, 1).unwrap();
        assert_eq!(e1.interval, c.quadruple().i0);
        assert!(c.code_enclosure(&zero, 0).is_err());
    }

    #[test]
    fn itineraries() {
        let c = coding_for(tent());
        assert_eq!(c.itinerary(&int(0), 5).unwrap().word, word("00000"));
        let it = c.itinerary(&rat(2, 5), 4).unwrap();
        assert_eq!((it.word, it.ambiguous), (word("0101"), false));
        let it = c.itinerary(&rat(1, 2), 2).unwrap();
        assert_eq!(it.word.symbols()[0], 0);
        assert!(it.ambiguous);
        // A map leaving I0 ∪ I1: the square of remark1 on [-1, 1].
        let g = crate::builtins::remark1()
            .power(2, crate::plmap::DEFAULT_NODE_BUDGET)
            .unwrap();
        let cg = coding_for(g);
        assert_eq!(cg.itinerary(&int(-1), 3), Err(Error::Escape(0)));
    }

    #[test]
    fn disjointness_verdicts() {
        let c = coding_for(tent());
        assert_eq!(
            c.disjointness_check(&word("00"), &word("11")).unwrap(),
            Disjointness::Disjoint
        );
        match c
            .disjointness_check(&word("010000"), &word("110000"))
            .unwrap()
        {
            Disjointness::ExceptionalPair {
                prefix,
                zeros,
                common,
            } => {
                assert!(prefix.is_empty());
                assert_eq!(zeros, 4);
                assert!(common.contains(&rat(1, 2)));
            }
            other => panic!("unexpected {other:?}"),
        }
        // Adjacent cylinders share an endpoint without the exceptional shape.
        assert!(matches!(
            c.disjointness_check(&word("00"), &word("01")).unwrap(),
            Disjointness::Overlapping { .. }
        ));
    }
}

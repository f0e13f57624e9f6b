//! Exact rationals and their textual form.
//!
//! Every number in the crate is a [`Rational`]; there is no floating-point
//! path anywhere in the analyses. The textual form is `"p/q"` (or a bare
//! integer `"p"`), with `q > 0`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`; panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^-k`.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Parse `"p/q"` or `"p"`. Decimal points and exponents are rejected.
pub fn parse_rat(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || {
        Error::Parse(format!(
            "`{s}` is not an exact rational (expected p or p/q)"
        ))
    };
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s, None),
    };
    let is_int = |t: &str| {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) {
        return Err(bad());
    }
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = match den {
        None => BigInt::one(),
        Some(q) => {
            if q.is_empty() || !q.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let q: BigUint = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("`{s}` has a zero denominator")));
            }
            BigInt::from(q)
        }
    };
    Ok(Rational::new(p, q))
}

/// Canonical text: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy decimal rendering for human-facing output only.
pub fn approx(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = digits
        )
    }
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// Serde adapter: a single rational as a `"p/q"` string (integers also
/// accepted on input).
pub mod serde_rat {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;

    use super::{fmt_rat, parse_rat, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RatVisitor)
    }

    pub(crate) struct RatVisitor;

    impl<'de> Visitor<'de> for RatVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or a \"p/q\" string")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rat(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(super::int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
            Err(E::custom(format!(
                "decimal number {v} rejected; write exact values as integers or \"p/q\" strings"
            )))
        }

        // serde_json's arbitrary_precision feature hands numbers over as a
        // one-entry map holding the literal text.
        fn visit_map<A: de::MapAccess<'de>>(self, mut map: A) -> Result<Rational, A::Error> {
            let key: Option<String> = map.next_key()?;
            match key.as_deref() {
                Some("$serde_json::private::Number") => {
                    let text: String = map.next_value()?;
                    if text.contains(['.', 'e', 'E']) {
                        return Err(de::Error::custom(format!(
                            "decimal number {text} rejected; write exact values as integers or \"p/q\" strings"
                        )));
                    }
                    parse_rat(&text).map_err(de::Error::custom)
                }
                _ => Err(de::Error::custom("expected a number or a \"p/q\" string")),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rat_vec {
    use serde::de::{Deserializer, SeqAccess, Visitor};
    use serde::ser::{SerializeSeq, Serializer};

    use super::{fmt_rat, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Vec<Rational>;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a list of rationals")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(r) = seq.next_element::<Exact>()? {
                    out.push(r.0);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(V)
    }

    struct Exact(Rational);

    impl<'de> serde::Deserialize<'de> for Exact {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            d.deserialize_any(super::serde_rat::RatVisitor).map(Exact)
        }
    }
}

/// Serde adapter for `Option<Rational>` (`null` when absent).
pub mod serde_rat_opt {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{ExactStr, Rational};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(ExactStr).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Ok(Option::<ExactStr>::deserialize(d)?.map(|e| e.0))
    }
}

/// Newtype used where a rational must sit inside a generic serde container.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactStr(pub Rational);

impl serde::Serialize for ExactStr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rat::serialize(&self.0, s)
    }
}

impl<'de> serde::Deserialize<'de> for ExactStr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_rat::deserialize(d).map(ExactStr)
    }
}

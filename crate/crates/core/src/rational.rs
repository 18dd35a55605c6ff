//! Exact rational scalars.
//!
//! Every computation in the crate runs over `BigRational`, which keeps
//! values in lowest terms with a positive denominator. Text encoding is
//! `"p/q"` (or a bare integer when `q = 1`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest accepted digit count for a numerator or denominator read from text.
const MAX_DIGITS: usize = 4096;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `1 / n!`
pub fn inverse_factorial(n: u32) -> Rational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    Rational::new(BigInt::one(), f)
}

pub fn to_text(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = |why: &str| Error::invalid(format!("bad rational {text:?}: {why}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    if num.is_empty() || den.is_empty() {
        return Err(bad("empty component"));
    }
    if num.len() > MAX_DIGITS || den.len() > MAX_DIGITS {
        return Err(bad("too many digits"));
    }
    let valid = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return Err(bad("expected p/q with integer p, q"));
    }
    let n = BigInt::from_str(num).map_err(|_| bad("numerator"))?;
    let d = BigInt::from_str(den).map_err(|_| bad("denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Short human-readable form used in labels: `"1/2"`, `"-3"`.
pub fn coefficient_prefix(r: &Rational) -> String {
    if r.is_one() {
        String::new()
    } else if (-r.clone()).is_one() {
        "-".to_string()
    } else if r.is_negative() || !r.denom().is_one() {
        format!("({})", to_text(r))
    } else {
        to_text(r)
    }
}

/// Serde adapter for a single rational (`"p/q"` string or JSON integer).
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RationalRepr::deserialize(d)?;
        raw.into_rational().map_err(de::Error::custom)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalRepr {
        Int(i64),
        Text(String),
    }

    impl RationalRepr {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                RationalRepr::Int(n) => Ok(int(n)),
                RationalRepr::Text(t) => parse(&t),
            }
        }
    }
}

/// A rational as it appears in JSON documents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Q(#[serde(with = "serde_rational")] pub Rational);

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q(int(n))
    }
}

pub fn wrap_vec(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

pub fn unwrap_vec(v: Vec<Q>) -> Vec<Rational> {
    v.into_iter().map(|q| q.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for r in [frac(1, 2), frac(-7, 3), int(0), int(-5), frac(6, 4)] {
            assert_eq!(parse(&to_text(&r)).unwrap(), r);
        }
        assert_eq!(to_text(&frac(6, 4)), "3/2");
        assert_eq!(to_text(&frac(2, -4)), "-1/2");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1/", "/2", "1.5", "--1", "1/2/3"] {
            assert!(parse(s).is_err(), "{s:?} accepted");
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(inverse_factorial(0), one());
        assert_eq!(inverse_factorial(4), frac(1, 24));
    }
}

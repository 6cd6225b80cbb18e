//! Exact rational numbers and their textual forms.
//!
//! Every quantity in this crate is an exact [`Rational`]. Text output always
//! uses the reduced `p/q` form (`q > 0`, integers as `p/1` are printed as `p`
//! only by [`fmt_plain`]); decimals are accepted on input but never emitted.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

/// Error produced when a rational literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
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

/// Parses `p`, `p/q`, or a finite decimal such as `-1.25` or `.5`.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (whole, fracpart) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && fracpart.is_empty() {
        return Err(err());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{whole}{fracpart}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    let denom = num_traits::pow(BigInt::from(10), fracpart.len());
    let value = Rational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Reduced `p/q` form; integers keep the `/1` suffix so that every emitted
/// rational has the same shape.
pub fn fmt_pq(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Human-oriented form: integers without a denominator.
pub fn fmt_plain(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        fmt_pq(value)
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod pq {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_pq(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod pq_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = values.iter().map(fmt_pq).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings.iter().map(|t| parse(t).map_err(serde::de::Error::custom)).collect()
    }
}

/// Serde adapter for a matrix of rationals, row by row.
pub mod pq_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(fmt_pq).collect()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|r| r.iter().map(|t| parse(t).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

/// Display wrapper for a slice of rationals: `(a, b, c)`.
pub struct Tuple<'a>(pub &'a [Rational]);

impl fmt::Display for Tuple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_plain(v))?;
        }
        write!(f, ")")
    }
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("1.75").unwrap(), frac(7, 4));
        assert_eq!(parse("-.5").unwrap(), frac(-1, 2));
        assert_eq!(parse("2").unwrap(), int(2));
        assert_eq!(parse("0.10").unwrap(), frac(1, 10));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "a", "1.2.3", "-", ".", "1e3"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(fmt_pq(&frac(14, 8)), "7/4");
        assert_eq!(fmt_pq(&frac(-3, -1)), "3/1");
        assert_eq!(fmt_plain(&int(3)), "3");
        assert_eq!(fmt_plain(&frac(-1, 2)), "-1/2");
    }
}

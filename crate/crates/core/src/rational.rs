//! Exact rational arithmetic used for every quantity in the crate.
//!
//! `Rational` is an arbitrary-precision, always-normalized fraction. Values
//! are written and read as `p/q` or plain integers; decimal notation is
//! rejected so nothing silently loses precision.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics on a zero denominator.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational `{0}` (expected `p/q` or an integer)")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, `-p/q` or an integer. Denominators must be positive.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse::<BigInt>().map_err(|_| err())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            if d.starts_with(['-', '+']) {
                return Err(err());
            }
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Display adapter for [`Rational`] using the canonical text form.
pub struct Show<'a>(pub &'a Rational);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

/// Serde helpers: rationals travel as canonical strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("7/2").unwrap(), q(7, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert_eq!(parse_rational("-6/4").unwrap(), q(-3, 2));
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        for bad in ["1.5", "1/0", "", "a", "1/-2", "/3", "3/", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&q(6, 4)), "3/2");
        assert_eq!(format_rational(&q(-4, 2)), "-2");
        assert_eq!(format_rational(&zero()), "0");
    }
}

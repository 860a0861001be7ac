//! Exact rational scalars.
//!
//! Arithmetic is delegated to [`num_rational::BigRational`], which keeps values
//! in canonical form (reduced, positive denominator) after every operation.
//! This module adds the parsing and conversion conventions used throughout the
//! crate: rationals travel as decimal-free `"p/q"` strings.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational string")]
    Empty,
    #[error("`{0}` is not a decimal-free rational of the form p or p/q")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
}

/// Shorthand for the rational `num/den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` with optional leading sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let is_int = |t: &str, signed: bool| {
        let digits = if signed {
            t.strip_prefix(['-', '+']).unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num, true) || !is_int(den, false) {
        return Err(ParseRationalError::Malformed(s.to_string()));
    }
    let n: BigInt = num
        .trim_start_matches('+')
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Canonical `"p/q"` (or `"p"` for integers) rendering; inverse of [`parse_rational`].
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Only reachable for magnitudes outside f64 range.
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact binary value of a finite float.
///
/// Panics on NaN or infinity.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" +1/3 ").unwrap(), rat(1, 3));
    }

    #[test]
    fn parse_rejects_decimals_and_garbage() {
        assert!(matches!(
            parse_rational("0.5"),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("1/-2"),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(q in small_rat()) {
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }

        #[test]
        fn field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a - &a, Rational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), Rational::one());
            }
        }
    }
}

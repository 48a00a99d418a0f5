//! Exact rational scalars.
//!
//! Coefficient arithmetic is plain ℚ with arbitrary-precision integers;
//! `num_rational::BigRational` already maintains the invariants we need
//! (lowest terms, positive denominator), so this module only adds the
//! conversion helpers the rest of the crate leans on.

use alloc::string::ToString;
use alloc::{format, string::String};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds the rational `n/d`.
///
/// # Errors
/// Returns [`Error::Unit`] if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Result<Rational> {
    if d == 0 {
        return Err(Error::Unit("rational with zero denominator".into()));
    }
    Ok(Rational::new(BigInt::from(n), BigInt::from(d)))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (optional leading `-`) into a rational.
///
/// # Errors
/// Returns [`Error::Input`] on malformed text and [`Error::Unit`] on a zero
/// denominator.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num_text
        .parse()
        .map_err(|_| Error::Input(format!("malformed integer `{num_text}`")))?;
    let den: BigInt = match den_text {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Input(format!("malformed integer `{d}`")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Unit("rational with zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `"p"` (integer) or `"p/q"`, exactly invertible by
/// [`parse`].
pub fn format_ratio(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// True if the rational is a (possibly negative) integer.
pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}

/// Sign of the rational: -1, 0 or 1.
pub fn signum(value: &Rational) -> i32 {
    if value.is_zero() {
        0
    } else if value.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["0", "7", "-3", "22/7", "-22/7", "1/2"] {
            let value = parse(text).unwrap();
            assert_eq!(format_ratio(&value), text);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse("4/6").unwrap(), ratio(2, 3).unwrap());
        assert_eq!(parse("3/-6").unwrap(), ratio(-1, 2).unwrap());
        assert_eq!(format_ratio(&parse("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(parse("1/0"), Err(Error::Unit(_))));
        assert!(matches!(ratio(1, 0), Err(Error::Unit(_))));
    }
}

//! Exact rational scalars.
//!
//! Backed by `num_rational::BigRational`, which keeps every value reduced with
//! a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

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

/// Parses `"p"` or `"p/q"`. Unreduced input is accepted and canonicalized;
/// a zero denominator is rejected.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::MalformedRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Canonical reduced form: `"p"` for integers, `"p/q"` otherwise.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(parse("2/4").unwrap(), frac(1, 2));
        assert_eq!(parse("-6/-3").unwrap(), int(2));
        assert_eq!(format(&parse("4/-6").unwrap()), "-2/3");
        assert_eq!(format(&parse("7").unwrap()), "7");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(parse("1/0"), Err(Error::MalformedRational(_))));
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
    }
}

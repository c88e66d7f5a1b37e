//! Exact rationals.
//!
//! [`Rational`] is `num_rational::BigRational`, which is always stored in lowest
//! terms with a positive denominator. Its `Display` renders `a/b`, or `a` when the
//! denominator is one, which is also the external text format.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a`, `-a` or `a/b` (surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Syntax {
        pos: 0,
        msg: format!("invalid rational `{t}`"),
    };
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

//! Exact rationals and their `"p/q"` text form.

use alloc::format;
use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` (optional sign on `p`, `q > 0` after reduction).
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::input("empty rational"));
    }
    match t.split_once('/') {
        None => BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| Error::input(format!("malformed rational {text:?}"))),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim())
                .map_err(|_| Error::input(format!("malformed numerator in {text:?}")))?;
            let q = BigInt::from_str(q.trim())
                .map_err(|_| Error::input(format!("malformed denominator in {text:?}")))?;
            if q.is_zero() {
                return Err(Error::input(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical text form: `"p"` when the denominator is one, else `"p/q"`.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

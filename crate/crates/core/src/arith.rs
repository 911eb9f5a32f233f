//! Exact rational numbers.
//!
//! [`Rational`] is `num_rational::BigRational`, which already keeps the
//! canonical form (positive denominator, reduced, zero as `0/1`). This module
//! adds the handful of helpers the rest of the crate needs on top of it.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Always `num/den`, including integers (`3/1`), so that serialized values
/// have a single fixed shape.
pub fn to_exact_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

/// Parses `n`, `-n`, `n/d` (whitespace around the parts is ignored).
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(text.to_string());
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

pub fn sign(r: &Rational) -> i8 {
    match r.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Lossy conversion used only for plotting.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// The rational with the smallest denominator (then smallest magnitude
/// numerator) in the open interval `(lo, hi)`. Requires `lo < hi`.
///
/// Found by walking the continued fractions of both endpoints.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi, &-lo);
    }
    // here 0 <= lo < hi; lo == 0 is fine for the positive walk
    simplest_positive_open(lo, hi)
}

// 0 <= lo < hi
fn simplest_positive_open(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    // smallest integer strictly greater than lo
    let candidate = &fl + Rational::one();
    if &candidate < hi {
        return candidate;
    }
    // lo and hi share the integer part; recurse on reciprocals of the
    // fractional parts: x = fl + 1/y, y in (1/(hi-fl), 1/(lo-fl)).
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = if lo_frac.is_zero() {
        // (fl, hi): need y > 1/hi_frac
        let bound = hi_frac.recip();
        bound.floor() + Rational::one()
    } else {
        simplest_positive_open(&hi_frac.recip(), &lo_frac.recip())
    };
    fl + inner.recip()
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

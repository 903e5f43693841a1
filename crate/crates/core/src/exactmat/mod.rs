//! Exact rational scalars and dense matrix kernels.
//!
//! Rationals serialize as `"p/q"` (or `"p"` when `q = 1`); matrices as
//! `{"rows": r, "cols": c, "entries": [[...], ...]}`. Every other module and
//! the CLI share this wire format.

mod matrix;
mod skew;

pub use matrix::{RatMatrix, RowReducer};
pub(crate) use matrix::RatRepr;
pub use skew::{skew_congruence_factor, standard_symplectic, SkewMatrix};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `p/q`, or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Nonnegative generator of the subgroup `aZ + bZ` of Q.
pub fn gcd_rational(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    // a = p/q, b = r/s  =>  gcd = gcd(p s, r q) / (q s)
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rational::new(num, a.denom() * b.denom())
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// `serialize_with` helper writing a rational in the `"p/q"` wire format.
pub fn serialize_rational<S: serde::Serializer>(
    r: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

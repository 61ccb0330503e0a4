//! Exact rational weights.
//!
//! All weights, partition functions and intermediate quantities are
//! [`BigRational`]s. Weight tables only ever hold non-negative values; signed
//! values appear transiently inside reductions (Möbius sums, interpolation).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Builds the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, n))
}

/// Parses `"num/den"` or an integer string.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::BadRational(text.to_string());
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?),
    };
    Ok(value)
}

/// Parses a weight, rejecting negative values.
pub fn parse_weight(text: &str) -> Result<Rational> {
    let value = parse_rational(text)?;
    if value.is_negative() {
        return Err(Error::NegativeWeight(text.to_string()));
    }
    Ok(value)
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with `digits` significant digits, for human output only.
pub fn format_decimal(value: &Rational, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let sign = if value.is_negative() { "-" } else { "" };
    let v = value.abs();
    if v.is_integer() && v.numer().to_string().len() <= digits {
        return format!("{sign}{}", v.numer());
    }
    // Scale so that the integer part has exactly `digits` digits.
    let num_len = v.numer().to_string().len() as i64;
    let den_len = v.denom().to_string().len() as i64;
    let mut exp = num_len - den_len;
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> BigInt {
        let shift = digits as i64 - 1 - e;
        if shift >= 0 {
            (v.numer() * num_traits::pow(ten.clone(), shift as usize)) / v.denom()
        } else {
            v.numer() / (v.denom() * num_traits::pow(ten.clone(), (-shift) as usize))
        }
    };
    let mut mantissa = scaled(exp);
    if mantissa.to_string().len() < digits {
        exp -= 1;
        mantissa = scaled(exp);
    }
    let m = mantissa.to_string();
    if (-4..digits as i64).contains(&exp) {
        if exp >= 0 {
            let (int_part, frac) = m.split_at(exp as usize + 1);
            let frac = frac.trim_end_matches('0');
            if frac.is_empty() {
                format!("{sign}{int_part}")
            } else {
                format!("{sign}{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("{sign}0.{zeros}{}", m.trim_end_matches('0'))
        }
    } else {
        let (lead, rest) = m.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{rest}e{exp}")
        }
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn exact_sqrt(value: &Rational) -> Option<Rational> {
    if value.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(value.numer())?, root(value.denom())?))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

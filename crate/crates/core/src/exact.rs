//! Small helpers around `BigRational` that several modules share.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact value of a finite `f64`.
pub fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain(format!("non-finite value {x}")))
}

/// Parses a plain decimal literal such as `1.25`, `-3`, `2e-1` or `7/4` exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty number"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        return Ok(n / d);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..]
                .parse()
                .map_err(|_| Error::parse(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(Error::parse(format!("no digits in {s:?}")));
    }
    if !int.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit()) {
        return Err(Error::parse(format!("not a number: {s:?}")));
    }
    if exp.unsigned_abs() > 4096 {
        return Err(Error::parse(format!("exponent out of range in {s:?}")));
    }
    let digits: String = format!("{int}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| Error::parse(format!("not a number: {s:?}")))?
    };
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `b^e` as an exact rational, for any sign of `e`.
pub fn pow_i(b: u32, e: i64) -> BigRational {
    let p = BigInt::from(BigUint::from(b).pow(e.unsigned_abs() as u32));
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `⌊n·r⌋` for a non-negative integer `n`.
pub fn floor_mul(n: u128, r: &BigRational) -> BigInt {
    (BigRational::from_integer(BigInt::from(n)) * r).floor().to_integer()
}

/// Same as [`floor_mul`] but checked into `u128`.
pub fn floor_mul_u128(n: u128, r: &BigRational) -> Option<u128> {
    let v = floor_mul(n, r);
    if v.is_negative() {
        return None;
    }
    v.to_u128()
}

/// `l ↦ ⌊l·r⌋` for a fixed non-negative rational, with a 128-bit fast path.
#[derive(Clone, Debug)]
pub struct Floorer {
    small: Option<(u128, u128)>,
    r: BigRational,
}

impl Floorer {
    pub fn new(r: &BigRational) -> Self {
        let small = match (r.numer().to_u64(), r.denom().to_u64()) {
            (Some(n), Some(d)) => Some((n as u128, d as u128)),
            _ => None,
        };
        Floorer { small, r: r.clone() }
    }

    pub fn floor(&self, l: u64) -> u64 {
        match self.small {
            Some((n, d)) => ((l as u128 * n) / d).min(u64::MAX as u128) as u64,
            None => floor_mul_u128(l as u128, &self.r)
                .map_or(u64::MAX, |v| v.min(u64::MAX as u128) as u64),
        }
    }
}

/// Lossy conversion used for reporting only.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_decimal("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse_decimal("2e-1").unwrap(), q(1, 5));
        assert_eq!(parse_decimal("7/4").unwrap(), q(7, 4));
        assert_eq!(parse_decimal(".5").unwrap(), q(1, 2));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("1/0").is_err());
        assert!(parse_decimal("1e999999").is_err());
    }

    #[test]
    fn floors() {
        assert_eq!(floor_mul_u128(32, &q(3, 1)), Some(96));
        assert_eq!(floor_mul_u128(7, &q(1, 2)), Some(3));
        assert_eq!(pow_i(2, -3), q(1, 8));
    }
}

//! Helpers for exact rationals: decimal parsing and float conversion.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Parse a plain decimal literal (`"0.05"`, `"-3"`, `"1e-3"`) as an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = match t[pos + 1..].parse() {
                Ok(e) => e,
                Err(_) => return invalid(format!("bad exponent in number {text:?}")),
            };
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit())
    {
        return invalid(format!("not a decimal number: {text:?}"));
    }
    let all = format!("{int_part}{frac_part}");
    let mut num: BigInt = all.parse::<BigUint>().map(BigInt::from).unwrap_or_default();
    if negative {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    if scale.unsigned_abs() > 4000 {
        return invalid(format!("exponent out of range in {text:?}"));
    }
    let pow = BigInt::from(10u32).pow(scale.unsigned_abs() as u32);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * pow)
    } else {
        BigRational::new(num, pow)
    })
}

/// The rational with the shortest decimal expansion that rounds to `v`,
/// so `0.05` becomes exactly `1/20`.
pub fn f64_to_decimal(v: f64) -> Result<BigRational> {
    if !v.is_finite() {
        return invalid(format!("non-finite value {v}"));
    }
    parse_decimal(&format!("{v:e}"))
}

pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    q.to_f64().unwrap_or(f64::NAN)
}

/// `num / den` as a rational.
pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn parses_plain_decimals() {
        assert_eq!(parse_decimal("0.05").unwrap(), q(1, 20));
        assert_eq!(parse_decimal("-2.5").unwrap(), q(-5, 2));
        assert_eq!(parse_decimal("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_decimal("12").unwrap(), q(12, 1));
        assert_eq!(parse_decimal(".5").unwrap(), q(1, 2));
        assert_eq!(parse_decimal("2.5E2").unwrap(), q(250, 1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", ".", "abc", "1.2.3", "1e", "--1", "0x10"] {
            assert!(parse_decimal(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn shortest_float_conversion() {
        assert_eq!(f64_to_decimal(0.05).unwrap(), q(1, 20));
        assert_eq!(f64_to_decimal(0.15).unwrap(), q(3, 20));
        assert_eq!(f64_to_decimal(1e-20).unwrap(), BigRational::new(1.into(), BigInt::from(10).pow(20)));
        assert!(f64_to_decimal(f64::NAN).is_err());
    }

    #[test]
    fn back_to_float() {
        assert_eq!(to_f64(&q(1, 20)), 0.05);
        assert_eq!(to_f64(&q(0, 1)), 0.0);
    }
}

//! Conversions between exact rationals and decimal strings.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of fractional digits in rendered values.
pub const DEFAULT_DIGITS: usize = 30;

/// Renders `r` with exactly `digits` fractional digits, rounding half to even.
pub fn to_decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let num = r.numer().abs() * &scale;
    let den = r.denom();
    let (mut q, rem) = num.div_rem(den);
    let twice = rem * 2u32;
    if twice > *den || (twice == *den && q.is_odd()) {
        q += 1u32;
    }
    let negative = r.is_negative() && !q.is_zero();
    let mut s = q.to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let (int, frac) = s.split_at(s.len() - digits);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(int);
    if digits > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Parses a plain decimal literal (`-12.345`) exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad decimal {s:?}"));
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::parse_bytes(if digits.is_empty() { b"0" } else { digits.as_bytes() }, 10)
        .ok_or_else(bad)?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let r = BigRational::new(num, den);
    Ok(if negative { -r } else { r })
}

/// `"num/den"`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    match s.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(int(n)?, d))
        }
        None => Ok(BigRational::from_integer(int(s)?)),
    }
}

/// Nearest `f64`, going through a long decimal expansion when the parts
/// overflow a double.
pub fn to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64().filter(|v| v.is_finite()) {
        return v;
    }
    // scale so that 60 significant digits survive
    let int_digits = (r.numer().abs() / r.denom()).to_string().len();
    to_decimal(r, 60usize.saturating_sub(int_digits).max(1))
        .parse()
        .unwrap_or(if r.numer().sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
}

/// `|a - b| / |b|`, or `|a|` when `b = 0`.
pub fn relative_error(a: &BigRational, b: &BigRational) -> BigRational {
    let diff = (a - b).abs();
    if b.is_zero() {
        diff
    } else {
        diff / b.abs()
    }
}

/// `10^-e` as a rational.
pub fn pow10_neg(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn renders_with_rounding() {
        assert_eq!(to_decimal(&r(47, 12), 5), "3.91667");
        assert_eq!(to_decimal(&r(107, 30), 30), "3.566666666666666666666666666667");
        assert_eq!(to_decimal(&r(1, 8), 2), "0.12"); // tie to even
        assert_eq!(to_decimal(&r(3, 8), 2), "0.38"); // tie to even
        assert_eq!(to_decimal(&r(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal(&r(-1, 3000), 2), "0.00");
        assert_eq!(to_decimal(&r(5, 1), 0), "5");
        assert_eq!(to_decimal(&r(5, 2), 0), "2");
        assert_eq!(to_decimal(&r(1, 1), 3), "1.000");
    }

    #[test]
    fn parses_decimals_and_rationals() {
        assert_eq!(parse_decimal("3.25").unwrap(), r(13, 4));
        assert_eq!(parse_decimal("-0.5").unwrap(), r(-1, 2));
        assert_eq!(parse_decimal("7").unwrap(), r(7, 1));
        assert_eq!(parse_decimal(".5").unwrap(), r(1, 2));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("").is_err());
        assert_eq!(parse_rational("47/12").unwrap(), r(47, 12));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&r(6, 3)), "2/1");
    }

    #[test]
    fn converts_to_f64() {
        assert_eq!(to_f64(&r(1, 4)), 0.25);
        let huge = BigRational::new(BigInt::from(10u32).pow(400) + 1u32, BigInt::from(10u32).pow(399));
        assert!((to_f64(&huge) - 10.0).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn decimal_round_trip_within_half_ulp(n in -1_000_000i64..1_000_000, d in 1i64..10_000, digits in 0usize..40) {
                let x = r(n, d);
                let back = parse_decimal(&to_decimal(&x, digits)).unwrap();
                let half = pow10_neg(digits as u32) / BigInt::from(2);
                prop_assert!((back - &x).abs() <= half);
            }
        }
    }
}

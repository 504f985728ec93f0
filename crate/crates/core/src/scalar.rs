//! Exact scalars and small vector helpers.
//!
//! Every real number that enters region computation is a [`Rational`]:
//! an arbitrary-precision fraction kept in lowest terms with a positive
//! denominator. Floating point never appears on the solver path.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Parses `a/b`, an integer `a`, or a decimal `a.bc` (optionally with an
/// exponent such as `1.5e-3`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::Parse(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = parse_int(num.trim()).ok_or_else(err)?;
        let d: BigInt = parse_int(den.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical text form: `a` for integers, `a/b` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Vector of rationals from integers.
pub fn rvec(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| rat(v)).collect()
}

/// Smallest integer not below `value`.
pub fn ceil_int(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn scale(v: &[Rational], factor: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * factor).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scales `v` so that its first nonzero entry has absolute value one.
/// The zero vector is returned unchanged.
pub fn normalize_first(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            scale(v, &s)
        }
        None => v.to_vec(),
    }
}

/// Positive multiple of `v` with coprime integer entries. Direction and
/// sign are preserved; the zero vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    if is_zero_vec(v) {
        return v.to_vec();
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

/// Lexicographic comparison of equal-length vectors.
pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Best-effort decimal approximation, used only for plot output.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4));
        assert_eq!(parse_rational("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("2.5e2").unwrap(), rat(250));
        assert_eq!(parse_rational("1e-2").unwrap(), frac(1, 100));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7));
        assert_eq!(parse_rational("2/-4").unwrap(), frac(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1.2.3", "--1", "1/", ".", "1e", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad} parsed");
        }
    }

    #[test]
    fn lowest_terms_with_positive_denominator() {
        let r = parse_rational("6/-8").unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(format_rational(&r), "-3/4");
        assert_eq!(format_rational(&rat(5)), "5");
    }

    #[test]
    fn ceiling_is_the_standard_one() {
        assert_eq!(ceil_int(&frac(5, 2)), BigInt::from(3));
        assert_eq!(ceil_int(&frac(-5, 2)), BigInt::from(-2));
        assert_eq!(ceil_int(&rat(2)), BigInt::from(2));
    }

    #[test]
    fn primitive_keeps_direction() {
        assert_eq!(primitive(&[frac(1, 2), frac(-3, 4)]), rvec(&[2, -3]));
        assert_eq!(primitive(&rvec(&[0, -6, 4])), rvec(&[0, -3, 2]));
    }

    proptest! {
        #[test]
        fn parse_print_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = frac(n, d);
            let text = format_rational(&r);
            let back = parse_rational(&text).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(format_rational(&back), text);
        }

        #[test]
        fn decimal_is_exact(int in -1000i64..1000, frac_digits in 0u32..10_000) {
            let text = format!("{int}.{frac_digits:04}");
            let expected = rat(int) + if int < 0 || text.starts_with('-') {
                -frac(frac_digits as i64, 10_000)
            } else {
                frac(frac_digits as i64, 10_000)
            };
            prop_assert_eq!(parse_rational(&text).unwrap(), expected);
        }
    }
}

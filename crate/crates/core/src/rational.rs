//! Exact rational helpers shared by every tally path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `7`, `-3/4` or a decimal like `0.75`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().ok()?,
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().ok()?;
        let magnitude = Rational::new(whole.abs() * &scale + frac, scale);
        return Some(if negative || whole.is_negative() {
            -magnitude
        } else {
            magnitude
        });
    }
    text.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Scales a rational vector by the positive lcm of its denominators and
/// returns the integer numerators, if every one fits in an `i64`.
pub fn integer_scaling(values: &[Rational]) -> Option<Vec<i64>> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values
        .iter()
        .map(|v| (v.numer() * (&lcm / v.denom())).to_i64())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational(" -3/4 "), Some(ratio(-3, 4)));
        assert_eq!(parse_rational("0.75"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse_rational("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&ratio(6, 8)), "3/4");
        assert_eq!(format_rational(&int(-2)), "-2");
    }

    #[test]
    fn integer_scaling_preserves_ratios() {
        let v = vec![ratio(1, 4), ratio(-3, 4), int(1)];
        assert_eq!(integer_scaling(&v), Some(vec![1, -3, 4]));
    }
}

//! Exact rational scalars.
//!
//! Every quantity in the crate is a [`Rational`], an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Zero is `0/1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Builds `numer/denom` from machine integers. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p"`, `"-p"` or `"p/q"`; rejects zero denominators, whitespace and empty strings.
pub fn parse(text: &str) -> Option<Rational> {
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return None;
    }
    let valid_digits = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
    };
    match text.split_once('/') {
        Some((numer, denom)) => {
            if !valid_digits(numer)
                || denom.is_empty()
                || !denom.chars().all(|c| c.is_ascii_digit())
            {
                return None;
            }
            text.parse().ok()
        }
        None => {
            if !valid_digits(text) {
                return None;
            }
            text.parse::<BigInt>().ok().map(Rational::from_integer)
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

/// Inner product of two equally long rational vectors.
pub fn dot(lhs: &[Rational], rhs: &[Rational]) -> Rational {
    debug_assert_eq!(lhs.len(), rhs.len());
    lhs.iter()
        .zip(rhs)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// Smallest integer not below `value`.
pub fn ceil_to_int(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

pub fn floor_to_int(value: &Rational) -> BigInt {
    value.floor().to_integer()
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_and_reducible_forms() {
        assert_eq!(parse("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse("-4"), Some(int(-4)));
        assert_eq!(parse("0/5"), Some(zero()));
        assert_eq!(format(&parse("6/3").unwrap()), "2");
        assert_eq!(format(&parse("-2/4").unwrap()), "-1/2");
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in [
            "", "x", "1/0", "1/", "/2", "1.5", " 1", "+1", "1/-2", "--1", "1/2/3",
        ] {
            assert_eq!(parse(bad), None, "{bad:?} should not parse");
        }
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(ceil_to_int(&ratio(7, 2)), BigInt::from(4));
        assert_eq!(floor_to_int(&ratio(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil_to_int(&int(3)), BigInt::from(3));
    }
}

//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient field. `BigRational` keeps values in lowest terms with a
/// positive denominator, and zero is `0/1`.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Always `p/q`, including integers (`-1/1`).
pub fn to_pq(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses an integer or a quotient `p/q`.
pub fn parse_pq(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Compact display: integers without denominator.
pub(crate) fn display(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub(crate) fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

pub(crate) fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_format_keeps_unit_denominator() {
        assert_eq!(to_pq(&int(-1)), "-1/1");
        assert_eq!(to_pq(&rat(2, -4)), "-1/2");
        assert_eq!(to_pq(&Rational::zero()), "0/1");
    }

    #[test]
    fn pq_parse() {
        assert_eq!(parse_pq("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_pq(" -7 "), Some(int(-7)));
        assert_eq!(parse_pq("1/0"), None);
        assert_eq!(parse_pq("x"), None);
    }
}

//! Exact rational scalars.
//!
//! Coefficients everywhere in this crate are arbitrary-precision rationals.
//! `num_rational::BigRational` already maintains the invariants we need
//! (lowest terms, positive denominator), so this module only adds the small
//! conversion and formatting helpers the rest of the crate shares.

use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;
use num_traits::{One, Signed, Zero};

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`, always with `q > 0`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with optional leading sign. `None` on malformed input
/// or a zero denominator.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// Magnitude of the numerator, used for pivot selection in exact elimination.
pub fn numer_abs(r: &Rational) -> BigInt {
    r.numer().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = ratio(2, -4);
        assert_eq!(r, ratio(-1, 2));
        assert_eq!(format_rational(&r), "-1/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "5", "-3", "2/3", "-7/2"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("4/6"), Some(ratio(2, 3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("a"), None);
    }
}

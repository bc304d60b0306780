use crate::error::{Error, Result};
use num::{BigInt, BigRational, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses `"p"` or `"p/q"` with an optional leading minus on the numerator.
///
/// Non-reduced input such as `"2/4"` is accepted and normalized. A sign on the
/// denominator, a zero denominator, a leading `+`, and surrounding whitespace are
/// rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let (num_part, den_part) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num_part.strip_prefix('-').unwrap_or(num_part);
    if !digits(unsigned) {
        return Err(bad());
    }
    let numer: BigInt = num_part.parse().map_err(|_| bad())?;
    let denom: BigInt = match den_part {
        None => BigInt::from(1),
        Some(d) if digits(d) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(format_rational(&r(-3, 4)), "-3/4");
        assert_eq!(format_rational(&r(3, -4)), "-3/4");
        assert_eq!(format_rational(&r(6, 3)), "2");
        assert_eq!(format_rational(&r(0, 5)), "0");
    }

    #[test]
    fn parse_accepts_and_normalizes() {
        assert_eq!(parse_rational("1/8").unwrap(), r(1, 8));
        assert_eq!(parse_rational("-3/4").unwrap(), r(-3, 4));
        assert_eq!(parse_rational("2/4").unwrap(), r(1, 2));
        assert_eq!(parse_rational("17").unwrap(), r(17, 1));
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["", "3/-4", "+1", "1/0", " 1", "1.5", "1/", "/2", "a", "--1", "1/2/3", "-"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    proptest! {
        #[test]
        fn round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let value = r(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&value)).unwrap(), value);
        }
    }
}

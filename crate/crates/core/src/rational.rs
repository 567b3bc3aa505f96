//! Exact rational scalars and closed rational intervals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `num / den`; panics when `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp` for a possibly negative exponent.
pub fn pow(base: i64, exp: i32) -> Rational {
    let b = int(base);
    if exp >= 0 {
        num_traits::pow(b, exp as usize)
    } else {
        num_traits::pow(b.recip(), (-exp) as usize)
    }
}

/// Parses `"-7"`, `"3/2"` or a terminating decimal such as `"0.25"` exactly.
///
/// Exponent notation and repeating-decimal notations are rejected.
pub fn parse_rational(field: &str, text: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Parse {
        field: field.to_string(),
        reason: format!("{reason} (got {text:?})"),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty value"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num).ok_or_else(|| err("numerator is not an integer"))?;
        let den = parse_integer(den).ok_or_else(|| err("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if (whole.is_empty() && fraction.is_empty()) || !digits_ok(whole) || !digits_ok(fraction) {
        return Err(err(
            "expected an integer, a fraction n/d or a terminating decimal",
        ));
    }
    let joined = format!("{whole}{fraction}");
    let numerator = BigInt::from_str(if joined.is_empty() { "0" } else { &joined })
        .map_err(|_| err("malformed number"))?;
    let scale = num_traits::pow(BigInt::from(10), fraction.len());
    let value = Rational::new(numerator, scale);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

/// Largest integer not exceeding `value`.
pub fn floor_int(value: &Rational) -> BigInt {
    value.floor().to_integer()
}

/// Closed interval `[lo, hi]` with exact endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    /// Builds the interval spanned by two endpoints in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn point(value: Rational) -> Self {
        Self {
            lo: value.clone(),
            hi: value,
        }
    }

    /// `[-radius, radius]`; `radius` must be nonnegative.
    pub fn symmetric(radius: Rational) -> Self {
        Self::spanning(-radius.clone(), radius)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, value: &Rational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &RationalInterval) -> Option<RationalInterval> {
        if !self.intersects(other) {
            return None;
        }
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        Some(Self {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    pub fn hull(&self, other: &RationalInterval) -> RationalInterval {
        Self {
            lo: if self.lo <= other.lo {
                self.lo.clone()
            } else {
                other.lo.clone()
            },
            hi: if self.hi >= other.hi {
                self.hi.clone()
            } else {
                other.hi.clone()
            },
        }
    }

    pub fn shift(&self, by: &Rational) -> RationalInterval {
        Self {
            lo: &self.lo + by,
            hi: &self.hi + by,
        }
    }

    pub fn scale(&self, by: &Rational) -> RationalInterval {
        Self::spanning(&self.lo * by, &self.hi * by)
    }

    /// Widens both ends by `radius >= 0`.
    pub fn widen(&self, radius: &Rational) -> RationalInterval {
        Self {
            lo: &self.lo - radius,
            hi: &self.hi + radius,
        }
    }

    pub fn neg(&self) -> RationalInterval {
        Self {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Largest absolute value attained on the interval.
    pub fn magnitude(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Parses `[lo,hi]` as printed by `Display`.
    pub fn parse(field: &str, text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse {
                field: field.to_string(),
                reason: format!("expected [lo,hi], got {text:?}"),
            })?;
        let (lo, hi) = inner.split_once(',').ok_or_else(|| Error::Parse {
            field: field.to_string(),
            reason: format!("expected [lo,hi], got {text:?}"),
        })?;
        Self::new(parse_rational(field, lo)?, parse_rational(field, hi)?)
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("a", "3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_rational("a", "-7").unwrap(), int(-7));
        assert_eq!(parse_rational("a", "0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("a", "-.5").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("a", "6/-4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("a", "12.").unwrap(), int(12));
    }

    #[test]
    fn rejects_non_exact_notation() {
        for bad in ["x", "", "1e3", "0.(3)", "0.333...", "1/0", "--1", "."] {
            let err = parse_rational("a", bad).unwrap_err();
            assert!(
                matches!(err, Error::Parse { ref field, .. } if field == "a"),
                "{bad}"
            );
        }
    }

    #[test]
    fn interval_rejects_reversed_endpoints() {
        assert!(RationalInterval::new(int(2), int(1)).is_err());
        let iv = RationalInterval::new(frac(-3, 2), frac(-1, 2)).unwrap();
        assert_eq!(iv.to_string(), "[-3/2,-1/2]");
        assert_eq!(RationalInterval::parse("t", "[-3/2,-1/2]").unwrap(), iv);
    }

    #[test]
    fn interval_set_operations() {
        let a = RationalInterval::new(int(0), int(2)).unwrap();
        let b = RationalInterval::new(int(2), int(5)).unwrap();
        assert!(a.intersects(&b));
        assert_eq!(a.intersection(&b).unwrap(), RationalInterval::point(int(2)));
        assert_eq!(a.hull(&b), RationalInterval::new(int(0), int(5)).unwrap());
        assert!(!a.intersects(&b.shift(&frac(1, 3))));
        assert_eq!(b.neg().magnitude(), int(5));
        assert_eq!(
            a.scale(&int(-1)),
            RationalInterval::new(int(-2), int(0)).unwrap()
        );
    }
}

//! Exact rational literals for `alpha` and friends.

use std::fmt;
use std::str::FromStr;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub type Rational = Ratio<i128>;

/// A user-supplied real that remembers its exact rational value.
///
/// Accepts `p/q`, plain integers and decimal literals with an optional
/// exponent (`0.25`, `1e-6`, `2.5E-3`). All of these are exact rationals;
/// the `f64` view is taken only where floating point is unavoidable.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Exact {
    value: Rational,
}

impl Exact {
    pub fn new(value: Rational) -> Self {
        Self { value }
    }

    pub fn from_integer(v: i128) -> Self {
        Self::new(Rational::from_integer(v))
    }

    pub fn ratio(p: i128, q: i128) -> Self {
        Self::new(Rational::new(p, q))
    }

    pub fn value(&self) -> Rational {
        self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_integer() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as an exact rational")]
pub struct RationalParseError(pub String);

impl FromStr for Exact {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RationalParseError(s.to_string());
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_decimal(p.trim()).ok_or_else(err)?;
            let q = parse_decimal(q.trim()).ok_or_else(err)?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Self::new(p / q));
        }
        parse_decimal(s).map(Self::new).ok_or_else(err)
    }
}

fn pow10(e: u32) -> Option<i128> {
    10i128.checked_pow(e)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: i128 = format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let mut r = if scale >= 0 {
        Rational::from_integer(digits.checked_mul(pow10(scale as u32)?)?)
    } else {
        Rational::new(digits, pow10((-scale) as u32)?)
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// The exact square root of a nonnegative rational, when it is rational.
pub fn exact_sqrt(x: Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (p, q) = (*x.numer(), *x.denom());
    let (sp, sq) = (p.sqrt(), q.sqrt());
    (sp * sp == p && sq * sq == q).then(|| Rational::new(sp, sq))
}

/// The exact cube root of a rational, when it is rational.
pub fn exact_cbrt(x: Rational) -> Option<Rational> {
    let (p, q) = (*x.numer(), *x.denom());
    let (cp, cq) = (p.cbrt(), q.cbrt());
    (cp * cp * cp == p && cq * cq * cq == q).then(|| Rational::new(cp, cq))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(
            "1/12".parse::<Exact>().unwrap().value(),
            Rational::new(1, 12)
        );
        assert_eq!("2/24".parse::<Exact>().unwrap().to_string(), "1/12");
        assert_eq!(
            "1e-6".parse::<Exact>().unwrap().value(),
            Rational::new(1, 1_000_000)
        );
        assert_eq!(
            "0.25".parse::<Exact>().unwrap().value(),
            Rational::new(1, 4)
        );
        assert_eq!(
            "-1.5E1".parse::<Exact>().unwrap().value(),
            Rational::from_integer(-15)
        );
        assert_eq!("3".parse::<Exact>().unwrap().to_string(), "3");
        assert_eq!(".5".parse::<Exact>().unwrap().value(), Rational::new(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1/", "e5", "1.2.3", "0x10"] {
            assert!(bad.parse::<Exact>().is_err(), "{bad}");
        }
    }

    #[test]
    fn roots() {
        assert_eq!(exact_sqrt(Rational::new(1, 36)), Some(Rational::new(1, 6)));
        assert_eq!(exact_sqrt(Rational::new(1, 12)), None);
        assert_eq!(exact_cbrt(Rational::new(8, 27)), Some(Rational::new(2, 3)));
        assert_eq!(exact_cbrt(Rational::new(1, 25)), None);
    }
}

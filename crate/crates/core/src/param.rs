use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// The Chazy parameter `k`: an exact positive rational other than 6, or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Parameter(Kind);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Finite(Rational64),
    Infinite,
}

impl Parameter {
    /// The `k → ∞` limit (Chazy's equation / Ramanujan's system).
    pub const INFINITE: Parameter = Parameter(Kind::Infinite);

    pub fn finite(k: Rational64) -> Result<Self> {
        if k <= Rational64::from_integer(0) {
            return Err(Error::InvalidParameter(format!(
                "k must be positive, got {k}"
            )));
        }
        if k == Rational64::from_integer(6) {
            return Err(Error::PoleAtSix);
        }
        // k^2 must stay representable for the exact coefficient.
        k.numer()
            .checked_mul(*k.numer())
            .and_then(|_| k.denom().checked_mul(*k.denom()))
            .ok_or_else(|| Error::InvalidParameter(format!("k = {k} is too large")))?;
        Ok(Parameter(Kind::Finite(k)))
    }

    pub fn integer(k: i64) -> Result<Self> {
        Self::finite(Rational64::from_integer(k))
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Self::finite(Rational64::new(numer, denom))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Kind::Infinite)
    }

    /// The exact rational value of `k`, `None` for ∞.
    pub fn value(&self) -> Option<Rational64> {
        match self.0 {
            Kind::Finite(k) => Some(k),
            Kind::Infinite => None,
        }
    }

    /// `k` as a float (`f64::INFINITY` for ∞).
    pub fn to_f64(&self) -> f64 {
        match self.0 {
            Kind::Finite(k) => *k.numer() as f64 / *k.denom() as f64,
            Kind::Infinite => f64::INFINITY,
        }
    }

    /// `k^2/(36 - k^2)` exactly, or `-1` for ∞.
    pub fn coefficient_exact(&self) -> Rational64 {
        match self.0 {
            Kind::Finite(k) => {
                let k2 = k * k;
                k2 / (Rational64::from_integer(36) - k2)
            }
            Kind::Infinite => Rational64::from_integer(-1),
        }
    }

    /// `1/k` as an exact rational, zero for ∞.
    pub fn reciprocal(&self) -> Rational64 {
        match self.0 {
            Kind::Finite(k) => k.recip(),
            Kind::Infinite => Rational64::from_integer(0),
        }
    }
}

/// Quadratic coefficient of the `R'` equation for this parameter.
pub fn chazy_coefficient(parameter: &Parameter) -> C64 {
    let c = parameter.coefficient_exact();
    C64::new(*c.numer() as f64 / *c.denom() as f64, 0.0)
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Finite(k) if *k.denom() == 1 => write!(f, "{}", k.numer()),
            Kind::Finite(k) => write!(f, "{}/{}", k.numer(), k.denom()),
            Kind::Infinite => f.write_str("inf"),
        }
    }
}

/// Parse an exact rational from `p/q`, an integer, or a plain decimal such as
/// `1.5` (read exactly as `3/2`).
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
        || frac.len() > 17
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    let r = Rational64::new(numer, denom);
    Ok(if neg { -r } else { r })
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Parameter::INFINITE),
            other => Parameter::finite(parse_rational(other)?),
        }
    }
}

impl Serialize for Parameter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Parameter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coef(s: &str) -> Rational64 {
        s.parse::<Parameter>().unwrap().coefficient_exact()
    }

    #[test]
    fn coefficients_match_the_worked_systems() {
        assert_eq!(coef("2"), Rational64::new(1, 8));
        assert_eq!(coef("3"), Rational64::new(1, 3));
        assert_eq!(coef("4"), Rational64::new(4, 5));
        assert_eq!(coef("9"), Rational64::new(-9, 5));
        assert_eq!(coef("18"), Rational64::new(-9, 8));
        assert_eq!(coef("inf"), Rational64::from_integer(-1));
    }

    #[test]
    fn six_is_rejected() {
        assert_eq!("6".parse::<Parameter>(), Err(Error::PoleAtSix));
        assert_eq!("12/2".parse::<Parameter>(), Err(Error::PoleAtSix));
        assert_eq!("6.0".parse::<Parameter>(), Err(Error::PoleAtSix));
    }

    #[test]
    fn non_positive_rejected() {
        assert!("0".parse::<Parameter>().is_err());
        assert!("-2".parse::<Parameter>().is_err());
        assert!("abc".parse::<Parameter>().is_err());
        assert!("1/0".parse::<Parameter>().is_err());
    }

    #[test]
    fn decimal_and_fraction_literals_are_exact() {
        assert_eq!("1.5".parse::<Parameter>(), Parameter::ratio(3, 2));
        assert_eq!("3/2".parse::<Parameter>(), Parameter::ratio(6, 4));
        assert_eq!("2/3".parse::<Parameter>().unwrap().to_string(), "2/3");
        assert_eq!("inf".parse::<Parameter>().unwrap().to_string(), "inf");
    }

    #[test]
    fn large_k_tends_to_chazy() {
        let c = chazy_coefficient(&Parameter::integer(1_000_000).unwrap());
        assert!((c.re + 1.0).abs() < 1e-10);
    }
}

//! Parsing of the command-line value grammars.

use anyhow::{anyhow, bail, Context, Result};
use chazy::param::parse_rational;
use chazy::{Parameter, C64};
use num_rational::Rational64;

/// `a`, `bi`, `a+bi` or `a-bi` with decimal parts.
pub fn complex(s: &str) -> Result<C64> {
    let t = s.trim();
    if t.contains(['j', 'J']) {
        bail!("invalid complex literal '{s}': the imaginary unit is written i");
    }
    let z: C64 = t
        .parse()
        .map_err(|_| anyhow!("invalid complex literal '{s}'"))?;
    if !z.re.is_finite() || !z.im.is_finite() {
        bail!("complex literal '{s}' is not finite");
    }
    Ok(z)
}

/// Comma separated list of exactly `N` complex literals.
pub fn complex_list<const N: usize>(s: &str) -> Result<[C64; N]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        bail!(
            "expected {N} comma separated complex values, got {}",
            parts.len()
        );
    }
    let mut out = [C64::new(0.0, 0.0); N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = complex(p)?;
    }
    Ok(out)
}

/// Decimal, exact fraction `p/q`, or `inf`.
pub fn parameter(s: &str) -> Result<Parameter> {
    s.trim()
        .parse()
        .map_err(|e| anyhow!("invalid parameter literal '{s}': {e}"))
}

pub fn fractions<const N: usize>(s: &str) -> Result<[Rational64; N]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        bail!(
            "expected {N} comma separated fractions, got {}",
            parts.len()
        );
    }
    let mut out = [Rational64::from(0); N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = parse_rational(p.trim()).with_context(|| format!("invalid fraction '{p}'"))?;
    }
    Ok(out)
}

pub fn integers<const N: usize>(s: &str) -> Result<[i64; N]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        bail!("expected {N} comma separated integers, got {}", parts.len());
    }
    let mut out = [0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .trim()
            .parse()
            .with_context(|| format!("invalid integer '{p}'"))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("-2+0i").unwrap(), C64::new(-2.0, 0.0));
        assert_eq!(complex("-2.0-1.5i").unwrap(), C64::new(-2.0, -1.5));
        assert_eq!(complex("3").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(complex("0.5i").unwrap(), C64::new(0.0, 0.5));
        assert_eq!(complex("1e-3+2e2i").unwrap(), C64::new(1e-3, 200.0));
        assert!(complex("1+").is_err());
        assert!(complex("abc").is_err());
        assert!(complex("1+2j").is_err());
        assert!(complex("inf").is_err());
    }

    #[test]
    fn lists() {
        let ic = complex_list::<3>("-2+0i,-8+0i,-8+0i").unwrap();
        assert_eq!(ic[1], C64::new(-8.0, 0.0));
        assert!(complex_list::<3>("1,2").is_err());
        assert_eq!(
            fractions::<3>("1/2,1/3, 0").unwrap()[1],
            Rational64::new(1, 3)
        );
        assert_eq!(integers::<3>("1,2,3").unwrap(), [1, 2, 3]);
    }

    #[test]
    fn parameters() {
        assert_eq!(parameter("3/2").unwrap(), Parameter::ratio(3, 2).unwrap());
        assert_eq!(parameter("1.5").unwrap(), Parameter::ratio(3, 2).unwrap());
        assert!(parameter("inf").unwrap().is_infinite());
        assert!(parameter("6").is_err());
    }
}

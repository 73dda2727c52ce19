use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::param::{chazy_coefficient, Parameter};
use crate::C64;

/// State `(P, Q, R)` of the first-order system at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Triple {
    pub p: C64,
    pub q: C64,
    pub r: C64,
}

impl Triple {
    pub fn new(p: C64, q: C64, r: C64) -> Self {
        Triple { p, q, r }
    }

    pub fn real(p: f64, q: f64, r: f64) -> Self {
        Triple::new(C64::new(p, 0.0), C64::new(q, 0.0), C64::new(r, 0.0))
    }

    pub fn zero() -> Self {
        Triple::default()
    }

    pub fn to_array(self) -> [C64; 3] {
        [self.p, self.q, self.r]
    }

    pub fn from_array(a: [C64; 3]) -> Self {
        Triple::new(a[0], a[1], a[2])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest component modulus.
    pub fn max_norm(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for Triple {
    type Output = Triple;
    fn add(self, o: Triple) -> Triple {
        Triple::new(self.p + o.p, self.q + o.q, self.r + o.r)
    }
}

impl Sub for Triple {
    type Output = Triple;
    fn sub(self, o: Triple) -> Triple {
        Triple::new(self.p - o.p, self.q - o.q, self.r - o.r)
    }
}

impl Mul<f64> for Triple {
    type Output = Triple;
    fn mul(self, s: f64) -> Triple {
        Triple::new(self.p * s, self.q * s, self.r * s)
    }
}

/// The first-order system for one parameter, with its coefficient evaluated
/// once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    pub parameter: Parameter,
    pub c: C64,
}

impl SystemSpec {
    pub fn new(parameter: Parameter) -> Self {
        SystemSpec {
            parameter,
            c: chazy_coefficient(&parameter),
        }
    }

    /// Ramanujan's system, the `k = ∞` case.
    pub fn ramanujan() -> Self {
        SystemSpec::new(Parameter::INFINITE)
    }

    pub fn rhs(&self, t: &Triple) -> Triple {
        let [p, q, r] = rhs_generic(self.c, [t.p, t.q, t.r]);
        Triple::new(p, q, r)
    }

    pub fn residual(&self, t: &Triple, dt: &Triple) -> f64 {
        residual(self, t, dt)
    }
}

/// `((P^2 - Q)/6, 2/3 (PQ - R), PR + c Q^2)` over any [`Field`].
pub fn rhs_generic<F: Field>(c: C64, [p, q, r]: [F; 3]) -> [F; 3] {
    [
        (p * p - q).scale(1.0 / 6.0),
        (p * q - r).scale(2.0 / 3.0),
        p * r + F::constant(c) * q * q,
    ]
}

pub fn system_rhs(spec: &SystemSpec, t: &Triple) -> Triple {
    spec.rhs(t)
}

/// Max over components of `|dt_i - rhs_i| / (1 + |rhs_i|)`.
pub fn residual(spec: &SystemSpec, t: &Triple, dt: &Triple) -> f64 {
    let f = spec.rhs(t);
    hybrid_distance(dt, &f)
}

/// Max over components of `|a_i - b_i| / (1 + |b_i|)`.
pub fn hybrid_distance(a: &Triple, b: &Triple) -> f64 {
    a.to_array()
        .iter()
        .zip(b.to_array())
        .map(|(x, y)| (x - y).norm() / (1.0 + y.norm()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_examples() {
        let ram = SystemSpec::ramanujan();
        assert_eq!(ram.rhs(&Triple::zero()), Triple::zero());
        assert_eq!(
            ram.rhs(&Triple::real(-6.0, 0.0, 0.0)),
            Triple::real(6.0, 0.0, 0.0)
        );

        let k2 = SystemSpec::new(Parameter::integer(2).unwrap());
        assert_eq!(
            k2.rhs(&Triple::real(-2.0, -8.0, -8.0)),
            Triple::real(2.0, 16.0, 24.0)
        );
    }

    #[test]
    fn residual_examples() {
        let ram = SystemSpec::ramanujan();
        assert_eq!(ram.residual(&Triple::zero(), &Triple::zero()), 0.0);
        let t = Triple::real(-6.0, 0.0, 0.0);
        assert_eq!(ram.residual(&t, &Triple::real(6.0, 0.0, 0.0)), 0.0);
        assert!((ram.residual(&t, &Triple::zero()) - 6.0 / 7.0).abs() < 1e-15);
    }
}

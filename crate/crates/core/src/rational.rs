//! Closed-form solutions `y = a / (x - c)`.
//!
//! Substituting into the generalised Chazy equation leaves
//! `(6 + a)(4a^2 + 24a + 36 - k^2) = 0`, so the admissible residues are
//! `-6` and `-3 ± k/2` (only `-6` when `k = ∞`). The triple is
//!
//! ```text
//! P = a/u,  Q = (a^2 + 6a)/u^2,  R = (a^2 + 6a)(a + 3)/u^3,   u = x - c.
//! ```

use crate::odeint::{linspace, Trajectory};
use crate::param::Parameter;
use crate::system::Triple;
use crate::{Error, Result, C64};

/// `|x - c|` below this raises [`Error::PoleHit`].
pub const POLE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalSolutionSpec {
    pub parameter: Parameter,
    pub a: C64,
    pub c: C64,
}

/// All admissible residues for `parameter`.
pub fn admissible_residues(parameter: &Parameter) -> Vec<C64> {
    let mut out = vec![C64::new(-6.0, 0.0)];
    if !parameter.is_infinite() {
        let half_k = parameter.to_f64() / 2.0;
        out.push(C64::new(-3.0 + half_k, 0.0));
        out.push(C64::new(-3.0 - half_k, 0.0));
    }
    out
}

impl RationalSolutionSpec {
    pub fn new(parameter: Parameter, a: C64, c: C64) -> Result<Self> {
        let ok = admissible_residues(&parameter)
            .iter()
            .any(|r| (r - a).norm() <= 1e-12 * (1.0 + r.norm()));
        if !ok {
            return Err(Error::InadmissibleResidue(format!(
                "a = {a} for k = {parameter}"
            )));
        }
        Ok(RationalSolutionSpec { parameter, a, c })
    }

    /// Every admissible solution for `parameter` with pole at `c`.
    pub fn all(parameter: Parameter, c: C64) -> Vec<Self> {
        admissible_residues(&parameter)
            .into_iter()
            .map(|a| RationalSolutionSpec { parameter, a, c })
            .collect()
    }

    fn offset(&self, x: C64) -> Result<C64> {
        let u = x - self.c;
        if u.norm() < POLE_THRESHOLD {
            return Err(Error::PoleHit { distance: u.norm() });
        }
        Ok(u)
    }

    pub fn triple(&self, x: C64) -> Result<Triple> {
        let u = self.offset(x)?;
        let a = self.a;
        let s = a * a + 6.0 * a;
        Ok(Triple::new(a / u, s / (u * u), s * (a + 3.0) / (u * u * u)))
    }

    /// Exact x-derivative of [`Self::triple`].
    pub fn derivative(&self, x: C64) -> Result<Triple> {
        let u = self.offset(x)?;
        let a = self.a;
        let s = a * a + 6.0 * a;
        let u2 = u * u;
        Ok(Triple::new(
            -a / u2,
            -2.0 * s / (u2 * u),
            -3.0 * s * (a + 3.0) / (u2 * u2),
        ))
    }
}

impl RationalSolutionSpec {
    /// The exact solution sampled at `n` uniform points of `[x0, x1]`, with
    /// exact derivatives for interpolation.
    pub fn trajectory(&self, x0: f64, x1: f64, n: usize) -> Result<Trajectory<3>> {
        let xs = linspace(x0, x1, n.max(2));
        let mut states = Vec::with_capacity(xs.len());
        let mut derivs = Vec::with_capacity(xs.len());
        for &x in &xs {
            let z = C64::new(x, 0.0);
            states.push(self.triple(z)?.to_array());
            derivs.push(self.derivative(z)?.to_array());
        }
        Trajectory::from_hermite(xs, states, derivs)
    }
}

pub fn rational_triple(rs: &RationalSolutionSpec, x: C64) -> Result<Triple> {
    rs.triple(x)
}

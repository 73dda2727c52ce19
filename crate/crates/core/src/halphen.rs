//! The generalised Darboux–Halphen system
//!
//! ```text
//! w1' = w2 w3 - w1 (w2 + w3) + τ²
//! w2' = w3 w1 - w2 (w3 + w1) + τ²
//! w3' = w1 w2 - w3 (w1 + w2) + τ²
//! τ²  = α²(w1 - w2)(w3 - w1) + β²(w2 - w3)(w1 - w2) + γ²(w3 - w1)(w2 - w3)
//! ```
//!
//! and the weighted sums `y = -(n1 w1 + n2 w2 + n3 w3)` that solve the
//! generalised Chazy equation for specific angle triples.

use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::field::{Field, Series};
use crate::odeint::{self, Trajectory};
use crate::param::Parameter;
use crate::system::Triple;
use crate::{Error, Result, C64};

/// Schwarz triangle angles `(α, β, γ)` in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngleTriple {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub gamma: Rational64,
}

impl AngleTriple {
    pub fn new(alpha: Rational64, beta: Rational64, gamma: Rational64) -> Result<Self> {
        let zero = Rational64::from_integer(0);
        if alpha < zero || beta < zero || gamma < zero {
            return Err(Error::InvalidInput("angles must be nonnegative".into()));
        }
        Ok(AngleTriple { alpha, beta, gamma })
    }

    fn as_array(&self) -> [Rational64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    fn squares(&self) -> [f64; 3] {
        self.as_array().map(|a| {
            let v = *a.numer() as f64 / *a.denom() as f64;
            v * v
        })
    }
}

impl fmt::Display for AngleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

impl Serialize for AngleTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(w1, w2, w3)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WState {
    pub w1: C64,
    pub w2: C64,
    pub w3: C64,
}

impl WState {
    pub fn new(w1: C64, w2: C64, w3: C64) -> Self {
        WState { w1, w2, w3 }
    }

    pub fn real(w1: f64, w2: f64, w3: f64) -> Self {
        WState::new(C64::new(w1, 0.0), C64::new(w2, 0.0), C64::new(w3, 0.0))
    }

    pub fn to_array(self) -> [C64; 3] {
        [self.w1, self.w2, self.w3]
    }

    pub fn from_array([w1, w2, w3]: [C64; 3]) -> Self {
        WState { w1, w2, w3 }
    }
}

pub fn tau_squared_generic<F: Field>(sq: [f64; 3], [w1, w2, w3]: [F; 3]) -> F {
    ((w1 - w2) * (w3 - w1)).scale(sq[0])
        + ((w2 - w3) * (w1 - w2)).scale(sq[1])
        + ((w3 - w1) * (w2 - w3)).scale(sq[2])
}

pub fn halphen_rhs_generic<F: Field>(sq: [f64; 3], w: [F; 3]) -> [F; 3] {
    let t2 = tau_squared_generic(sq, w);
    let [w1, w2, w3] = w;
    [
        w2 * w3 - w1 * (w2 + w3) + t2,
        w3 * w1 - w2 * (w3 + w1) + t2,
        w1 * w2 - w3 * (w1 + w2) + t2,
    ]
}

pub fn tau_squared(angles: &AngleTriple, w: &WState) -> C64 {
    tau_squared_generic(angles.squares(), w.to_array())
}

pub fn halphen_rhs(angles: &AngleTriple, w: &WState) -> WState {
    WState::from_array(halphen_rhs_generic(angles.squares(), w.to_array()))
}

/// One admissible combination: `y = -(n·w)` solves the system for
/// `parameter` when the w's follow the Halphen flow with `angles`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CombinationRule {
    pub weights: [i64; 3],
    pub angles: AngleTriple,
    pub parameter: Parameter,
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Every row of the combination table at `parameter`, each simultaneous
/// permutation of (weights, angles) listed once.
///
/// For `k = ∞` the `1/k` entries become zero.
pub fn admissible_rules(parameter: &Parameter) -> Vec<CombinationRule> {
    let r = |n, d| Rational64::new(n, d);
    let inv = parameter.reciprocal();
    let third = r(1, 3);
    let half = r(1, 2);
    let base: [([i64; 3], [Rational64; 3]); 7] = [
        ([2, 2, 2], [third, third, inv * 2]),
        ([2, 2, 2], [inv * 2, inv * 2, inv * 2]),
        ([1, 2, 3], [inv, third, half]),
        ([1, 2, 3], [inv, inv * 2, half]),
        ([1, 2, 3], [inv, third, inv * 3]),
        ([1, 1, 4], [inv, inv, inv * 4]),
        ([1, 1, 4], [inv, inv, r(2, 3)]),
    ];
    let mut out: Vec<CombinationRule> = Vec::new();
    for (weights, angles) in base {
        for perm in PERMUTATIONS {
            let rule = CombinationRule {
                weights: perm.map(|i| weights[i]),
                angles: AngleTriple {
                    alpha: angles[perm[0]],
                    beta: angles[perm[1]],
                    gamma: angles[perm[2]],
                },
                parameter: *parameter,
            };
            if !out.contains(&rule) {
                out.push(rule);
            }
        }
    }
    out
}

/// Taylor coefficients of the Halphen solution through `w` up to `h^(K-1)`.
fn w_series<const K: usize>(sq: [f64; 3], w: [C64; 3]) -> [Series<K>; 3] {
    let mut s = w.map(Series::<K>::constant);
    for n in 0..K - 1 {
        let f = halphen_rhs_generic(sq, s);
        for i in 0..3 {
            s[i].c[n + 1] = f[i].c[n] / (n + 1) as f64;
        }
    }
    s
}

/// Triple series `(P, P^2 - 6P', PQ - 3/2 Q')` for the combination.
fn triple_series(rule: &CombinationRule, w: &WState) -> [Series<4>; 3] {
    let ws = w_series::<4>(rule.angles.squares(), w.to_array());
    let [n1, n2, n3] = rule.weights.map(|n| n as f64);
    let p = -(ws[0].scale(n1) + ws[1].scale(n2) + ws[2].scale(n3));
    let q = p * p - p.derivative().scale(6.0);
    let r = p * q - q.derivative().scale(1.5);
    [p, q, r]
}

/// `(P, Q, R)` for `y = -(n·w)`, with `P'` and `P''` obtained analytically
/// from the Halphen right-hand side.
pub fn triple_from_w(rule: &CombinationRule, w: &WState) -> Triple {
    let [p, q, r] = triple_series(rule, w);
    Triple::new(p.c[0], q.c[0], r.c[0])
}

/// [`triple_from_w`] together with its exact x-derivative.
pub fn triple_jet_from_w(rule: &CombinationRule, w: &WState) -> (Triple, Triple) {
    let [p, q, r] = triple_series(rule, w);
    (
        Triple::new(p.c[0], q.c[0], r.c[0]),
        Triple::new(p.c[1], q.c[1], r.c[1]),
    )
}

/// Integrate the Halphen system from `ic` at `x0` to `x1`.
pub fn integrate_w(
    angles: &AngleTriple,
    ic: &WState,
    x0: f64,
    x1: f64,
    tol: f64,
) -> Result<Trajectory<3>> {
    let sq = angles.squares();
    odeint::integrate(
        |w: &[C64; 3]| halphen_rhs_generic(sq, *w),
        ic.to_array(),
        x0,
        x1,
        tol,
    )
}

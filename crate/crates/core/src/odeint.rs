//! Dormand–Prince 5(4) integration of autonomous complex systems along a
//! real parameter.
//!
//! Step control is the proportional-integral controller of Hairer and
//! Wanner; dense output uses the pair's 4th-order continuous extension. A run
//! stops with [`Status::Singular`] once the state modulus passes
//! [`BLOWUP`] (a movable pole) and with [`Status::Failed`] when the step
//! underflows or the state stops being finite.

use serde::Serialize;

use crate::{Error, Result, C64};

/// State modulus treated as a pole.
pub const BLOWUP: f64 = 1e8;
/// Smallest accepted step.
pub const MIN_STEP: f64 = 1e-13;
pub const MAX_STEPS: usize = 200_000;
/// Default step cap. Keeps the dense-output derivative well inside
/// `100 * tol` for the residual checks.
pub const DEFAULT_MAX_STEP: f64 = 0.01;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Completed,
    /// Blow-up detected; the trajectory covers `[x0, x_stop]`.
    Singular {
        x_stop: f64,
    },
    Failed {
        x_stop: f64,
        reason: FailReason,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailReason {
    StepSizeUnderflow,
    NonFiniteState,
    TooManySteps,
}

/// How states between mesh points are reconstructed.
#[derive(Debug, Clone, PartialEq)]
enum Interpolant<const N: usize> {
    /// Dormand–Prince continuous extension, one coefficient block per step.
    Dense(Vec<[[C64; N]; 5]>),
    /// Cubic Hermite on stored values and derivatives.
    Hermite(Vec<[C64; N]>),
    /// Local Lagrange polynomial through up to [`STENCIL`] nearby samples.
    Samples,
}

const STENCIL: usize = 7;

/// Ordered samples `(x, state)` with dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    xs: Vec<f64>,
    states: Vec<[C64; N]>,
    interp: Interpolant<N>,
    status: Status,
    tol: f64,
}

fn zero<const N: usize>() -> [C64; N] {
    [C64::new(0.0, 0.0); N]
}

fn check_mesh(xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("empty trajectory".into()));
    }
    if xs.iter().any(|x| x.is_nan()) || xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("x must be strictly increasing".into()));
    }
    Ok(())
}

impl<const N: usize> Trajectory<N> {
    /// A trajectory known only through its samples (e.g. read from a file).
    pub fn from_samples(xs: Vec<f64>, states: Vec<[C64; N]>) -> Result<Self> {
        check_mesh(&xs)?;
        if xs.len() != states.len() {
            return Err(Error::InvalidInput("length mismatch".into()));
        }
        Ok(Trajectory {
            xs,
            states,
            interp: Interpolant::Samples,
            status: Status::Completed,
            tol: 0.0,
        })
    }

    /// A trajectory with exact derivatives at every sample.
    pub fn from_hermite(
        xs: Vec<f64>,
        states: Vec<[C64; N]>,
        derivs: Vec<[C64; N]>,
    ) -> Result<Self> {
        check_mesh(&xs)?;
        if xs.len() != states.len() || xs.len() != derivs.len() {
            return Err(Error::InvalidInput("length mismatch".into()));
        }
        Ok(Trajectory {
            xs,
            states,
            interp: Interpolant::Hermite(derivs),
            status: Status::Completed,
            tol: 0.0,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn states(&self) -> &[[C64; N]] {
        &self.states
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_completed(&self) -> bool {
        self.status == Status::Completed
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn x_start(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_end(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Stored (x, state) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &[C64; N])> {
        self.xs.iter().copied().zip(self.states.iter())
    }

    fn locate(&self, x: f64) -> Result<usize> {
        let (start, end) = (self.x_start(), self.x_end());
        if !(x >= start && x <= end) {
            return Err(Error::OutOfRange { x, start, end });
        }
        // interval index i with xs[i] <= x <= xs[i+1]
        Ok(match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.xs.len().saturating_sub(2)),
            Err(i) => i - 1,
        })
    }

    /// State at `x` from the dense output.
    pub fn sample(&self, x: f64) -> Result<[C64; N]> {
        Ok(self.sample_with_derivative(x)?.0)
    }

    /// State and x-derivative of the interpolant at `x`.
    pub fn sample_with_derivative(&self, x: f64) -> Result<([C64; N], [C64; N])> {
        let i = self.locate(x)?;
        if self.xs.len() == 1 {
            return Ok((self.states[0], zero()));
        }
        let exact = if x == self.xs[i] {
            Some(i)
        } else if x == self.xs[i + 1] {
            Some(i + 1)
        } else {
            None
        };
        match &self.interp {
            Interpolant::Dense(cont) => {
                let h = self.xs[i + 1] - self.xs[i];
                let (v, d) = eval_dense(&cont[i], (x - self.xs[i]) / h, h);
                Ok((exact.map_or(v, |j| self.states[j]), d))
            }
            Interpolant::Hermite(derivs) => {
                if let Some(j) = exact {
                    return Ok((self.states[j], derivs[j]));
                }
                let h = self.xs[i + 1] - self.xs[i];
                Ok(eval_hermite(
                    &self.states[i],
                    &self.states[i + 1],
                    &derivs[i],
                    &derivs[i + 1],
                    (x - self.xs[i]) / h,
                    h,
                ))
            }
            Interpolant::Samples => {
                let (v, d) = self.eval_lagrange(x, i);
                Ok((exact.map_or(v, |j| self.states[j]), d))
            }
        }
    }

    fn eval_lagrange(&self, x: f64, i: usize) -> ([C64; N], [C64; N]) {
        let n = self.xs.len();
        let m = STENCIL.min(n);
        let lo = (i + 1).saturating_sub(m / 2).min(n - m);
        let nodes = &self.xs[lo..lo + m];
        let (w0, w1) = lagrange_weights(nodes, x);
        let mut v = zero::<N>();
        let mut d = zero::<N>();
        for (j, state) in self.states[lo..lo + m].iter().enumerate() {
            for c in 0..N {
                v[c] += state[c] * w0[j];
                d[c] += state[c] * w1[j];
            }
        }
        (v, d)
    }
}

/// Weights for the interpolating polynomial and its derivative at `x`.
fn lagrange_weights(nodes: &[f64], x: f64) -> (Vec<f64>, Vec<f64>) {
    let m = nodes.len();
    let mut w0 = vec![0.0; m];
    let mut w1 = vec![0.0; m];
    for j in 0..m {
        let mut denom = 1.0;
        for k in 0..m {
            if k != j {
                denom *= nodes[j] - nodes[k];
            }
        }
        let mut prod = 1.0;
        let mut dprod = 0.0;
        for (k, &node) in nodes.iter().enumerate().take(m) {
            if k != j {
                let f = x - node;
                dprod = dprod * f + prod;
                prod *= f;
            }
        }
        w0[j] = prod / denom;
        w1[j] = dprod / denom;
    }
    (w0, w1)
}

fn eval_dense<const N: usize>(r: &[[C64; N]; 5], th: f64, h: f64) -> ([C64; N], [C64; N]) {
    let th1 = 1.0 - th;
    let mut v = zero::<N>();
    let mut d = zero::<N>();
    for c in 0..N {
        let [r1, r2, r3, r4, r5] = [r[0][c], r[1][c], r[2][c], r[3][c], r[4][c]];
        let cc = r4 + r5 * th1;
        let b = r3 + cc * th;
        let a = r2 + b * th1;
        v[c] = r1 + a * th;
        let dc = -r5;
        let db = cc + dc * th;
        let da = -b + db * th1;
        d[c] = (a + da * th) / h;
    }
    (v, d)
}

fn eval_hermite<const N: usize>(
    y0: &[C64; N],
    y1: &[C64; N],
    d0: &[C64; N],
    d1: &[C64; N],
    t: f64,
    h: f64,
) -> ([C64; N], [C64; N]) {
    let t2 = t * t;
    let t3 = t2 * t;
    let (h00, h10, h01, h11) = (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    );
    let (g00, g10, g01, g11) = (
        6.0 * t2 - 6.0 * t,
        3.0 * t2 - 4.0 * t + 1.0,
        -6.0 * t2 + 6.0 * t,
        3.0 * t2 - 2.0 * t,
    );
    let mut v = zero::<N>();
    let mut d = zero::<N>();
    for c in 0..N {
        v[c] = y0[c] * h00 + d0[c] * (h * h10) + y1[c] * h01 + d1[c] * (h * h11);
        d[c] = (y0[c] * g00 + y1[c] * g01) / h + d0[c] * g10 + d1[c] * g11;
    }
    (v, d)
}

fn axpy<const N: usize>(y: &[C64; N], h: f64, terms: &[(f64, &[C64; N])]) -> [C64; N] {
    let mut out = *y;
    for c in 0..N {
        let mut acc = C64::new(0.0, 0.0);
        for (a, k) in terms {
            acc += k[c] * *a;
        }
        out[c] += acc * h;
    }
    out
}

fn max_norm<const N: usize>(y: &[C64; N]) -> f64 {
    y.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn finite<const N: usize>(y: &[C64; N]) -> bool {
    y.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

struct Step<const N: usize> {
    y_new: [C64; N],
    k7: [C64; N],
    err: [C64; N],
    cont: [[C64; N]; 5],
}

fn dp_step<const N: usize, F>(f: &F, y: &[C64; N], k1: &[C64; N], h: f64) -> Step<N>
where
    F: Fn(&[C64; N]) -> [C64; N],
{
    let k2 = f(&axpy(y, h, &[(A21, k1)]));
    let k3 = f(&axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(&axpy(
        y,
        h,
        &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)],
    ));
    let k6 = f(&axpy(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ));
    let y_new = axpy(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(&y_new);
    let err = axpy(
        &zero(),
        h,
        &[
            (E1, k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ],
    );
    let mut cont = [zero::<N>(); 5];
    for c in 0..N {
        let ydiff = y_new[c] - y[c];
        let bspl = k1[c] * h - ydiff;
        cont[0][c] = y[c];
        cont[1][c] = ydiff;
        cont[2][c] = bspl;
        cont[3][c] = ydiff - k7[c] * h - bspl;
        cont[4][c] =
            (k1[c] * D1 + k3[c] * D3 + k4[c] * D4 + k5[c] * D5 + k6[c] * D6 + k7[c] * D7) * h;
    }
    let _ = C2 + C3 + C4 + C5; // stage nodes are implicit for autonomous systems
    Step {
        y_new,
        k7,
        err,
        cont,
    }
}

/// Tuning knobs for [`integrate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Local error tolerance, in `[1e-14, 1e-2]`.
    pub tol: f64,
    /// Largest step; `None` lets the controller decide.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Options {
    pub fn new(tol: f64) -> Self {
        Options {
            tol,
            h_max: Some(DEFAULT_MAX_STEP),
            max_steps: MAX_STEPS,
        }
    }
}

/// Integrate `y' = rhs(y)` from `ic` at `x0` to `x1` with local error
/// tolerance `tol` (mixed absolute/relative, floor 1).
pub fn integrate<const N: usize, F>(
    rhs: F,
    ic: [C64; N],
    x0: f64,
    x1: f64,
    tol: f64,
) -> Result<Trajectory<N>>
where
    F: Fn(&[C64; N]) -> [C64; N],
{
    integrate_with(rhs, ic, x0, x1, Options::new(tol))
}

pub fn integrate_with<const N: usize, F>(
    rhs: F,
    ic: [C64; N],
    x0: f64,
    x1: f64,
    opts: Options,
) -> Result<Trajectory<N>>
where
    F: Fn(&[C64; N]) -> [C64; N],
{
    let tol = opts.tol;
    if !(1e-14..=1e-2).contains(&tol) {
        return Err(Error::InvalidInput(format!(
            "tol {tol:e} outside [1e-14, 1e-2]"
        )));
    }
    if !(x0.is_finite() && x1.is_finite() && x1 > x0) {
        return Err(Error::InvalidInput(format!(
            "need finite x1 > x0, got [{x0}, {x1}]"
        )));
    }
    if !finite(&ic) {
        return Err(Error::InvalidInput("initial state is not finite".into()));
    }
    let h_max = opts.h_max.unwrap_or(x1 - x0).min(x1 - x0);

    let mut xs = vec![x0];
    let mut states = vec![ic];
    let mut cont = Vec::new();
    let mut status = Status::Completed;

    let mut x = x0;
    let mut y = ic;
    let mut k1 = rhs(&y);
    let mut h = initial_step(&rhs, &y, &k1, tol, h_max);
    let mut facold = 1e-4_f64;
    let beta = 0.04;
    let expo1 = 0.2 - beta * 0.75;
    let (safe, fac_min, fac_max) = (0.9, 0.2, 10.0);
    let mut last_rejected = false;
    let mut steps = 0usize;

    if max_norm(&y) > BLOWUP {
        status = Status::Singular { x_stop: x0 };
    }
    while status == Status::Completed && x < x1 {
        if steps >= opts.max_steps {
            status = Status::Failed {
                x_stop: x,
                reason: FailReason::TooManySteps,
            };
            break;
        }
        steps += 1;
        if x + 1.01 * h >= x1 {
            h = x1 - x;
        }
        if h < MIN_STEP {
            status = Status::Failed {
                x_stop: x,
                reason: FailReason::StepSizeUnderflow,
            };
            break;
        }
        let st = dp_step(&rhs, &y, &k1, h);
        if !finite(&st.y_new) || !finite(&st.err) {
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        let mut err = 0.0_f64;
        for ((yc, yn), ec) in y.iter().zip(&st.y_new).zip(&st.err) {
            let sc = tol * (1.0_f64).max(yc.norm()).max(yn.norm());
            err = err.max(ec.norm() / sc);
        }
        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(beta) / safe).clamp(1.0 / fac_max, 1.0 / fac_min);
            let mut h_new = (h / fac).min(h_max);
            if last_rejected {
                h_new = h_new.min(h);
            }
            facold = err.max(1e-4);
            x = if x1 - (x + h) < 1e-15 * x1.abs().max(1.0) {
                x1
            } else {
                x + h
            };
            y = st.y_new;
            k1 = st.k7;
            xs.push(x);
            states.push(y);
            cont.push(st.cont);
            last_rejected = false;
            h = h_new;
            if max_norm(&y) > BLOWUP {
                status = Status::Singular { x_stop: x };
            } else if !finite(&k1) {
                status = Status::Failed {
                    x_stop: x,
                    reason: FailReason::NonFiniteState,
                };
            }
        } else {
            h /= (fac11 / safe).min(1.0 / fac_min);
            last_rejected = true;
        }
    }
    if status == Status::Completed && x < x1 {
        status = Status::Failed {
            x_stop: x,
            reason: FailReason::NonFiniteState,
        };
    }
    log::debug!("integrate: {} steps, status {:?}", xs.len() - 1, status);
    Ok(Trajectory {
        xs,
        states,
        interp: Interpolant::Dense(cont),
        status,
        tol,
    })
}

fn initial_step<const N: usize, F>(
    rhs: &F,
    y: &[C64; N],
    f0: &[C64; N],
    tol: f64,
    h_max: f64,
) -> f64
where
    F: Fn(&[C64; N]) -> [C64; N],
{
    let sc = |c: usize| tol * (1.0_f64).max(y[c].norm());
    let dnf = (0..N).map(|c| (f0[c].norm() / sc(c)).powi(2)).sum::<f64>() / N as f64;
    let dny = (0..N).map(|c| (y[c].norm() / sc(c)).powi(2)).sum::<f64>() / N as f64;
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        0.01 * (dny / dnf).sqrt()
    };
    h = h.min(h_max);
    let y1 = axpy(y, h, &[(1.0, f0)]);
    let f1 = rhs(&y1);
    let der2 = ((0..N)
        .map(|c| ((f1[c] - f0[c]).norm() / sc(c)).powi(2))
        .sum::<f64>()
        / N as f64)
        .sqrt()
        / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(h_max).max(MIN_STEP)
}

/// Fixed-step Dormand–Prince (5th-order solution), for convergence studies.
pub fn integrate_fixed<const N: usize, F>(
    rhs: F,
    ic: [C64; N],
    x0: f64,
    x1: f64,
    steps: usize,
) -> [C64; N]
where
    F: Fn(&[C64; N]) -> [C64; N],
{
    let h = (x1 - x0) / steps as f64;
    let mut y = ic;
    let mut k1 = rhs(&y);
    for _ in 0..steps {
        let st = dp_step(&rhs, &y, &k1, h);
        y = st.y_new;
        k1 = st.k7;
    }
    y
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

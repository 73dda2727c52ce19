//! Residual checks, flow commutation and seeded audits.
//!
//! Every check samples a trajectory at `n_check` evenly spaced points and
//! reports the worst [`hybrid_distance`](crate::system::hybrid_distance)
//! between a claimed derivative and the system right-hand side (or between
//! two trajectories). Singular or degenerate inputs are reported as such
//! instead of as failures.

use rayon::prelude::*;
use serde::Serialize;

use crate::odeint::{self, linspace, Status, Trajectory};
use crate::param::Parameter;
use crate::rational::{admissible_residues, RationalSolutionSpec};
use crate::sampling::{random_triple, trial_rng};
use crate::system::{hybrid_distance, SystemSpec, Triple};
use crate::transforms::{entry, BranchMapper, Composite, TransformEntry, TransformId};
use crate::{Error, Result, C64};

pub const DEFAULT_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_N_CHECK: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Degenerate { reason: String, x: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub argmax_x: f64,
    pub samples_checked: usize,
    pub threshold: f64,
    #[serde(flatten)]
    pub status: CheckStatus,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.status, CheckStatus::Degenerate { .. })
    }

    fn degenerate(reason: impl Into<String>, x: Option<f64>, threshold: f64) -> Self {
        ResidualReport {
            max_residual: 0.0,
            argmax_x: x.unwrap_or(f64::NAN),
            samples_checked: 0,
            threshold,
            status: CheckStatus::Degenerate {
                reason: reason.into(),
                x,
            },
        }
    }
}

fn status_reason(status: Status) -> Option<(String, f64)> {
    match status {
        Status::Completed => None,
        Status::Singular { x_stop } => Some(("singular trajectory".into(), x_stop)),
        Status::Failed { x_stop, reason } => {
            Some((format!("integration failed: {reason:?}"), x_stop))
        }
    }
}

/// Running maximum of a residual over checkpoints.
struct Worst {
    value: f64,
    x: f64,
    n: usize,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            x: f64::NAN,
            n: 0,
        }
    }

    fn add(&mut self, x: f64, r: f64) {
        self.n += 1;
        // NaN counts as worst
        if r.is_nan() || r > self.value {
            self.value = if r.is_nan() { f64::INFINITY } else { r };
            self.x = x;
        }
        if self.x.is_nan() {
            self.x = x;
        }
    }

    fn report(self, threshold: f64) -> ResidualReport {
        let status = if self.value <= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        ResidualReport {
            max_residual: self.value,
            argmax_x: self.x,
            samples_checked: self.n,
            threshold,
            status,
        }
    }
}

fn checkpoints<const N: usize>(traj: &Trajectory<N>, n_check: usize) -> Vec<f64> {
    linspace(traj.x_start(), traj.x_end(), n_check.max(2))
}

/// Compare the interpolant derivative of `traj` with the system at
/// `n_check` points.
pub fn verify_trajectory(
    spec: &SystemSpec,
    traj: &Trajectory<3>,
    n_check: usize,
    threshold: f64,
) -> ResidualReport {
    if let Some((reason, x)) = status_reason(traj.status()) {
        return ResidualReport::degenerate(reason, Some(x), threshold);
    }
    let mut worst = Worst::new();
    for x in checkpoints(traj, n_check) {
        let (y, dy) = traj
            .sample_with_derivative(x)
            .expect("checkpoint inside range");
        let r = spec.residual(&Triple::from_array(y), &Triple::from_array(dy));
        worst.add(x, r);
    }
    worst.report(threshold)
}

/// Residual of given `(x, state, derivative)` points against `spec`.
pub fn pointwise_residual<I>(spec: &SystemSpec, points: I, threshold: f64) -> ResidualReport
where
    I: IntoIterator<Item = (f64, Triple, Triple)>,
{
    let mut worst = Worst::new();
    for (x, t, dt) in points {
        worst.add(x, spec.residual(&t, &dt));
    }
    worst.report(threshold)
}

/// Walk the checkpoints of `source`, map each point with `f` (given the
/// source state and its derivative from `src`) and check the image against
/// `tgt`.
fn mapped_residual<F>(
    src: &SystemSpec,
    tgt: &SystemSpec,
    source: &Trajectory<3>,
    n_check: usize,
    threshold: f64,
    mut f: F,
) -> ResidualReport
where
    F: FnMut(f64, &Triple, &Triple) -> Result<(Triple, Triple)>,
{
    if let Some((reason, x)) = status_reason(source.status()) {
        return ResidualReport::degenerate(reason, Some(x), threshold);
    }
    let mut worst = Worst::new();
    for x in checkpoints(source, n_check) {
        let t = Triple::from_array(source.sample(x).expect("checkpoint inside range"));
        let dt = src.rhs(&t);
        match f(x, &t, &dt) {
            Ok((img, dimg)) => worst.add(x, tgt.residual(&img, &dimg)),
            Err(e) => return ResidualReport::degenerate(e.to_string(), Some(x), threshold),
        }
    }
    worst.report(threshold)
}

/// Residual of the image of `source` under one (variant, branch) of an entry
/// against the entry's target system.
pub fn transform_residual(
    entry: &'static TransformEntry,
    variant: &str,
    branch: usize,
    source: &Trajectory<3>,
    n_check: usize,
    threshold: f64,
) -> Result<ResidualReport> {
    let mut mapper = BranchMapper::new(entry, variant, branch)?;
    let src = SystemSpec::new(entry.source);
    let tgt = SystemSpec::new(entry.target);
    Ok(mapped_residual(
        &src,
        &tgt,
        source,
        n_check,
        threshold,
        |x, t, dt| mapper.map(x, t, dt),
    ))
}

/// [`transform_residual`] for a chain of entries.
pub fn composite_residual(
    composite: &Composite,
    source: &Trajectory<3>,
    n_check: usize,
    threshold: f64,
) -> ResidualReport {
    let mut mapper = composite.mapper();
    let src = SystemSpec::new(composite.source());
    let tgt = SystemSpec::new(composite.target());
    mapped_residual(&src, &tgt, source, n_check, threshold, |x, t, dt| {
        mapper.map(x, t, dt)
    })
}

/// Image of `source` at `n` uniform points, with exact derivatives, as a
/// trajectory of the target system.
pub fn map_trajectory<F>(
    source: &Trajectory<3>,
    src: &SystemSpec,
    n: usize,
    mut f: F,
) -> Result<Trajectory<3>>
where
    F: FnMut(f64, &Triple, &Triple) -> Result<(Triple, Triple)>,
{
    if let Some((reason, x)) = status_reason(source.status()) {
        return Err(Error::InvalidInput(format!("{reason} at x = {x}")));
    }
    let xs = checkpoints(source, n);
    let mut states = Vec::with_capacity(xs.len());
    let mut derivs = Vec::with_capacity(xs.len());
    for &x in &xs {
        let t = Triple::from_array(source.sample(x)?);
        let (img, dimg) = f(x, &t, &src.rhs(&t))?;
        states.push(img.to_array());
        derivs.push(dimg.to_array());
    }
    Trajectory::from_hermite(xs, states, derivs)
}

/// Integrate the source system from `ic` and map it pointwise, then
/// integrate the target system from the image of `ic`; report the sup
/// distance between the two target-side curves.
#[allow(clippy::too_many_arguments)]
pub fn commutation_check(
    entry: &'static TransformEntry,
    variant: &str,
    branch: usize,
    ic: &Triple,
    x0: f64,
    x1: f64,
    tol: f64,
    n_check: usize,
    threshold: f64,
) -> Result<ResidualReport> {
    let src = SystemSpec::new(entry.source);
    let tgt = SystemSpec::new(entry.target);
    let mut mapper = BranchMapper::new(entry, variant, branch)?;
    let image_ic = match mapper.map_value(x0, ic) {
        Ok(t) => t,
        Err(e) => {
            return Ok(ResidualReport::degenerate(
                e.to_string(),
                Some(x0),
                threshold,
            ))
        }
    };
    let source = odeint::integrate(
        |y: &[C64; 3]| src.rhs(&Triple::from_array(*y)).to_array(),
        ic.to_array(),
        x0,
        x1,
        tol,
    )?;
    let target = odeint::integrate(
        |y: &[C64; 3]| tgt.rhs(&Triple::from_array(*y)).to_array(),
        image_ic.to_array(),
        x0,
        x1,
        tol,
    )?;
    for traj in [&source, &target] {
        if let Some((reason, x)) = status_reason(traj.status()) {
            return Ok(ResidualReport::degenerate(reason, Some(x), threshold));
        }
    }
    let mut worst = Worst::new();
    for x in checkpoints(&source, n_check) {
        let t = Triple::from_array(source.sample(x)?);
        let mapped = if x == x0 {
            image_ic
        } else {
            match mapper.map_value(x, &t) {
                Ok(m) => m,
                Err(e) => {
                    return Ok(ResidualReport::degenerate(
                        e.to_string(),
                        Some(x),
                        threshold,
                    ))
                }
            }
        };
        let flowed = Triple::from_array(target.sample(x)?);
        worst.add(x, hybrid_distance(&mapped, &flowed));
    }
    Ok(worst.report(threshold))
}

/// Integrate `spec` from `ic` with the triple system's right-hand side.
pub fn integrate_system(
    spec: &SystemSpec,
    ic: &Triple,
    x0: f64,
    x1: f64,
    tol: f64,
) -> Result<Trajectory<3>> {
    odeint::integrate(
        |y: &[C64; 3]| spec.rhs(&Triple::from_array(*y)).to_array(),
        ic.to_array(),
        x0,
        x1,
        tol,
    )
}

/// Settings shared by all trials of an audit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditOptions {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub threshold: f64,
    pub n_check: usize,
    pub x0: f64,
    pub x1: f64,
}

impl AuditOptions {
    pub fn new(trials: usize, seed: u64) -> Self {
        AuditOptions {
            trials,
            seed,
            tol: DEFAULT_TOL,
            threshold: DEFAULT_THRESHOLD,
            n_check: DEFAULT_N_CHECK,
            x0: -0.125,
            x1: 0.125,
        }
    }
}

/// Pass ratio required over non-degenerate trials.
pub const PASS_RATIO: f64 = 0.95;
/// Share of degenerate trials above which a verdict is inconclusive.
pub const MAX_DEGENERATE_RATIO: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchStats {
    pub index: usize,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub degenerate: usize,
    pub worst_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantReport {
    pub name: String,
    pub branches: Vec<BranchStats>,
    pub verdict: Verdict,
}

/// Result of one (variant, branch) on a closed-form rational source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalCase {
    pub residue: f64,
    pub variant: String,
    pub branch: usize,
    pub report: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub entry: TransformId,
    pub source: Parameter,
    pub target: Parameter,
    pub seed: u64,
    pub variants: Vec<VariantReport>,
    /// Rational solutions of the source system, reported apart from the
    /// random trials.
    pub exceptional: Vec<ExceptionalCase>,
}

impl AuditReport {
    pub fn passing_variants(&self) -> Vec<&str> {
        self.variants
            .iter()
            .filter(|v| v.verdict == Verdict::Pass)
            .map(|v| v.name.as_str())
            .collect()
    }

    pub fn variant(&self, name: &str) -> Option<&VariantReport> {
        self.variants.iter().find(|v| v.name == name)
    }

    /// Largest worst-residual over all branches of `name`.
    pub fn worst_residual(&self, name: &str) -> Option<f64> {
        self.variant(name).map(|v| {
            v.branches
                .iter()
                .map(|b| b.worst_residual)
                .fold(0.0, f64::max)
        })
    }
}

/// Outcome of one trial: one report per (variant, branch), variant-major.
fn run_trial(e: &'static TransformEntry, opts: &AuditOptions, trial: usize) -> Vec<ResidualReport> {
    let mut rng = trial_rng(opts.seed, trial as u64);
    let ic = random_triple(&mut rng);
    let src = SystemSpec::new(e.source);
    let n_cases = e.variants.len() * e.branch_count();
    let source = match integrate_system(&src, &ic, opts.x0, opts.x1, opts.tol) {
        Ok(t) => t,
        Err(err) => {
            return vec![ResidualReport::degenerate(err.to_string(), None, opts.threshold); n_cases]
        }
    };
    let check = verify_trajectory(&src, &source, opts.n_check, 100.0 * opts.tol.max(1e-10));
    if !check.passed() {
        let why = format!("source trajectory not verified ({:e})", check.max_residual);
        return vec![ResidualReport::degenerate(why, None, opts.threshold); n_cases];
    }
    let mut out = Vec::with_capacity(n_cases);
    for v in &e.variants {
        for b in 0..e.branch_count() {
            out.push(
                transform_residual(e, v.name, b, &source, opts.n_check, opts.threshold)
                    .expect("variant and branch come from the entry"),
            );
        }
    }
    out
}

fn exceptional_cases(e: &'static TransformEntry, opts: &AuditOptions) -> Vec<ExceptionalCase> {
    let mut out = Vec::new();
    for a in admissible_residues(&e.source) {
        let rs = RationalSolutionSpec::new(e.source, a, C64::new(-1.0, 0.0))
            .expect("admissible residue");
        let traj = rs
            .trajectory(opts.x0, opts.x1, opts.n_check)
            .expect("pole lies outside the audit interval");
        for v in &e.variants {
            for b in 0..e.branch_count() {
                let report = transform_residual(e, v.name, b, &traj, opts.n_check, opts.threshold)
                    .expect("variant and branch come from the entry");
                out.push(ExceptionalCase {
                    residue: a.re,
                    variant: v.name.to_string(),
                    branch: b,
                    report,
                });
            }
        }
    }
    out
}

fn verdict(branches: &[BranchStats]) -> Verdict {
    let mut verdict = Verdict::Pass;
    for b in branches {
        let counted = b.passes + b.failures;
        if b.degenerate as f64 > MAX_DEGENERATE_RATIO * b.trials as f64 || counted == 0 {
            return Verdict::Inconclusive;
        }
        if (b.passes as f64) < PASS_RATIO * counted as f64 {
            verdict = Verdict::Fail;
        }
    }
    verdict
}

/// Run `opts.trials` random trials of every variant and branch of `id`.
pub fn audit(id: TransformId, opts: &AuditOptions) -> Result<AuditReport> {
    if opts.trials == 0 {
        return Err(Error::InvalidInput("audit needs at least one trial".into()));
    }
    if opts.n_check < 2 {
        return Err(Error::InvalidInput("n_check must be at least 2".into()));
    }
    let e = entry(id);
    let per_trial: Vec<Vec<ResidualReport>> = (0..opts.trials)
        .into_par_iter()
        .map(|i| run_trial(e, opts, i))
        .collect();
    let nb = e.branch_count();
    let variants = e
        .variants
        .iter()
        .enumerate()
        .map(|(vi, v)| {
            let branches: Vec<BranchStats> = (0..nb)
                .map(|b| {
                    let mut s = BranchStats {
                        index: b,
                        trials: opts.trials,
                        passes: 0,
                        failures: 0,
                        degenerate: 0,
                        worst_residual: 0.0,
                    };
                    for reports in &per_trial {
                        let r = &reports[vi * nb + b];
                        match r.status {
                            CheckStatus::Pass => s.passes += 1,
                            CheckStatus::Fail => s.failures += 1,
                            CheckStatus::Degenerate { .. } => s.degenerate += 1,
                        }
                        if !r.is_degenerate() {
                            s.worst_residual = s.worst_residual.max(r.max_residual);
                        }
                    }
                    s
                })
                .collect();
            VariantReport {
                name: v.name.to_string(),
                verdict: verdict(&branches),
                branches,
            }
        })
        .collect();
    log::info!("audit {id}: {} trials, seed {}", opts.trials, opts.seed);
    Ok(AuditReport {
        entry: id,
        source: e.source,
        target: e.target,
        seed: opts.seed,
        variants,
        exceptional: exceptional_cases(e, opts),
    })
}

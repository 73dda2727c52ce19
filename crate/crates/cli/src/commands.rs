//! Subcommand implementations.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chazy::halphen::{admissible_rules, integrate_w, triple_jet_from_w, AngleTriple, WState};
use chazy::odeint::{linspace, Status, Trajectory};
use chazy::sampling::{random_triple, random_wstate, trial_rng};
use chazy::transforms::{catalog, compose, entry, BranchMapper, Stage, TransformId};
use chazy::verify::{
    audit, composite_residual, integrate_system, pointwise_residual, transform_residual,
    verify_trajectory, AuditOptions, AuditReport, ResidualReport, Verdict,
};
use chazy::{Parameter, SystemSpec, Triple, C64};
use log::info;
use serde::Serialize;

use crate::config::RunConfig;
use crate::io::{read_table, write_table, Format, Table, HALPHEN_HEADER, TRIPLE_HEADER};
use crate::literal;

/// How a command finished when it did not hit an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
    NumericalFailure,
}

/// An error that should map to the numerical-failure exit code.
#[derive(Debug)]
pub struct Numerical;

impl std::fmt::Display for Numerical {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("numerical failure")
    }
}

impl std::error::Error for Numerical {}

/// `println!` that treats a closed stdout (e.g. piped into `head`) as done.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        match writeln!(std::io::stdout().lock(), $($arg)*) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e),
            _ => Ok(()),
        }
    }};
}

/// Half-width of the default interval for generated sources.
const DEFAULT_HALF_WIDTH: f64 = 0.125;

fn report_outcome(r: &ResidualReport) -> Outcome {
    if r.passed() {
        Outcome::Success
    } else if r.is_degenerate() {
        Outcome::NumericalFailure
    } else {
        Outcome::VerificationFailed
    }
}

fn status_outcome(status: Status) -> Outcome {
    match status {
        Status::Completed => Outcome::Success,
        _ => Outcome::NumericalFailure,
    }
}

fn describe_status(status: Status) -> String {
    match status {
        Status::Completed => "completed".into(),
        Status::Singular { x_stop } => format!("singular, stopped at x = {x_stop}"),
        Status::Failed { x_stop, reason } => format!("failed ({reason:?}) at x = {x_stop}"),
    }
}

fn print_report(label: &str, r: &ResidualReport, cfg: &RunConfig) -> Result<()> {
    match cfg.format {
        Format::Json => say!("{}", serde_json::to_string_pretty(r)?)?,
        Format::Csv => {
            let verdict = match &r.status {
                chazy::verify::CheckStatus::Pass => "pass".to_string(),
                chazy::verify::CheckStatus::Fail => "fail".to_string(),
                chazy::verify::CheckStatus::Degenerate { reason, .. } => {
                    format!("degenerate ({reason})")
                }
            };
            say!(
                "{label}: {verdict}; max residual {:.3e} at x = {} over {} samples (threshold {:e})",
                r.max_residual, r.argmax_x, r.samples_checked, r.threshold
            )?;
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn table_of(traj: &Trajectory<3>, xs: Option<Vec<f64>>) -> Result<Table> {
    let xs = xs.unwrap_or_else(|| traj.xs().to_vec());
    let states = xs
        .iter()
        .map(|&x| traj.sample(x))
        .collect::<Result<_, _>>()?;
    Ok(Table { xs, states })
}

fn output_nodes(traj: &Trajectory<3>, samples: Option<usize>) -> Result<Option<Vec<f64>>> {
    match samples {
        None => Ok(None),
        Some(n) if n >= 2 => Ok(Some(linspace(traj.x_start(), traj.x_end(), n))),
        Some(_) => bail!("--samples must be at least 2"),
    }
}

pub fn catalog_cmd(cfg: &RunConfig) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Row {
        id: String,
        source: Parameter,
        target: Parameter,
        branches: usize,
        variants: Vec<&'static str>,
        closed_form: bool,
        summary: &'static str,
    }
    let rows: Vec<Row> = catalog()
        .iter()
        .map(|e| Row {
            id: e.id.to_string(),
            source: e.source,
            target: e.target,
            branches: e.branch_count(),
            variants: e.variant_names(),
            closed_form: e.is_closed_form(),
            summary: e.summary,
        })
        .collect();
    match cfg.format {
        Format::Json => say!("{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Csv => {
            for r in &rows {
                say!(
                    "{:<4} k={:<4} -> k={:<4} branches={} variants={:<20} {}",
                    r.id,
                    r.source.to_string(),
                    r.target.to_string(),
                    r.branches,
                    r.variants.join(","),
                    r.summary
                )?;
            }
        }
    }
    Ok(Outcome::Success)
}

pub struct IntegrateArgs {
    pub k: Parameter,
    pub ic: Option<[C64; 3]>,
    pub x0: f64,
    pub x1: f64,
    pub samples: Option<usize>,
    pub out: PathBuf,
}

pub fn integrate_cmd(a: IntegrateArgs, cfg: &RunConfig) -> Result<Outcome> {
    let spec = SystemSpec::new(a.k);
    let ic = match a.ic {
        Some(ic) => Triple::from_array(ic),
        None => random_triple(&mut trial_rng(cfg.seed, 0)),
    };
    info!(
        "integrating k={} from {:?} on [{}, {}]",
        a.k,
        ic.to_array(),
        a.x0,
        a.x1
    );
    let traj = integrate_system(&spec, &ic, a.x0, a.x1, cfg.tol)?;
    let table = table_of(&traj, output_nodes(&traj, a.samples)?)?;
    write_table(&a.out, &TRIPLE_HEADER, &table, cfg.format)?;
    say!(
        "{}: {} samples on [{}, {}] written to {}",
        describe_status(traj.status()),
        table.xs.len(),
        traj.x_start(),
        traj.x_end(),
        a.out.display()
    )?;
    Ok(status_outcome(traj.status()))
}

fn load_triple_trajectory(path: &Path) -> Result<Trajectory<3>> {
    let t = read_table(path, &TRIPLE_HEADER)?;
    Trajectory::from_samples(t.xs, t.states)
        .with_context(|| format!("invalid trajectory in {}", path.display()))
}

pub fn verify_cmd(
    k: Parameter,
    input: &Path,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Outcome> {
    let traj = load_triple_trajectory(input)?;
    let report = verify_trajectory(&SystemSpec::new(k), &traj, cfg.n_check, cfg.pass_threshold);
    if let Some(out) = out {
        write_json(out, &report)?;
    }
    print_report(&format!("k={k}"), &report, cfg)?;
    Ok(report_outcome(&report))
}

/// Where a transform reads its source from.
pub struct Source {
    pub input: Option<PathBuf>,
    pub x0: Option<f64>,
    pub x1: Option<f64>,
    pub samples: usize,
}

impl Source {
    /// The source trajectory and the nodes at which the image is written.
    fn load(&self, k: Parameter, cfg: &RunConfig) -> Result<(Trajectory<3>, Vec<f64>)> {
        match &self.input {
            Some(path) => {
                if self.x0.is_some() || self.x1.is_some() {
                    bail!("--x0/--x1 only apply to generated sources, not --in");
                }
                let traj = load_triple_trajectory(path)?;
                let xs = traj.xs().to_vec();
                Ok((traj, xs))
            }
            None => {
                let x0 = self.x0.unwrap_or(-DEFAULT_HALF_WIDTH);
                let x1 = self.x1.unwrap_or(DEFAULT_HALF_WIDTH);
                if self.samples < 2 {
                    bail!("--samples must be at least 2");
                }
                let ic = random_triple(&mut trial_rng(cfg.seed, 0));
                info!(
                    "generated source k={k} from {:?} on [{x0}, {x1}]",
                    ic.to_array()
                );
                let traj = integrate_system(&SystemSpec::new(k), &ic, x0, x1, cfg.tol)?;
                if !traj.is_completed() {
                    return Err(anyhow::Error::new(Numerical)).context(format!(
                        "source trajectory {}",
                        describe_status(traj.status())
                    ));
                }
                let xs = linspace(x0, x1, self.samples);
                Ok((traj, xs))
            }
        }
    }
}

fn map_nodes<F>(source: &Trajectory<3>, src: &SystemSpec, xs: Vec<f64>, mut f: F) -> Result<Table>
where
    F: FnMut(f64, &Triple, &Triple) -> chazy::Result<(Triple, Triple)>,
{
    let mut states = Vec::with_capacity(xs.len());
    for &x in &xs {
        let t = Triple::from_array(source.sample(x)?);
        let (img, _) =
            f(x, &t, &src.rhs(&t)).with_context(|| format!("mapping failed at x = {x}"))?;
        states.push(img.to_array());
    }
    Ok(Table { xs, states })
}

pub fn transform_cmd(
    id: TransformId,
    variant: Option<String>,
    branch: usize,
    source: Source,
    out: &Path,
    cfg: &RunConfig,
) -> Result<Outcome> {
    let e = entry(id);
    let variant = variant.unwrap_or_else(|| e.variants[0].name.to_string());
    let mut mapper = BranchMapper::new(e, &variant, branch)?;
    let src = SystemSpec::new(e.source);
    let (traj, xs) = source.load(e.source, cfg)?;
    let table = map_nodes(&traj, &src, xs, |x, t, dt| mapper.map(x, t, dt))?;
    write_table(out, &TRIPLE_HEADER, &table, cfg.format)?;
    let report = transform_residual(e, &variant, branch, &traj, cfg.n_check, cfg.pass_threshold)?;
    print_report(
        &format!(
            "{id} {variant} branch {branch} (k={} -> k={})",
            e.source, e.target
        ),
        &report,
        cfg,
    )?;
    Ok(report_outcome(&report))
}

pub fn compose_cmd(
    ids: Vec<TransformId>,
    branches: Option<Vec<usize>>,
    variants: Option<Vec<String>>,
    source: Source,
    out: &Path,
    cfg: &RunConfig,
) -> Result<Outcome> {
    let n = ids.len();
    let branches = branches.unwrap_or_else(|| vec![0; n]);
    if branches.len() != n {
        bail!("--branches has {} entries for {n} stages", branches.len());
    }
    if variants.as_ref().is_some_and(|v| v.len() != n) {
        bail!("--variants needs one entry per stage");
    }
    let stages = ids
        .iter()
        .zip(&branches)
        .enumerate()
        .map(|(i, (&id, &b))| {
            let v = variants
                .as_ref()
                .map_or(entry(id).variants[0].name, |v| v[i].as_str());
            Stage::new(id, v, b)
        })
        .collect();
    let composite = compose(stages)?;
    let src = SystemSpec::new(composite.source());
    let (traj, xs) = source.load(composite.source(), cfg)?;
    let mut mapper = composite.mapper();
    let table = map_nodes(&traj, &src, xs, |x, t, dt| mapper.map(x, t, dt))?;
    write_table(out, &TRIPLE_HEADER, &table, cfg.format)?;
    let report = composite_residual(&composite, &traj, cfg.n_check, cfg.pass_threshold);
    let label = composite
        .stages()
        .iter()
        .map(|s| format!("{}[{}:{}]", s.id, s.variant, s.branch))
        .collect::<Vec<_>>()
        .join(" -> ");
    print_report(
        &format!(
            "{label} (k={} -> k={})",
            composite.source(),
            composite.target()
        ),
        &report,
        cfg,
    )?;
    Ok(report_outcome(&report))
}

pub fn audit_cmd(
    id: TransformId,
    trials: usize,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Outcome> {
    if trials == 0 {
        bail!("--trials must be positive");
    }
    let opts = AuditOptions {
        tol: cfg.tol,
        threshold: cfg.pass_threshold,
        n_check: cfg.n_check,
        ..AuditOptions::new(trials, cfg.seed)
    };
    info!("auditing {id}: {trials} trials, seed {}", cfg.seed);
    let report = audit(id, &opts)?;
    if let Some(out) = out {
        write_json(out, &report)?;
    }
    match cfg.format {
        Format::Json if out.is_none() => say!("{}", serde_json::to_string_pretty(&report)?)?,
        _ => print_audit_summary(&report)?,
    }
    Ok(audit_outcome(&report))
}

fn print_audit_summary(r: &AuditReport) -> Result<()> {
    say!(
        "{} (k={} -> k={}), seed {}",
        r.entry,
        r.source,
        r.target,
        r.seed
    )?;
    for v in &r.variants {
        let worst = v
            .branches
            .iter()
            .map(|b| b.worst_residual)
            .fold(0.0, f64::max);
        let degenerate: usize = v.branches.iter().map(|b| b.degenerate).sum();
        say!(
            "  {:<10} {:<12} worst residual {:.3e}, degenerate trials {}",
            v.name,
            format!("{:?}", v.verdict).to_lowercase(),
            worst,
            degenerate
        )?;
    }
    Ok(())
}

/// Success when some variant passes; otherwise a failure if any variant was
/// refuted, and numerical trouble if everything was inconclusive.
fn audit_outcome(r: &AuditReport) -> Outcome {
    if r.variants.iter().any(|v| v.verdict == Verdict::Pass) {
        Outcome::Success
    } else if r.variants.iter().any(|v| v.verdict == Verdict::Fail) {
        Outcome::VerificationFailed
    } else {
        Outcome::NumericalFailure
    }
}

pub struct HalphenArgs {
    pub angles: AngleTriple,
    pub weights: Option<[i64; 3]>,
    pub k: Option<Parameter>,
    pub ic: Option<[C64; 3]>,
    pub x0: f64,
    pub x1: f64,
    pub samples: Option<usize>,
    pub out: PathBuf,
    pub triple_out: Option<PathBuf>,
}

pub fn halphen_cmd(a: HalphenArgs, cfg: &RunConfig) -> Result<Outcome> {
    let rule = match (a.weights, a.k) {
        (Some(weights), Some(k)) => Some(
            admissible_rules(&k)
                .into_iter()
                .find(|r| r.weights == weights && r.angles == a.angles)
                .with_context(|| {
                    format!(
                        "weights {weights:?} with angles {} are not admissible for k={k}",
                        a.angles
                    )
                })?,
        ),
        (None, None) => None,
        _ => bail!("--weights and --k must be given together"),
    };
    if a.triple_out.is_some() && rule.is_none() {
        bail!("--triple-out requires --weights and --k");
    }
    let ic = match a.ic {
        Some(ic) => WState::from_array(ic),
        None => random_wstate(&mut trial_rng(cfg.seed, 0)),
    };
    info!(
        "halphen flow with angles {} from {:?}",
        a.angles,
        ic.to_array()
    );
    let traj = integrate_w(&a.angles, &ic, a.x0, a.x1, cfg.tol)?;
    let table = table_of(&traj, output_nodes(&traj, a.samples)?)?;
    write_table(&a.out, &HALPHEN_HEADER, &table, cfg.format)?;
    say!(
        "{}: {} samples on [{}, {}] written to {}",
        describe_status(traj.status()),
        table.xs.len(),
        traj.x_start(),
        traj.x_end(),
        a.out.display()
    )?;
    let Some(rule) = rule else {
        return Ok(status_outcome(traj.status()));
    };
    if !traj.is_completed() {
        return Ok(Outcome::NumericalFailure);
    }
    let xs = linspace(traj.x_start(), traj.x_end(), cfg.n_check);
    let mut points = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (t, dt) = triple_jet_from_w(&rule, &WState::from_array(traj.sample(x)?));
        points.push((x, t, dt));
    }
    if let Some(path) = &a.triple_out {
        let states = points.iter().map(|(_, t, _)| t.to_array()).collect();
        write_table(path, &TRIPLE_HEADER, &Table { xs, states }, cfg.format)?;
    }
    let report = pointwise_residual(&SystemSpec::new(rule.parameter), points, cfg.pass_threshold);
    print_report(
        &format!("combination {:?} at k={}", rule.weights, rule.parameter),
        &report,
        cfg,
    )?;
    Ok(report_outcome(&report))
}

pub fn parse_angles(s: &str) -> Result<AngleTriple> {
    let [a, b, c] = literal::fractions::<3>(s)?;
    Ok(AngleTriple::new(a, b, c)?)
}

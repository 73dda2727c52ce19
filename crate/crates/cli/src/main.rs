//! `chazy`: integrate, transform, verify and audit from the command line.

mod commands;
mod config;
mod io;
mod literal;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use chazy::transforms::TransformId;
use chazy::{Parameter, C64};
use clap::{Args, Parser, Subcommand};

use commands::{HalphenArgs, IntegrateArgs, Numerical, Outcome, Source};
use config::{FileConfig, RunConfig};
use io::Format;

#[derive(Parser, Debug)]
#[command(
    name = "chazy",
    version,
    about = "Numerical laboratory for the generalised Chazy systems"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML file with `key = value` settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Integrator tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Residual threshold for a pass
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// Number of verification checkpoints
    #[arg(long, global = true)]
    n_check: Option<usize>,
    /// Seed for every random choice
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trajectory file format and report style
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the transformation catalog
    Catalog,
    /// Integrate a triple system and write the trajectory
    Integrate {
        #[arg(long, value_parser = literal::parameter)]
        k: Parameter,
        /// Initial (P, Q, R) as `a+bi,a+bi,a+bi`; random from the seed if omitted
        #[arg(long, allow_hyphen_values = true, value_parser = literal::complex_list::<3>)]
        ic: Option<[C64; 3]>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        x1: f64,
        /// Resample uniformly at this many points instead of the step nodes
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map a source trajectory through one catalog entry
    Transform {
        #[arg(long)]
        id: TransformId,
        /// Defaults to the first listed variant
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = 0)]
        branch: usize,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a trajectory file against a system
    Verify {
        #[arg(long, value_parser = literal::parameter)]
        k: Parameter,
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized audit of one catalog entry
    Audit {
        #[arg(long)]
        id: TransformId,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// JSON report destination
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain catalog entries and map a source trajectory through them
    Compose {
        /// Comma separated ids, e.g. T14,T11,T6
        #[arg(long, value_delimiter = ',', required = true)]
        ids: Vec<TransformId>,
        /// One branch per stage (default all 0)
        #[arg(long, value_delimiter = ',')]
        branches: Option<Vec<usize>>,
        /// One variant per stage (default the first listed)
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<String>>,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate the Halphen system, optionally checking a combination
    Halphen {
        /// Angles `a,b,c` as fractions
        #[arg(long)]
        angles: String,
        /// Combination weights `n1,n2,n3`; requires --k
        #[arg(long, value_parser = literal::integers::<3>, requires = "k")]
        weights: Option<[i64; 3]>,
        #[arg(long, value_parser = literal::parameter, requires = "weights")]
        k: Option<Parameter>,
        /// Initial (w1, w2, w3); random from the seed if omitted
        #[arg(long, allow_hyphen_values = true, value_parser = literal::complex_list::<3>)]
        ic: Option<[C64; 3]>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        x1: f64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Write the combination's (P, Q, R) at the checkpoints here
        #[arg(long, requires = "weights")]
        triple_out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Source trajectory; a seeded random one is integrated if omitted
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<f64>,
    /// Output points for a generated source
    #[arg(long, default_value_t = 201)]
    samples: usize,
}

impl From<SourceArgs> for Source {
    fn from(s: SourceArgs) -> Self {
        Source {
            input: s.input,
            x0: s.x0,
            x1: s.x1,
            samples: s.samples,
        }
    }
}

fn config(g: &GlobalArgs) -> Result<RunConfig> {
    let file = match &g.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig {
        tol: g.tol,
        pass_threshold: g.threshold,
        n_check: g.n_check,
        seed: g.seed,
        format: g.format,
    };
    RunConfig::resolve(file, flags)
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = config(&cli.global)?;
    log::debug!("{cfg:?}");
    match cli.command {
        Command::Catalog => commands::catalog_cmd(&cfg),
        Command::Integrate {
            k,
            ic,
            x0,
            x1,
            samples,
            out,
        } => commands::integrate_cmd(
            IntegrateArgs {
                k,
                ic,
                x0,
                x1,
                samples,
                out,
            },
            &cfg,
        ),
        Command::Transform {
            id,
            variant,
            branch,
            source,
            out,
        } => commands::transform_cmd(id, variant, branch, source.into(), &out, &cfg),
        Command::Verify { k, input, out } => commands::verify_cmd(k, &input, out.as_deref(), &cfg),
        Command::Audit { id, trials, out } => commands::audit_cmd(id, trials, out.as_deref(), &cfg),
        Command::Compose {
            ids,
            branches,
            variants,
            source,
            out,
        } => commands::compose_cmd(ids, branches, variants, source.into(), &out, &cfg),
        Command::Halphen {
            angles,
            weights,
            k,
            ic,
            x0,
            x1,
            samples,
            out,
            triple_out,
        } => {
            let angles = commands::parse_angles(&angles)?;
            let args = HalphenArgs {
                angles,
                weights,
                k,
                ic,
                x0,
                x1,
                samples,
                out,
                triple_out,
            };
            commands::halphen_cmd(args, &cfg)
        }
    }
}

/// 3 for numerical trouble anywhere in the chain, otherwise 2 (bad input).
fn error_code(err: &anyhow::Error) -> u8 {
    use chazy::Error as E;
    for cause in err.chain() {
        if cause.is::<Numerical>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::PoleHit { .. }
                | E::BranchCollision { .. }
                | E::DegenerateInput { .. }
                | E::InconsistentRoot(_)
                | E::MultipleRoot(_) => 3,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CHAZY_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.trim().is_empty() && !l.starts_with("Usage"))
                .map(str::trim)
                .collect();
            eprintln!("{}", line.join(" "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Ok(Outcome::NumericalFailure) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use feflab_cli::commands::{self, MetricSource};
use feflab_cli::{suites, CliError, Report, Settings, DEFAULT_SEED};

/// Verification suites for Fefferman metrics.
///
/// Reports are JSON lines: one record per check sorted by id, measured values,
/// then a summary. Exit status: 0 all checks pass, 1 a check failed, 2 usage
/// or input error, 3 numerical or singularity error.
#[derive(Parser, Debug)]
#[command(name = "feflab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Seed for every random point.
    #[arg(long, global = true, env = "FEFLAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Replaces the per-check tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of sample points.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Render a table instead of JSON lines.
    #[arg(long, global = true)]
    human: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Curvature summary of a builtin or user metric, checked against finite differences.
    Curvature {
        #[arg(long, conflicts_with = "metric_file", required_unless_present = "metric_file")]
        builtin: Option<String>,
        #[arg(long)]
        metric_file: Option<PathBuf>,
        /// CR dimension for heisenberg-fefferman.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Dimension for euclidean and minkowski.
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Runs a suite: weyl, ricci, frames, groups, causality or all.
    Verify {
        suite: String,
        /// CR dimension; both 1 and 2 when omitted.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Causal character of an orbit field.
    Causality {
        /// nil-1, nil-2, hyp-3, torus-c or torus-d.
        #[arg(long)]
        case: String,
        /// Comma-separated parameters.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        delta: u8,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// The group suite.
    Groups {
        #[arg(long)]
        n: Option<usize>,
    },
}

fn settings(c: &Common, n: Option<usize>, points: usize) -> Result<Settings, CliError> {
    if let Some(t) = c.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    if n == Some(0) {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    Ok(Settings { seed: c.seed, tol: c.tol, points: c.points.unwrap_or(points), n })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Curvature { builtin, metric_file, n, dim } => {
            let src = match (builtin, metric_file) {
                (_, Some(p)) => MetricSource::File(p.clone()),
                (Some(b), None) => MetricSource::Builtin { name: b.clone(), n: *n, dim: *dim },
                (None, None) => return Err(CliError::Usage("give --builtin or --metric-file".into())),
            };
            commands::curvature(&src, &settings(c, None, 20)?)
        }
        Command::Verify { suite, n } => suites::run(suite, &settings(c, *n, 20)?),
        Command::Causality { case, a, delta, n } => {
            let s = settings(c, Some(*n), 1000)?;
            commands::causality(commands::parse_case(case)?, a.clone(), *delta, *n, &s)
        }
        Command::Groups { n } => suites::groups(&settings(c, *n, 20)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|rep| {
        let text = if cli.common.human { rep.to_table() } else { rep.to_json_lines() };
        match &cli.common.out {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(rep.passed())
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("feflab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Driver for the feflab verification suites.
//!
//! Every command produces a [`Report`]: one JSON record per check sorted by
//! id, optional measured values, and a trailing summary record.

pub mod commands;
pub mod metric_file;
pub mod report;
pub mod suites;

use feflab::causality::CausalityError;
use feflab::fefferman::FefError;
use feflab::groups::GroupError;
use feflab::sym::SymError;
use feflab::tensor::TensorError;
use thiserror::Error;

pub use report::{Check, Report, Status};

/// Seed used when neither `--seed` nor `FEFLAB_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown suite `{0}` (expected weyl, ricci, frames, groups, causality or all)")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 for usage and input errors, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

impl From<SymError> for CliError {
    fn from(e: SymError) -> Self {
        match e {
            SymError::DivisionByZero | SymError::ZeroDenominator => CliError::Numerical(e.to_string()),
            SymError::Parse { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        match e {
            TensorError::Sym(s) => s.into(),
            TensorError::SingularMetric { .. } | TensorError::SignatureChange => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FefError> for CliError {
    fn from(e: FefError) -> Self {
        match e {
            FefError::Tensor(t) => t.into(),
            FefError::BadDimension(_) | FefError::Shape { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BadParams(_) | GroupError::SizeMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<CausalityError> for CliError {
    fn from(e: CausalityError) -> Self {
        match e {
            CausalityError::Tensor(t) => t.into(),
            CausalityError::Group(g) => g.into(),
            CausalityError::SingularMetric { .. } | CausalityError::NotOnCone { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub seed: u64,
    /// Replaces the per-check tolerances when set.
    pub tol: Option<f64>,
    pub points: usize,
    /// CR dimension; `None` runs the default set `{1, 2}`.
    pub n: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: DEFAULT_SEED, tol: None, points: 20, n: None }
    }
}

impl Settings {
    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn dims(&self) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => vec![1, 2],
        }
    }
}

//! Exact symbolic scalar fields on a coordinate chart.
//!
//! [`Expr`] trees are built from variables, rational constants, sums,
//! products, quotients, integer powers, `exp`, `sin`, `cos` and negation.
//! They support exact differentiation, best-effort simplification and
//! evaluation at a [`Point`] in any [`Scalar`](crate::Scalar) type.

mod diff;
mod eval;
mod expr;
mod parse;
mod point;
mod simplify;

use thiserror::Error;

pub use eval::Compiled;
pub use expr::{Expr, Node, Rational};
pub use parse::parse;
pub use point::Point;

use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymError {
    #[error("missing coordinate `{0}`")]
    MissingCoordinate(String),
    #[error("coordinate `{0}` given twice")]
    DuplicateCoordinate(String),
    #[error("expected {expected} coordinate values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("quotient with a literal zero denominator")]
    ZeroDenominator,
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}

/// Outcome of [`certify_zero`].
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCertificate {
    /// Simplification reached the literal constant 0.
    pub structural: bool,
    /// Largest absolute value seen at the sample points (0 when structural).
    pub max_abs: f64,
    pub points_checked: usize,
}

impl ZeroCertificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.structural || self.max_abs <= tol
    }
}

/// Decides whether `e` vanishes identically: structurally if simplification
/// reaches 0, otherwise by evaluation at the supplied sample points.
pub fn certify_zero<T: Scalar>(e: &Expr, coords: &[String], points: &[Vec<T>]) -> Result<ZeroCertificate, SymError> {
    let s = e.simplify();
    if s.is_zero() {
        return Ok(ZeroCertificate { structural: true, max_abs: 0.0, points_checked: 0 });
    }
    let c = s.compile::<T>(coords)?;
    let mut max_abs = 0.0f64;
    for p in points {
        let v = c.eval(p)?.to_f64().unwrap_or(f64::NAN);
        max_abs = max_abs.max(v.abs());
        if v.is_nan() {
            max_abs = f64::NAN;
            break;
        }
    }
    Ok(ZeroCertificate { structural: false, max_abs, points_checked: points.len() })
}

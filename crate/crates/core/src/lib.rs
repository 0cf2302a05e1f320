//! Verification engine for the Lorentz geometry of Fefferman metrics.
//!
//! The crate builds explicit Lorentz metrics in coordinates, computes their
//! curvature up to the Weyl conformal tensor, manipulates the matrix groups
//! that act on the flat models, and classifies the causal character of orbit
//! vector fields.
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); exact
//! rational arithmetic is used for symbolic constants and for the closed-form
//! curvature tables. Concrete `f64` aliases are exported at the crate root.

pub mod causality;
pub mod fefferman;
pub mod groups;
pub mod linalg;
pub mod sym;
pub mod tensor;

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Real scalar type used for numerical evaluation.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal, panicking only for non-representable input.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub use sym::{Expr, Point, SymError};

pub type Point64 = sym::Point<f64>;
pub type Mat64 = linalg::Mat<f64>;
pub type CMat64 = linalg::Mat<num_complex::Complex<f64>>;
pub type PointCurvature64 = tensor::PointCurvature<f64>;
pub type GroupElement64 = groups::GroupElement<f64>;
pub type HeisenbergElement64 = groups::HeisenbergElement<f64>;
pub type AffineElement64 = groups::AffineElement<f64>;
pub type LorentzForm64 = groups::LorentzForm<f64>;

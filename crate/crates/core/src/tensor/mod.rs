//! Chart-level curvature of pseudo-Riemannian metrics.
//!
//! A [`MetricChart`] holds the components `g_AB` as [`Expr`]s. From it the
//! symbolic pipeline derives Christoffel symbols, the Riemann tensor in both
//! variances, Ricci, scalar curvature and the Weyl tensor
//! ([`CurvatureBundle`]). The same assembly runs on numbers through
//! [`MetricJet`], and [`fd_curvature_oracle`] recomputes everything from
//! finite differences of the metric alone.
//!
//! Conventions:
//!
//! * `Γ^C_AB` is stored at index `[C, A, B]`.
//! * `R^D_ABC = ∂_A Γ^D_BC − ∂_B Γ^D_AC + Γ^D_AE Γ^E_BC − Γ^D_BE Γ^E_AC`, stored at `[D, A, B, C]`.
//! * `R_ABCD = g_DE R^E_ABC`, so `R_ABCD = g(R(∂_A, ∂_B)∂_C, ∂_D)`.
//! * `Ric_BC = R^A_ABC`; the unit 2-sphere has scalar curvature `+2`.
//! * The first–third contraction `g^AC R_ABCD` equals `−Ric_BD` and is
//!   exposed as [`PointCurvature::ricci_first_third`].

mod assemble;
pub mod builtin;
mod curvature;
mod metric;
mod oracle;

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

use crate::sym::{Expr, SymError};
use crate::Scalar;

pub use curvature::{
    christoffel, covariant_derivative, ricci_scalar, riemann, weyl, CompiledBundle, CurvatureBundle, MetricJet,
    PointCurvature, WeylWarning,
};
pub use metric::{CompiledMetric, MetricChart, OneForm, VectorFieldChart};
pub use oracle::{fd_curvature_oracle, FD_STEP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("metric is singular{}", at.as_ref().map(|p| format!(" at {p:?}")).unwrap_or_default())]
    SingularMetric { at: Option<Vec<f64>> },
    #[error("dimension {dim} is below the minimum {min}")]
    DimensionTooSmall { dim: usize, min: usize },
    #[error("metric component ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("signature changes between sample points")]
    SignatureChange,
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Values that the curvature assembly can run on: exact expressions or floats.
pub trait Component: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero() -> Self;
    fn ratio(p: i64, q: i64) -> Self;
    /// True only for a value known to be zero; used to skip products.
    fn is_nil(&self) -> bool {
        false
    }
    fn sum(terms: Vec<Self>) -> Self {
        terms.into_iter().fold(Self::zero(), |a, b| a + b)
    }
    /// Normalizes a freshly assembled value.
    fn tidy(self) -> Self {
        self
    }
}

impl Component for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn ratio(p: i64, q: i64) -> Self {
        Expr::rational(p, q)
    }
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
    fn sum(terms: Vec<Self>) -> Self {
        Expr::sum(terms)
    }
    fn tidy(self) -> Self {
        self.simplify()
    }
}

macro_rules! float_component {
    ($($t:ty),*) => {$(
        impl Component for $t {
            fn zero() -> Self {
                0.0
            }
            fn ratio(p: i64, q: i64) -> Self {
                p as $t / q as $t
            }
        }
    )*};
}
float_component!(f32, f64);

/// Dense tensor with every index ranging over `0..dim`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    dim: usize,
    rank: usize,
    data: Vec<T>,
}

impl<T> Tensor<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |o, &i| {
            debug_assert!(i < self.dim);
            o * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: T) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// All multi-indices in storage order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.data.len()).map(move |mut k| {
            let mut idx = vec![0; self.rank];
            for slot in idx.iter_mut().rev() {
                *slot = k % self.dim;
                k /= self.dim;
            }
            idx
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &T)> + '_ {
        self.indices().zip(self.data.iter())
    }
}

impl<T: Clone> Tensor<T> {
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let len = dim.pow(rank as u32);
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; rank];
        for _ in 0..len {
            data.push(f(&idx));
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < dim {
                    break;
                }
                *slot = 0;
            }
        }
        Tensor { dim, rank, data }
    }

    pub fn filled(dim: usize, rank: usize, v: T) -> Self {
        Tensor { dim, rank, data: vec![v; dim.pow(rank as u32)] }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Tensor<U> {
        Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Tensor<U>, E> {
        Ok(Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }
}

impl<T, const N: usize> Index<[usize; N]> for Tensor<T> {
    type Output = T;
    fn index(&self, idx: [usize; N]) -> &T {
        self.get(&idx)
    }
}

impl<T, const N: usize> IndexMut<[usize; N]> for Tensor<T> {
    fn index_mut(&mut self, idx: [usize; N]) -> &mut T {
        let o = self.offset(&idx);
        &mut self.data[o]
    }
}

impl<T: Scalar> Tensor<T> {
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Largest componentwise difference.
    ///
    /// # Panics
    /// Panics if the shapes differ.
    pub fn max_abs_diff(&self, other: &Tensor<T>) -> T {
        assert_eq!((self.dim, self.rank), (other.dim, other.rank), "tensor shape mismatch");
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    /// Full contraction of a covariant tensor with one vector per slot.
    pub fn contract(&self, vectors: &[&[T]]) -> T {
        assert_eq!(vectors.len(), self.rank);
        self.iter().fold(T::zero(), |acc, (idx, v)| acc + idx.iter().zip(vectors).fold(*v, |p, (&i, vec)| p * vec[i]))
    }
}

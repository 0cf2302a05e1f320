//! The Heisenberg group `𝒩 = ℝ × ℂ^n`, its CR similarity action and the
//! flat affine representation for `n = 1`.

use num_complex::Complex;
use num_traits::Zero;

use super::GroupError;
use crate::linalg::Mat;
use crate::Scalar;

/// `(a, z)` with product `(a, z)(b, w) = (a + b − Im⟨z, w⟩, z + w)` and
/// `⟨z, w⟩ = Σ z̄_i w_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergElement<T> {
    pub a: T,
    pub z: Vec<Complex<T>>,
}

fn herm<T: Scalar>(z: &[Complex<T>], w: &[Complex<T>]) -> Complex<T> {
    z.iter().zip(w).fold(Complex::zero(), |s, (a, b)| s + a.conj() * b)
}

fn same_len(a: usize, b: usize) -> Result<(), GroupError> {
    if a == b {
        Ok(())
    } else {
        Err(GroupError::SizeMismatch { expected: a, got: b })
    }
}

impl<T: Scalar> HeisenbergElement<T> {
    pub fn new(a: T, z: Vec<Complex<T>>) -> Self {
        HeisenbergElement { a, z }
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergElement { a: T::zero(), z: vec![Complex::zero(); n] }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        same_len(self.n(), other.n())?;
        Ok(HeisenbergElement {
            a: self.a + other.a - herm(&self.z, &other.z).im,
            z: self.z.iter().zip(&other.z).map(|(p, q)| p + q).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement { a: -self.a, z: self.z.iter().map(|v| -v).collect() }
    }

    /// Largest componentwise distance.
    pub fn max_diff(&self, other: &Self) -> T {
        self.z.iter().zip(&other.z).fold((self.a - other.a).abs(), |m, (p, q)| m.max((p - q).norm()))
    }
}

/// An element `((a, z), λA)` of `𝒩 ⋊ (U(n) × ℝ⁺)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrMap<T> {
    pub g: HeisenbergElement<T>,
    pub lambda: T,
    pub a: Mat<Complex<T>>,
}

impl<T: Scalar> CrMap<T> {
    pub fn translation(g: HeisenbergElement<T>) -> Self {
        let n = g.n();
        CrMap { g, lambda: T::one(), a: Mat::identity(n) }
    }

    /// `(t, w) ↦ (a + λ²t − Im⟨z, λAw⟩, z + λAw)`.
    pub fn apply(&self, t: T, w: &[Complex<T>]) -> Result<(T, Vec<Complex<T>>), GroupError> {
        let n = self.g.n();
        same_len(n, w.len())?;
        same_len(n, self.a.rows())?;
        let l = Complex::new(self.lambda, T::zero());
        let aw: Vec<Complex<T>> = self.a.mul_vec(w).expect("sizes checked").into_iter().map(|v| v * l).collect();
        let t2 = self.g.a + self.lambda * self.lambda * t - herm(&self.g.z, &aw).im;
        Ok((t2, self.g.z.iter().zip(&aw).map(|(p, q)| p + q).collect()))
    }

    /// The map `p ↦ self(other(p))`.
    pub fn compose(&self, other: &Self) -> Result<Self, GroupError> {
        same_len(self.g.n(), other.g.n())?;
        let (a2, z2) =
            CrMap { g: HeisenbergElement::identity(self.g.n()), ..self.clone() }.apply(other.g.a, &other.g.z)?;
        let moved = HeisenbergElement { a: a2, z: z2 };
        Ok(CrMap {
            g: self.g.mul(&moved)?,
            lambda: self.lambda * other.lambda,
            a: self
                .a
                .matmul(&other.a)
                .map_err(|_| GroupError::SizeMismatch { expected: self.a.rows(), got: other.a.rows() })?,
        })
    }
}

/// `g·(t, w)` for `g = ((a, z), λA)`.
pub fn heisenberg_act<T: Scalar>(
    g: &HeisenbergElement<T>,
    lambda: T,
    a: &Mat<Complex<T>>,
    t: T,
    w: &[Complex<T>],
) -> Result<(T, Vec<Complex<T>>), GroupError> {
    CrMap { g: g.clone(), lambda, a: a.clone() }.apply(t, w)
}

/// An affine map `x ↦ Mx + v`; products compose as maps.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineElement<T> {
    pub v: Vec<T>,
    pub m: Mat<T>,
}

impl<T: Scalar> AffineElement<T> {
    pub fn identity(d: usize) -> Self {
        AffineElement { v: vec![T::zero(); d], m: Mat::identity(d) }
    }

    /// `(v₁, M₁)(v₂, M₂) = (v₁ + M₁v₂, M₁M₂)`.
    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        let bad = |_| GroupError::SizeMismatch { expected: self.v.len(), got: other.v.len() };
        let mv = self.m.mul_vec(&other.v).map_err(bad)?;
        Ok(AffineElement {
            v: self.v.iter().zip(&mv).map(|(p, q)| *p + *q).collect(),
            m: self.m.matmul(&other.m).map_err(bad)?,
        })
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>, GroupError> {
        let mx = self.m.mul_vec(x).map_err(|_| GroupError::SizeMismatch { expected: self.v.len(), got: x.len() })?;
        Ok(mx.iter().zip(&self.v).map(|(p, q)| *p + *q).collect())
    }

    pub fn max_diff(&self, other: &Self) -> T {
        self.v.iter().zip(&other.v).fold(self.m.max_abs_diff(&other.m), |m, (p, q)| m.max((*p - *q).abs()))
    }
}

/// The representation of `𝒩³` in `ℝ³ ⋊ O(2, 1)_∞`:
///
/// * the center and real line go to translations, `(a, x) ↦ ((a/2, x, 0), I)`;
/// * `it ↦ ((−t³/6, −t²/2, t), U(t))` with `U(t) = [[1, t, −t²/2], [0, 1, −t], [0, 0, 1]]`.
///
/// A general element is split as `(a, x + it) = (a + xt, x)·(0, it)`. The
/// center is halved because `(0, it)` and `(0, x)` have commutator
/// `(2xt, 0)` while their images have commutator translation `(xt, 0, 0)`.
pub fn rho_flat<T: Scalar>(g: &HeisenbergElement<T>) -> Result<AffineElement<T>, GroupError> {
    same_len(1, g.n())?;
    let (x, t) = (g.z[0].re, g.z[0].im);
    let half = T::lit(0.5);
    let shift = AffineElement { v: vec![half * (g.a + x * t), x, T::zero()], m: Mat::identity(3) };
    let (two, six) = (T::lit(2.0), T::lit(6.0));
    let u = Mat::from_rows(vec![
        vec![T::one(), t, -t * t / two],
        vec![T::zero(), T::one(), -t],
        vec![T::zero(), T::zero(), T::one()],
    ]);
    let vertical = AffineElement { v: vec![-t * t * t / six, -t * t / two, t], m: u };
    shift.mul(&vertical)
}

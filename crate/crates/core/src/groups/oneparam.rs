//! One-parameter subgroups of `U(n+1, 1)` in normal form.

use num_complex::Complex;

use super::{Basis, GroupElement, GroupError, GroupTag};
use crate::linalg::Mat;
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OneParamCase {
    /// `[[1, 0, ti], [0, A_t, 0], [0, 0, 1]]`, `A_t = diag(e^{i t a_j})`, `n` parameters.
    NilParabolic,
    /// The real unipotent `exp(t(E_{01} − E_{1,n+1}))` next to
    /// `B_t = diag(e^{i t b_j})`, `n − 1` parameters.
    NilTranslation,
    /// `diag(e^t, A_t, e^{−t})`, `n` parameters.
    Hyperbolic,
    /// `E_t = diag(e^{i t a_1}, …, e^{i t a_k}, 1, …, 1)` in the diagonal basis,
    /// `1 ≤ k ≤ n + 1` nonzero parameters.
    Torus,
}

/// A one-parameter subgroup `ρ(t) = C_t` (`delta = 0`) or `e^{it} C_t` (`delta = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct OneParamSubgroup<T> {
    pub case: OneParamCase,
    pub delta: u8,
    pub n: usize,
    pub params: Vec<T>,
}

impl<T: Scalar> OneParamSubgroup<T> {
    pub fn new(case: OneParamCase, delta: u8, n: usize, params: Vec<T>) -> Result<Self, GroupError> {
        let s = OneParamSubgroup { case, delta, n, params };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |m: String| Err(GroupError::BadParams(m));
        if self.delta > 1 {
            return bad(format!("center twist must be 0 or 1, got {}", self.delta));
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        let k = self.params.len();
        let ok = match self.case {
            OneParamCase::NilParabolic | OneParamCase::Hyperbolic => k == self.n,
            OneParamCase::NilTranslation => k == self.n - 1,
            OneParamCase::Torus => (1..=self.n + 1).contains(&k),
        };
        if !ok {
            return bad(format!("{:?} with n = {} does not take {k} parameters", self.case, self.n));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return bad("parameters must be finite".into());
        }
        if self.case == OneParamCase::Torus && self.params.iter().any(|p| p.is_zero()) {
            return bad("torus weights must be nonzero".into());
        }
        Ok(())
    }

    pub fn tag(&self) -> GroupTag {
        let basis = match self.case {
            OneParamCase::Torus => Basis::Diagonal,
            _ => Basis::Lightcone,
        };
        GroupTag::Unitary { n: self.n, basis }
    }
}

fn cis<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x.cos(), x.sin())
}

/// `ρ(t)` as an element of `U(n+1, 1)`.
pub fn one_param_matrix<T: Scalar>(s: &OneParamSubgroup<T>, t: T) -> Result<GroupElement<T>, GroupError> {
    s.validate()?;
    let n = s.n;
    let size = n + 2;
    let last = size - 1;
    let mut m: Mat<Complex<T>> = Mat::identity(size);
    let re = |x: T| Complex::new(x, T::zero());
    match s.case {
        OneParamCase::NilParabolic => {
            m[(0, last)] = Complex::new(T::zero(), t);
            for (j, a) in s.params.iter().enumerate() {
                m[(1 + j, 1 + j)] = cis(t * *a);
            }
        }
        OneParamCase::NilTranslation => {
            m[(0, 1)] = re(t);
            m[(0, last)] = re(-t * t / T::lit(2.0));
            m[(1, last)] = re(-t);
            for (j, b) in s.params.iter().enumerate() {
                m[(2 + j, 2 + j)] = cis(t * *b);
            }
        }
        OneParamCase::Hyperbolic => {
            m[(0, 0)] = re(t.exp());
            m[(last, last)] = re((-t).exp());
            for (j, a) in s.params.iter().enumerate() {
                m[(1 + j, 1 + j)] = cis(t * *a);
            }
        }
        OneParamCase::Torus => {
            for (j, a) in s.params.iter().enumerate() {
                m[(j, j)] = cis(t * *a);
            }
        }
    }
    if s.delta == 1 {
        m = m.scale(&cis(t));
    }
    Ok(GroupElement { entries: m, tag: s.tag() })
}

//! Matrix groups acting on the flat models.
//!
//! Real and complex groups share one dense complex matrix type; real groups
//! are the subcase with vanishing imaginary parts. Membership is form
//! preservation `A* J A = J` up to a residual, plus the block pattern for the
//! similarity-type subgroups.

mod heisenberg;
mod oneparam;

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::Mat;
use crate::Scalar;

pub use heisenberg::{heisenberg_act, rho_flat, AffineElement, CrMap, HeisenbergElement};
pub use oneparam::{one_param_matrix, OneParamCase, OneParamSubgroup};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("expected size {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("matrix is not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("matrix does not have the G_C pattern (residual {residual:e})")]
    NotInGC { residual: f64 },
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Membership threshold for `f64`; coarser types use a multiple of their epsilon.
pub const MEMBER_TOL: f64 = 1e-10;

pub(crate) fn tol<T: Scalar>() -> T {
    T::lit(MEMBER_TOL).max(T::epsilon() * T::lit(100.0))
}

fn f64_of<T: Scalar>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn c<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `{ℓ_1, e_2, …, e_{m+1}, ℓ_{m+2}}` with `⟨ℓ_1, ℓ_{m+2}⟩ = 1`.
    Lightcone,
    /// The standard basis with form `diag(1, …, 1, −1)`.
    Diagonal,
}

/// A Lorentz form of signature `(m+1, 1)` on `𝕂^{m+2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzForm<T> {
    pub matrix: Mat<Complex<T>>,
    pub basis: Basis,
    pub hermitian: bool,
}

fn form_matrix<T: Scalar>(size: usize, basis: Basis) -> Mat<Complex<T>> {
    let last = size - 1;
    Mat::from_fn(size, size, |i, j| match basis {
        Basis::Diagonal if i == j => c(if i == last { -T::one() } else { T::one() }),
        Basis::Lightcone if (i == 0 && j == last) || (i == last && j == 0) => c(T::one()),
        Basis::Lightcone if i == j && i != 0 && i != last => c(T::one()),
        _ => Complex::zero(),
    })
}

/// The real symmetric form on `ℝ^{m+2}`.
pub fn lorentz_form<T: Scalar>(m: usize, basis: Basis) -> LorentzForm<T> {
    LorentzForm { matrix: form_matrix(m + 2, basis), basis, hermitian: false }
}

/// The Hermitian form on `ℂ^{n+2}`.
pub fn hermitian_form<T: Scalar>(n: usize, basis: Basis) -> LorentzForm<T> {
    LorentzForm { matrix: form_matrix(n + 2, basis), basis, hermitian: true }
}

/// Columns are `ℓ_1, e_2, …, e_{m+1}, ℓ_{m+2}` in the standard basis, so
/// `Cᵀ·diag(1, …, 1, −1)·C` is the lightcone form.
pub fn lightcone_basis<T: Scalar>(m: usize) -> Mat<T> {
    let size = m + 2;
    let last = size - 1;
    let r = T::one() / T::lit(2.0).sqrt();
    Mat::from_fn(size, size, |i, j| {
        if (j == 0 && (i == 0 || i == last)) || (j == last && i == 0) {
            r
        } else if j == last && i == last {
            -r
        } else if i == j && j != 0 && j != last {
            T::one()
        } else {
            T::zero()
        }
    })
}

impl<T: Scalar> LorentzForm<T> {
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// `A* J A − J` in max norm, using the transpose for real forms.
    pub fn residual(&self, a: &Mat<Complex<T>>) -> Result<T, GroupError> {
        if a.rows() != self.size() || a.cols() != self.size() {
            return Err(GroupError::SizeMismatch { expected: self.size(), got: a.rows() });
        }
        let adj = if self.hermitian { a.conj_transpose() } else { a.transpose() };
        let lhs = adj.matmul(&self.matrix).and_then(|m| m.matmul(a)).expect("square");
        let mut r = lhs.max_norm_diff(&self.matrix);
        if !self.hermitian {
            r = r.max(a.max_imag());
        }
        Ok(r)
    }
}

/// Ambient group of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// `O(m+1, 1)`, acting on `ℝ^{m+2}`.
    Orthogonal { m: usize, basis: Basis },
    /// `U(n+1, 1)`, acting on `ℂ^{n+2}`.
    Unitary { n: usize, basis: Basis },
    /// `Sim(ℝ^m)` inside `O(m+1, 1)` in the lightcone basis.
    Sim { m: usize },
    /// `G_ℝ = Sim(ℝ^m) × ℝ⁺`.
    GReal { m: usize },
    /// `G_ℂ ≤ GL(2n+2, ℝ)`.
    GComplex { n: usize },
}

impl GroupTag {
    pub fn size(&self) -> usize {
        match *self {
            GroupTag::Orthogonal { m, .. } | GroupTag::Sim { m } | GroupTag::GReal { m } => m + 2,
            GroupTag::Unitary { n, .. } => n + 2,
            GroupTag::GComplex { n } => 2 * n + 2,
        }
    }
}

/// A matrix together with the group it is meant to lie in.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<T> {
    pub entries: Mat<Complex<T>>,
    pub tag: GroupTag,
}

impl<T: Scalar> GroupElement<T> {
    pub fn identity(tag: GroupTag) -> Self {
        GroupElement { entries: Mat::identity(tag.size()), tag }
    }

    /// Matrix product, keeping the tag of `self`.
    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        if other.entries.rows() != self.entries.rows() {
            return Err(GroupError::SizeMismatch { expected: self.entries.rows(), got: other.entries.rows() });
        }
        Ok(GroupElement { entries: self.entries.matmul(&other.entries).expect("sizes checked"), tag: self.tag })
    }

    pub fn real_part(&self) -> Mat<T> {
        self.entries.real_part()
    }

    pub fn membership(&self) -> Result<Membership<T>, GroupError> {
        is_member(&self.entries, self.tag)
    }
}

/// Outcome of a membership test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership<T> {
    pub member: bool,
    pub residual: T,
}

/// Largest deviation from the `Sim` pattern: zero first column below the
/// corner, zero last row before the corner, corner product one, plus the
/// lightcone-form residual. `None` when the corner is not positive.
fn sim_residual<T: Scalar>(a: &Mat<Complex<T>>) -> Option<T> {
    let size = a.rows();
    let last = size - 1;
    if a[(0, 0)].re <= T::zero() {
        return None;
    }
    let mut r = lorentz_form::<T>(size - 2, Basis::Lightcone).residual(a).ok()?;
    for i in 1..size {
        r = r.max(a[(i, 0)].norm());
    }
    for j in 0..last {
        r = r.max(a[(last, j)].norm());
    }
    r = r.max((a[(0, 0)] * a[(last, last)] - Complex::one()).norm());
    Some(r)
}

/// The complex structure `[[0, −I], [I, 0]]` on `ℝ^{2n} = ℂ^n`.
fn complex_structure<T: Scalar>(n: usize) -> Mat<T> {
    Mat::from_fn(2 * n, 2 * n, |i, j| {
        if i == j + n {
            T::one()
        } else if j == i + n {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// Tests membership; the residual is in the units of the matrix entries.
pub fn is_member<T: Scalar>(a: &Mat<Complex<T>>, tag: GroupTag) -> Result<Membership<T>, GroupError> {
    let size = tag.size();
    if !a.is_square() || a.rows() != size {
        return Err(GroupError::SizeMismatch { expected: size, got: a.rows() });
    }
    let big = T::infinity();
    let residual = match tag {
        GroupTag::Orthogonal { m, basis } => lorentz_form(m, basis).residual(a)?,
        GroupTag::Unitary { n, basis } => hermitian_form(n, basis).residual(a)?,
        GroupTag::Sim { .. } => sim_residual(a).unwrap_or(big),
        GroupTag::GReal { .. } => greal_scale(a).and_then(|k| sim_residual(&a.scale(&c(T::one() / k)))).unwrap_or(big),
        GroupTag::GComplex { n } => gc_residual(a, n).unwrap_or(big),
    };
    Ok(Membership { member: residual < tol(), residual })
}

/// `k` with `A = k·Q`, `Q` in `Sim`: `k² = A_00 A_ll`.
fn greal_scale<T: Scalar>(a: &Mat<Complex<T>>) -> Option<T> {
    let last = a.rows() - 1;
    let p = (a[(0, 0)] * a[(last, last)]).re;
    (p > T::zero() && a[(0, 0)].re > T::zero()).then(|| p.sqrt())
}

fn gc_residual<T: Scalar>(a: &Mat<Complex<T>>, n: usize) -> Option<T> {
    let last = a.rows() - 1;
    let u = a[(0, 0)].re;
    if u <= T::zero() {
        return None;
    }
    let k = u.sqrt();
    let q = a.scale(&c(T::one() / k));
    let mut r = sim_residual(&q)?;
    r = r.max((a[(last, last)] - Complex::one()).norm());
    let b = q.block(1, last, 1, last).real_part();
    let j = complex_structure::<T>(n);
    let comm = &b.matmul(&j).expect("square") - &j.matmul(&b).expect("square");
    Some(r.max(comm.max_abs()))
}

fn check_orthogonal<T: Scalar>(b: &Mat<T>, m: usize) -> Result<(), GroupError> {
    if b.rows() != m || b.cols() != m {
        return Err(GroupError::SizeMismatch { expected: m, got: b.rows() });
    }
    let r = b.transpose().matmul(b).expect("square").max_abs_diff(&Mat::identity(m));
    if !(r < tol()) {
        return Err(GroupError::NotOrthogonal { residual: f64_of(r) });
    }
    Ok(())
}

/// `[[λ, x, −|x|²/(2λ)], [0, B, −Bxᵀ/λ], [0, 0, 1/λ]]`.
pub fn sim_element<T: Scalar>(lambda: T, x: &[T], b: &Mat<T>) -> Result<GroupElement<T>, GroupError> {
    if !(lambda > T::zero()) {
        return Err(GroupError::BadParams(format!("scale must be positive, got {lambda}")));
    }
    let m = x.len();
    check_orthogonal(b, m)?;
    Ok(GroupElement { entries: sim_matrix(lambda, x, b).to_complex(), tag: GroupTag::Sim { m } })
}

fn sim_matrix<T: Scalar>(lambda: T, x: &[T], b: &Mat<T>) -> Mat<T> {
    let m = x.len();
    let last = m + 1;
    let bx = b.mul_vec(x).expect("sizes checked");
    let norm2 = x.iter().fold(T::zero(), |s, v| s + *v * *v);
    let two = T::lit(2.0);
    Mat::from_fn(m + 2, m + 2, |i, j| match (i, j) {
        (0, 0) => lambda,
        (0, j) if j == last => -norm2 / (two * lambda),
        (0, j) => x[j - 1],
        (i, j) if i == last && j == last => T::one() / lambda,
        (i, _) if i == last => T::zero(),
        (_, 0) => T::zero(),
        (i, j) if j == last => -bx[i - 1] / lambda,
        (i, j) => b[(i - 1, j - 1)],
    })
}

/// Real form `[[Re B, −Im B], [Im B, Re B]]` of a complex matrix, acting on
/// `(Re z, Im z)`.
pub fn realify<T: Scalar>(b: &Mat<Complex<T>>) -> Mat<T> {
    let n = b.rows();
    Mat::from_fn(2 * n, 2 * n, |i, j| {
        let e = b[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => e.re,
            (true, false) => -e.im,
            (false, true) => e.im,
        }
    })
}

/// The `G_ℂ` matrix `[[u, √u x, −|x|²/2], [0, √u B, −Bxᵀ], [0, 0, 1]]`,
/// with `x ∈ ℂ^n` given as `(Re x, Im x)` and `B` unitary.
pub fn gc_element<T: Scalar>(u: T, x: &[T], b: &Mat<Complex<T>>) -> Result<GroupElement<T>, GroupError> {
    if !(u > T::zero()) {
        return Err(GroupError::BadParams(format!("scale must be positive, got {u}")));
    }
    let n = b.rows();
    if x.len() != 2 * n || !b.is_square() {
        return Err(GroupError::SizeMismatch { expected: 2 * n, got: x.len() });
    }
    let r = b.conj_transpose().matmul(b).expect("square").max_norm_diff(&Mat::identity(n));
    if !(r < tol()) {
        return Err(GroupError::NotUnitary { residual: f64_of(r) });
    }
    let k = u.sqrt();
    let q = sim_matrix(k, x, &realify(b));
    Ok(GroupElement { entries: q.scale(&k).to_complex(), tag: GroupTag::GComplex { n } })
}

/// Splits `P = √u·Q` with `Q ∈ Sim(ℝ^{2n})`; returns `(√u, Q)`.
pub fn gc_factor<T: Scalar>(p: &GroupElement<T>) -> Result<(T, GroupElement<T>), GroupError> {
    let size = p.entries.rows();
    if size < 2 || size % 2 == 1 {
        return Err(GroupError::SizeMismatch { expected: size + 1, got: size });
    }
    let n = size / 2 - 1;
    let mem = is_member(&p.entries, GroupTag::GComplex { n })?;
    if !mem.member {
        return Err(GroupError::NotInGC { residual: f64_of(mem.residual) });
    }
    let k = p.entries[(0, 0)].re.sqrt();
    Ok((k, GroupElement { entries: p.entries.scale(&c(T::one() / k)), tag: GroupTag::Sim { m: 2 * n } }))
}

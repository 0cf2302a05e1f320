//! Causal character of vectors and of orbit fields of one-parameter groups.
//!
//! Orbit fields live on the Heisenberg chart `(s, t, x, y)` of
//! [`heisenberg_fefferman`](crate::fefferman::heisenberg_fefferman). The field
//! `P_*ξ` on `𝒩` is lifted by `δ ∂_s`, and its length is
//!
//! `g(ξ, ξ) = 2δ/(n+2) · ω(P_*ξ) + ½ dω(J P_*ξ, P_*ξ)`,
//!
//! where `½ dω(JV, V) = Σ θ^i(V)²` with `dω(U, V) = Uω(V) − Vω(U) − ω([U, V])`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::fefferman::{heisenberg_coords, hermitian, FeffermanChart};
use crate::groups::{heisenberg_act, GroupError, HeisenbergElement, OneParamCase, OneParamSubgroup};
use crate::linalg::Mat;
use crate::sym::{Expr, Point};
use crate::tensor::{MetricChart, TensorError, VectorFieldChart};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CausalityError {
    #[error("metric is singular at {at:?}")]
    SingularMetric { at: Vec<f64> },
    #[error("case {0} has no orbit field on the Heisenberg chart")]
    BadCase(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("point is not on the null cone (|⟨v,v⟩| = {residual:e})")]
    NotOnCone { residual: f64 },
    #[error("no chart action for {0}")]
    ActionUndefined(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<crate::sym::SymError> for CausalityError {
    fn from(e: crate::sym::SymError) -> Self {
        CausalityError::Tensor(e.into())
    }
}

/// Threshold on `|g(v, v)|` separating lightlike from the open classes.
pub const LIGHT_TOL: f64 = 1e-10;
/// A vector below this max-norm is the zero vector.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CausalClass {
    Spacelike,
    Lightlike,
    Timelike,
    Zero,
}

impl CausalClass {
    /// Class of a vector with max-norm `norm` and length `q = g(v, v)`.
    pub fn of(q: f64, norm: f64) -> Self {
        if norm < ZERO_TOL {
            CausalClass::Zero
        } else if q > LIGHT_TOL {
            CausalClass::Spacelike
        } else if q < -LIGHT_TOL {
            CausalClass::Timelike
        } else {
            CausalClass::Lightlike
        }
    }

    /// Whether `q` clears the threshold by a factor of ten, so the point can
    /// be reported as a witness of this class.
    fn certified(self, q: f64) -> bool {
        match self {
            CausalClass::Lightlike => q.abs() <= LIGHT_TOL / 10.0,
            CausalClass::Spacelike | CausalClass::Timelike => q.abs() >= LIGHT_TOL * 10.0,
            CausalClass::Zero => true,
        }
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `g_p(v, v)` for a coordinate vector at a point, after a nondegeneracy check.
pub fn length_at(g: &Mat<f64>, v: &[f64], at: &[f64]) -> Result<f64, CausalityError> {
    g.inverse().map_err(|_| CausalityError::SingularMetric { at: at.to_vec() })?;
    let gv = g.mul_vec(v).map_err(|_| TensorError::DimensionMismatch { expected: g.rows(), got: v.len() })?;
    Ok(v.iter().zip(&gv).map(|(a, b)| a * b).sum())
}

/// Causal class of `v` at `p`.
pub fn classify(g: &MetricChart, v: &VectorFieldChart, p: &Point<f64>) -> Result<CausalClass, CausalityError> {
    let x = p.values_for(g.coords())?;
    let vx = v.eval(g.coords(), &x)?;
    let q = length_at(&g.eval(&x)?, &vx, &x)?;
    Ok(CausalClass::of(q, max_norm(&vx)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitCase {
    /// `∂_t + Σ a_j (x_j ∂_{y_j} − y_j ∂_{x_j})`.
    Nil1,
    /// `−y_1 ∂_t + ∂_{x_1} + Σ_{j ≥ 2} b_j (x_j ∂_{y_j} − y_j ∂_{x_j})`.
    Nil2,
    /// `2t ∂_t + Σ ((x_j − a_j y_j) ∂_{x_j} + (y_j + a_j x_j) ∂_{y_j})`.
    Hyp3,
    /// Torus action with weights `a` on the cone.
    TorusC,
    /// Torus action with weights `a + 1` and `1`, the center-twisted case.
    TorusD,
}

/// An orbit field with case, twist `δ`, parameters and CR dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitField {
    pub case: OrbitCase,
    pub delta: u8,
    pub params: Vec<f64>,
    pub n: usize,
}

impl OrbitField {
    pub fn new(case: OrbitCase, delta: u8, params: Vec<f64>, n: usize) -> Result<Self, CausalityError> {
        if delta > 1 || n == 0 {
            return Err(CausalityError::BadParams(format!("need δ ∈ {{0, 1}} and n ≥ 1, got δ = {delta}, n = {n}")));
        }
        let want = match case {
            OrbitCase::Nil1 | OrbitCase::Hyp3 => Some(n),
            OrbitCase::Nil2 => Some(n - 1),
            OrbitCase::TorusC | OrbitCase::TorusD => None,
        };
        let k = params.len();
        let ok = match want {
            Some(w) => k == w,
            None => (1..=n + 1).contains(&k),
        };
        if !ok || params.iter().any(|p| !p.is_finite()) {
            return Err(CausalityError::BadParams(format!("{case:?} with n = {n} does not take {params:?}")));
        }
        Ok(OrbitField { case, delta, params, n })
    }

    /// The one-parameter subgroup whose action generates this field.
    pub fn subgroup(&self) -> Result<OneParamSubgroup<f64>, CausalityError> {
        let case = match self.case {
            OrbitCase::Nil1 => OneParamCase::NilParabolic,
            OrbitCase::Nil2 => OneParamCase::NilTranslation,
            OrbitCase::Hyp3 => OneParamCase::Hyperbolic,
            OrbitCase::TorusC | OrbitCase::TorusD => OneParamCase::Torus,
        };
        let delta = if self.case == OrbitCase::TorusD { 1 } else { self.delta };
        Ok(OneParamSubgroup::new(case, delta, self.n, self.params.clone())?)
    }
}

fn rotation(x: &Expr, y: &Expr, a: f64) -> (Expr, Expr) {
    let a = Expr::constant(crate::sym::Rational::from_float(a).expect("finite"));
    ((-(a.clone() * y.clone())).simplify(), (a * x.clone()).simplify())
}

/// `P_*ξ + δ ∂_s` on the Heisenberg chart together with `ω(P_*ξ)`.
pub fn orbit_field(o: &OrbitField) -> Result<(VectorFieldChart, Expr), CausalityError> {
    let n = o.n;
    let coords = heisenberg_coords(n);
    let d = coords.len();
    let var = |i: usize| Expr::var(&coords[i]);
    let (xi, yi) = (|j: usize| 2 + j, |j: usize| 2 + n + j);
    let mut v = vec![Expr::zero(); d];
    v[0] = Expr::int(o.delta as i64);
    let rotate = |v: &mut Vec<Expr>, j: usize, a: f64| {
        let (cx, cy) = rotation(&var(xi(j)), &var(yi(j)), a);
        v[xi(j)] = (v[xi(j)].clone() + cx).simplify();
        v[yi(j)] = (v[yi(j)].clone() + cy).simplify();
    };
    match o.case {
        OrbitCase::Nil1 => {
            v[1] = Expr::one();
            for (j, &a) in o.params.iter().enumerate() {
                rotate(&mut v, j, a);
            }
        }
        OrbitCase::Nil2 => {
            v[1] = (-var(yi(0))).simplify();
            v[xi(0)] = Expr::one();
            for (j, &b) in o.params.iter().enumerate() {
                rotate(&mut v, j + 1, b);
            }
        }
        OrbitCase::Hyp3 => {
            v[1] = (Expr::int(2) * var(1)).simplify();
            for (j, &a) in o.params.iter().enumerate() {
                v[xi(j)] = var(xi(j));
                v[yi(j)] = var(yi(j));
                rotate(&mut v, j, a);
            }
        }
        OrbitCase::TorusC | OrbitCase::TorusD => return Err(CausalityError::BadCase(format!("{:?}", o.case))),
    }
    // ω = dt + Σ (x dy − y dx)
    let mut terms = vec![v[1].clone()];
    for j in 0..n {
        terms.push(var(xi(j)) * v[yi(j)].clone());
        terms.push(-(var(yi(j)) * v[xi(j)].clone()));
    }
    Ok((VectorFieldChart(v), Expr::sum(terms).simplify()))
}

/// Step of the central difference in [`orbit_field_oracle`].
pub const ORACLE_STEP: f64 = 1e-5;

/// `d/dτ|₀` of the orbit `τ ↦ (s + δτ, ρ(τ)·(t, w))` by central differences,
/// with the group acting through the CR action on `𝒩`:
///
/// * nil-parabolic: `((τ, 0), A_τ)`;
/// * nil-translation: `((0, τ e_1), diag(1, B_τ))`;
/// * hyperbolic: `((0, 0), e^τ A_τ)`.
pub fn orbit_field_oracle(s: &OneParamSubgroup<f64>, x: &[f64]) -> Result<Vec<f64>, CausalityError> {
    s.validate()?;
    let n = s.n;
    if x.len() != 2 * n + 2 {
        return Err(TensorError::DimensionMismatch { expected: 2 * n + 2, got: x.len() }.into());
    }
    let w: Vec<Complex64> = (0..n).map(|j| Complex64::new(x[2 + j], x[2 + n + j])).collect();
    let phases = |tau: f64, params: &[f64], offset: usize| {
        Mat::from_fn(n, n, |i, j| {
            if i != j {
                Complex64::new(0.0, 0.0)
            } else if i >= offset {
                Complex64::from_polar(1.0, tau * params[i - offset])
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    };
    let flow = |tau: f64| -> Result<Vec<f64>, CausalityError> {
        let zero = vec![Complex64::new(0.0, 0.0); n];
        let (t2, w2) = match s.case {
            OneParamCase::NilParabolic => {
                heisenberg_act(&HeisenbergElement::new(tau, zero), 1.0, &phases(tau, &s.params, 0), x[1], &w)?
            }
            OneParamCase::NilTranslation => {
                let mut z = zero;
                z[0] = Complex64::new(tau, 0.0);
                heisenberg_act(&HeisenbergElement::new(0.0, z), 1.0, &phases(tau, &s.params, 1), x[1], &w)?
            }
            OneParamCase::Hyperbolic => {
                heisenberg_act(&HeisenbergElement::new(0.0, zero), tau.exp(), &phases(tau, &s.params, 0), x[1], &w)?
            }
            OneParamCase::Torus => return Err(CausalityError::ActionUndefined("torus on the Heisenberg chart".into())),
        };
        let mut out = vec![x[0] + s.delta as f64 * tau, t2];
        out.extend(w2.iter().map(|c| c.re));
        out.extend(w2.iter().map(|c| c.im));
        Ok(out)
    };
    let h = ORACLE_STEP;
    let (p, m) = (flow(h)?, flow(-h)?);
    Ok(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect())
}

/// Classes seen by [`causality_scan`], with counts and one witness each.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanSummary {
    pub counts: BTreeMap<CausalClass, usize>,
    pub witnesses: BTreeMap<CausalClass, Vec<f64>>,
    /// `g(ξ, ξ)` at every scanned point, in order.
    pub lengths: Vec<f64>,
}

impl ScanSummary {
    /// The single class seen, if only one was.
    pub fn uniform(&self) -> Option<CausalClass> {
        let mut it = self.counts.keys();
        match (it.next(), it.next()) {
            (Some(c), None) => Some(*c),
            _ => None,
        }
    }

    pub fn saw(&self, c: CausalClass) -> bool {
        self.counts.contains_key(&c)
    }
}

/// `2δ/(n+2)·ω(V) + ½ dω(JV, V)` for `V = P_*ξ` given by coordinate components.
pub fn lifted_length(ch: &FeffermanChart, delta: u8, v: &[f64], x: &[f64]) -> f64 {
    let n = ch.n;
    let mut omega = v[1];
    for j in 0..n {
        omega += x[2 + j] * v[2 + n + j] - x[2 + n + j] * v[2 + j];
    }
    let jv = ch.j_components(v, x);
    // dω = 2 Σ dx_j ∧ dy_j
    let d_omega: f64 = (0..n).map(|j| 2.0 * (jv[2 + j] * v[2 + n + j] - jv[2 + n + j] * v[2 + j])).sum();
    2.0 * delta as f64 / (n as f64 + 2.0) * omega + 0.5 * d_omega
}

/// Classifies the lifted orbit field at each point.
pub fn causality_scan(ch: &FeffermanChart, o: &OrbitField, pts: &[Vec<f64>]) -> Result<ScanSummary, CausalityError> {
    if ch.n != o.n {
        return Err(CausalityError::BadParams(format!("chart has n = {}, field has n = {}", ch.n, o.n)));
    }
    let (field, _) = orbit_field(o)?;
    let coords = ch.coords();
    let mut out = ScanSummary::default();
    for x in pts {
        let mut v = field.eval(coords, x)?;
        let full = max_norm(&v);
        v[0] = 0.0;
        let q = lifted_length(ch, o.delta, &v, x);
        let class = CausalClass::of(q, full);
        *out.counts.entry(class).or_default() += 1;
        if class.certified(q) {
            out.witnesses.entry(class).or_insert_with(|| x.clone());
        }
        out.lengths.push(q);
    }
    Ok(out)
}

const CONE_TOL: f64 = 1e-10;

/// `⟨X_v, X_v⟩` for the generator `X_v = i W v` of the torus action at a cone
/// point `v ∈ ℂ^{n+2}`. The weights `W` are `(a_1, …, a_k, 0, …, 0)` for
/// [`OrbitCase::TorusC`] and `(a_1+1, …, a_k+1, 1, …, 1)` for
/// [`OrbitCase::TorusD`]; on the cone this is `Σ a_i²|z_i|²` and
/// `Σ ((a_i+1)² − 1)|z_i|²` respectively.
pub fn cone_inner(case: OrbitCase, a: &[f64], v: &[Complex64]) -> Result<f64, CausalityError> {
    if v.len() < 3 || a.is_empty() || a.len() > v.len() - 1 {
        return Err(CausalityError::BadParams(format!("{} weights for a point in ℂ^{}", a.len(), v.len())));
    }
    let r = hermitian(v, v).norm();
    let scale = v.iter().map(|c| c.norm_sqr()).sum::<f64>();
    if r > CONE_TOL * scale.max(1.0) {
        return Err(CausalityError::NotOnCone { residual: r });
    }
    let base = match case {
        OrbitCase::TorusC => 0.0,
        OrbitCase::TorusD => 1.0,
        _ => return Err(CausalityError::BadCase(format!("{case:?} is not a torus case"))),
    };
    let x: Vec<Complex64> =
        v.iter().enumerate().map(|(i, c)| c * Complex64::new(0.0, base + a.get(i).copied().unwrap_or(0.0))).collect();
    Ok(hermitian(&x, &x).re)
}

/// Sign pattern of the twisted torus field off the sphere `z_1 = … = z_k = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DVerdict {
    /// Every `a_i > 0` or `a_i < −2`.
    SpacelikeOffSphere,
    /// Every `−2 ≤ a_i < 0`; `ℓ` counts `a_i = −2`.
    TimelikeOffSphere(usize),
    /// Every `a_i > 0`, `a_i < −2` or `a_i = −2`, with `ℓ ≥ 1` of the last kind.
    SemidefiniteOffSphere(usize),
    /// Both signs occur.
    Mixed,
}

/// Region verdict from the coefficients `a_i(a_i + 2) = (a_i+1)² − 1`.
pub fn d_case_classify(a: &[f64]) -> Result<DVerdict, CausalityError> {
    if a.is_empty() || a.iter().any(|x| !x.is_finite() || *x == 0.0) {
        return Err(CausalityError::BadParams(format!("weights must be finite and nonzero, got {a:?}")));
    }
    let pos = a.iter().filter(|&&x| !(-2.0..=0.0).contains(&x)).count();
    let ell = a.iter().filter(|&&x| x == -2.0).count();
    let neg = a.len() - pos - ell;
    Ok(match (pos, neg) {
        (_, 0) if ell == 0 => DVerdict::SpacelikeOffSphere,
        (_, 0) if pos > 0 => DVerdict::SemidefiniteOffSphere(ell),
        (0, _) => DVerdict::TimelikeOffSphere(ell),
        _ => DVerdict::Mixed,
    })
}

//! Fefferman metrics on `S¹ × 𝒩` in coordinates.
//!
//! The Heisenberg chart uses coordinates `(s, t, x_1..x_n, y_1..y_n)`, where
//! `s` is the circle coordinate and `t` the center coordinate. With
//!
//! * `ω = dt + Σ (x_j dy_j − y_j dx_j)`,
//! * `σ = ds/(n+2)`,
//! * `θ^j = dx_j`, `θ^{n+j} = dy_j`,
//!
//! the metric is `g = σ⊙ω + Σ θ^i θ^i`, with `σ⊙ω = σ⊗ω + ω⊗σ`.
//!
//! The adapted frame is `𝒮 = ∂_s`, `ξ = ∂_t`, `X_j = ∂_{x_j} + y_j ∂_t`,
//! `X_{n+j} = ∂_{y_j} − x_j ∂_t`, stored in that order.

use num_complex::Complex64;
use num_traits::{FromPrimitive, Num};
use thiserror::Error;

use crate::linalg::Mat;
use crate::sym::{Expr, Point};
use crate::tensor::{MetricChart, OneForm, TensorError, VectorFieldChart};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FefError {
    #[error("CR dimension must be at least 1, got {0}")]
    BadDimension(usize),
    #[error("scale factor is not positive at {at:?}")]
    NonPositiveU { at: Vec<f64> },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("all metric components vanish at {at:?}")]
    DegeneratePoint { at: Vec<f64> },
    #[error("point is not on the null cone (|⟨p,p⟩| = {residual:e})")]
    NotOnCone { residual: f64 },
    #[error("vector is not tangent to the cone (|Re⟨p,X⟩| = {residual:e})")]
    NotTangent { residual: f64 },
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

impl From<crate::sym::SymError> for FefError {
    fn from(e: crate::sym::SymError) -> Self {
        FefError::Tensor(e.into())
    }
}

/// Frame slot of `𝒮`.
pub const S: usize = 0;
/// Frame slot of `ξ`.
pub const XI: usize = 1;

/// Frame slot of the horizontal field `X_{i+1}`, `i < 2n`.
pub fn horizontal(i: usize) -> usize {
    2 + i
}

/// The Heisenberg Fefferman chart with its frame, forms and complex structure.
#[derive(Clone, Debug)]
pub struct FeffermanChart {
    pub n: usize,
    pub chart: MetricChart,
    /// `[𝒮, ξ, X_1, …, X_2n]`.
    pub frame: Vec<VectorFieldChart>,
    pub omega: OneForm,
    pub sigma: OneForm,
    /// `θ^1, …, θ^2n`.
    pub theta: Vec<OneForm>,
    /// `+1` when `JX_j = X_{n+j}`, `−1` when `JX_j = −X_{n+j}`.
    pub j_sign: i8,
}

/// Names `s, t, x1..xn, y1..yn`.
pub fn heisenberg_coords(n: usize) -> Vec<String> {
    let mut c = vec!["s".to_string(), "t".to_string()];
    c.extend((1..=n).map(|j| format!("x{j}")));
    c.extend((1..=n).map(|j| format!("y{j}")));
    c
}

/// `g_AB = σ_A ω_B + ω_A σ_B + Σ θ_A θ_B`.
pub fn metric_from_coframe(
    coords: Vec<String>,
    omega: &OneForm,
    theta: &[OneForm],
    sigma: &OneForm,
) -> Result<MetricChart, TensorError> {
    let d = coords.len();
    let rows = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    let mut terms =
                        vec![sigma.0[a].clone() * omega.0[b].clone(), omega.0[a].clone() * sigma.0[b].clone()];
                    terms.extend(theta.iter().map(|th| th.0[a].clone() * th.0[b].clone()));
                    Expr::sum(terms).simplify()
                })
                .collect()
        })
        .collect();
    MetricChart::new(coords, rows)
}

/// Builds the chart of the flat Fefferman metric over the Heisenberg group.
pub fn heisenberg_fefferman(n: usize) -> Result<FeffermanChart, FefError> {
    if n == 0 {
        return Err(FefError::BadDimension(n));
    }
    let coords = heisenberg_coords(n);
    let d = coords.len();
    let (t, x, y) = (1, |j: usize| 2 + j, |j: usize| 2 + n + j);
    let var = |i: usize| Expr::var(&coords[i]);

    let mut w = vec![Expr::zero(); d];
    w[t] = Expr::one();
    for j in 0..n {
        w[x(j)] = (-var(y(j))).simplify();
        w[y(j)] = var(x(j));
    }
    let omega = OneForm(w);
    let mut sg = vec![Expr::zero(); d];
    sg[S] = Expr::rational(1, n as i64 + 2);
    let sigma = OneForm(sg);
    let theta: Vec<OneForm> = (0..2 * n).map(|i| OneForm::coordinate(d, 2 + i)).collect();
    let chart = metric_from_coframe(coords.clone(), &omega, &theta, &sigma)?;

    let mut frame = vec![VectorFieldChart::coordinate(d, 0), VectorFieldChart::coordinate(d, t)];
    for j in 0..n {
        let mut v = VectorFieldChart::coordinate(d, x(j));
        v.0[t] = var(y(j));
        frame.push(v);
    }
    for j in 0..n {
        let mut v = VectorFieldChart::coordinate(d, y(j));
        v.0[t] = (-var(x(j))).simplify();
        frame.push(v);
    }

    let mut ch = FeffermanChart { n, chart, frame, omega, sigma, theta, j_sign: 1 };
    ch.j_sign = ch.calibrate_j();
    Ok(ch)
}

impl FeffermanChart {
    pub fn coords(&self) -> &[String] {
        self.chart.coords()
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 2
    }

    /// Sign making `dω(JX_1, X_1) ≥ 0` for the table `JX_j = ±X_{n+j}`.
    fn calibrate_j(&self) -> i8 {
        let x1 = &self.frame[horizontal(0)];
        let jx1 = &self.frame[horizontal(self.n)];
        let v = self.omega.exterior_derivative(self.coords(), jx1, x1);
        match v.as_const() {
            Some(c) if *c < num_traits::Zero::zero() => -1,
            _ => 1,
        }
    }

    /// `J` applied to a frame slot, as a signed frame slot; `None` for `𝒮, ξ`.
    pub fn j_slot(&self, k: usize) -> Option<(i8, usize)> {
        if k < 2 {
            return None;
        }
        let i = k - 2;
        Some(if i < self.n { (self.j_sign, horizontal(i + self.n)) } else { (-self.j_sign, horizontal(i - self.n)) })
    }

    /// `J` applied to a frame field.
    pub fn j_frame(&self, k: usize) -> VectorFieldChart {
        match self.j_slot(k) {
            None => VectorFieldChart::zero(self.dim()),
            Some((sign, slot)) => self.frame[slot].scale(&Expr::int(sign as i64)),
        }
    }

    /// `J` on coordinate components `(s, t, x, y)` of a vector at a point:
    /// acts on the horizontal projection `Σ v_xj X_j + v_yj X_{n+j}`.
    pub fn j_components(&self, v: &[f64], x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let sg = self.j_sign as f64;
        let mut out = vec![0.0; self.dim()];
        for j in 0..n {
            let (vx, vy) = (v[2 + j], v[2 + n + j]);
            // J X_j = sg X_{n+j}, J X_{n+j} = −sg X_j
            let (cx, cy) = (-sg * vy, sg * vx);
            out[2 + j] += cx;
            out[2 + n + j] += cy;
            out[1] += cx * x[2 + n + j] - cy * x[2 + j];
        }
        out
    }

    /// `ω`, `θ^i`, `σ` evaluated on coordinate components at a point.
    pub fn coframe_values(&self, v: &[f64], x: &[f64]) -> Result<(f64, Vec<f64>, f64), FefError> {
        let p = Point::on_chart(self.coords(), x)?;
        let pair = |f: &OneForm| -> Result<f64, FefError> {
            let mut acc = 0.0;
            for (c, vi) in f.0.iter().zip(v) {
                if *vi != 0.0 && !c.is_zero() {
                    acc += c.evaluate(&p)? * vi;
                }
            }
            Ok(acc)
        };
        let th = self.theta.iter().map(&pair).collect::<Result<_, _>>()?;
        Ok((pair(&self.omega)?, th, pair(&self.sigma)?))
    }
}

/// Result of a contact rescaling of the coframe.
#[derive(Clone, Debug)]
pub struct FrameChange {
    pub omega: OneForm,
    pub theta: Vec<OneForm>,
    pub sigma: OneForm,
    /// `P` with `(ω′, θ′, σ′) = (ω, θ, σ)·P`, of size `2n+2`.
    pub matrix: Vec<Vec<Expr>>,
}

impl FrameChange {
    /// `g′ = σ′⊙ω′ + Σ θ′^i θ′^i` on the original chart.
    pub fn metric(&self, coords: &[String]) -> Result<MetricChart, TensorError> {
        metric_from_coframe(coords.to_vec(), &self.omega, &self.theta, &self.sigma)
    }

    pub fn matrix_at(&self, coords: &[String], x: &[f64]) -> Result<Mat<f64>, FefError> {
        let p = Point::on_chart(coords, x)?;
        let m = self.matrix.len();
        let mut vals = Vec::with_capacity(m * m);
        for row in &self.matrix {
            for e in row {
                vals.push(e.evaluate(&p)?);
            }
        }
        Ok(Mat::from_fn(m, m, |i, j| vals[i * m + j]))
    }
}

/// Contact rescaling with scale `u = λ²`, translation `x ∈ ℝ^{2n}` (a complex
/// `n`-vector as `(Re, Im)`) and `B` orthogonal and complex linear:
///
/// * `ω′ = u ω`
/// * `θ′^i = λ Σ_j B_ji θ^j + λ x_i ω`
/// * `σ′ = σ − Σ_j (Bx)_j θ^j − (|x|²/2) ω`
///
/// `λ` is supplied instead of `u` so that no square root enters the
/// expressions. Positivity of `λ` and orthogonality of `B` are checked at
/// `points`.
pub fn frame_rescale(
    ch: &FeffermanChart,
    lambda: &Expr,
    x: &[Expr],
    b: &[Vec<Expr>],
    points: &[Vec<f64>],
) -> Result<FrameChange, FefError> {
    let m = 2 * ch.n;
    if x.len() != m {
        return Err(FefError::Shape { expected: m, got: x.len() });
    }
    if b.len() != m || b.iter().any(|r| r.len() != m) {
        return Err(FefError::Shape { expected: m, got: b.len() });
    }
    let coords = ch.coords();
    for pt in points {
        let p = Point::on_chart(coords, pt)?;
        if lambda.evaluate(&p)? <= 0.0 {
            return Err(FefError::NonPositiveU { at: pt.clone() });
        }
        let bm = Mat::from_fn(m, m, |i, j| b[i][j].evaluate(&p).unwrap_or(f64::NAN));
        let res = bm.transpose().matmul(&bm).expect("square").max_abs_diff(&Mat::identity(m));
        if !(res < 1e-10) {
            return Err(FefError::NotUnitary { residual: res });
        }
    }
    let d = ch.dim();
    let u = (lambda.clone() * lambda.clone()).simplify();
    let bx: Vec<Expr> =
        (0..m).map(|j| Expr::sum((0..m).map(|i| b[j][i].clone() * x[i].clone()).collect()).simplify()).collect();
    let half_norm = (Expr::rational(1, 2) * Expr::sum(x.iter().map(|e| e.clone() * e.clone()).collect())).simplify();

    let omega = ch.omega.scale(&u);
    let theta = (0..m)
        .map(|i| {
            let mut parts: Vec<(Expr, &OneForm)> =
                (0..m).map(|j| (lambda.clone() * b[j][i].clone(), &ch.theta[j])).collect();
            parts.push((lambda.clone() * x[i].clone(), &ch.omega));
            OneForm::combination(d, &parts)
        })
        .collect();
    let mut parts: Vec<(Expr, &OneForm)> = vec![(Expr::one(), &ch.sigma), (-half_norm.clone(), &ch.omega)];
    parts.extend((0..m).map(|j| (-bx[j].clone(), &ch.theta[j])));
    let sigma = OneForm::combination(d, &parts);

    let mut matrix = vec![vec![Expr::zero(); m + 2]; m + 2];
    matrix[0][0] = u;
    for i in 0..m {
        matrix[0][1 + i] = (lambda.clone() * x[i].clone()).simplify();
        for j in 0..m {
            matrix[1 + j][1 + i] = (lambda.clone() * b[j][i].clone()).simplify();
        }
        matrix[1 + i][m + 1] = -bx[i].clone();
    }
    matrix[0][m + 1] = -half_norm;
    matrix[m + 1][m + 1] = Expr::one();
    Ok(FrameChange { omega, theta, sigma, matrix })
}

/// Pointwise least-squares fit `u = ⟨g′, g⟩/⟨g, g⟩` and the largest
/// residual `‖g′ − u g‖_∞` over all points.
pub fn verify_conformal(g: &MetricChart, g2: &MetricChart, points: &[Vec<f64>]) -> Result<(Vec<f64>, f64), FefError> {
    if g.coords() != g2.coords() {
        return Err(FefError::Shape { expected: g.dim(), got: g2.dim() });
    }
    let (c1, c2) = (g.compile::<f64>()?, g2.compile::<f64>()?);
    let mut us = Vec::with_capacity(points.len());
    let mut worst = 0.0f64;
    for p in points {
        let (a, b) = (c1.eval(p)?, c2.eval(p)?);
        let (aa, ab) = a.as_slice().iter().zip(b.as_slice()).fold((0.0, 0.0), |(s, t), (x, y)| (s + x * x, t + x * y));
        if aa == 0.0 {
            return Err(FefError::DegeneratePoint { at: p.clone() });
        }
        let u = ab / aa;
        worst = worst.max(b.max_abs_diff(&a.scale(&u)));
        us.push(u);
    }
    Ok((us, worst))
}

/// `(σ(ξ), g(ξ, ξ))` from the scalar curvature `s` of the base:
/// `σ(ξ) = −s/(2(n+1)(n+2))` and `g(ξ, ξ) = 2σ(ξ)`.
pub fn sigma_xi_from_scalar<T: Clone + Num + FromPrimitive>(s: T, n: u32) -> (T, T) {
    let n = n as u64;
    let den = T::from_u64(2 * (n + 1) * (n + 2)).expect("representable");
    let sigma = T::zero() - s / den;
    let two = T::from_u64(2).expect("representable");
    (sigma.clone(), two * sigma)
}

/// Base geometries with constant holomorphic sectional curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    ProjectiveSpace,
    Torus,
    Hyperbolic,
}

/// Scalar curvature `±n(n+1)c/2` or `0` of the base.
pub fn base_scalar<T: Clone + Num + FromPrimitive>(base: Base, n: u32, c: T) -> T {
    let k = T::from_u64(n as u64 * (n as u64 + 1)).expect("representable") * c / T::from_u64(2).expect("representable");
    match base {
        Base::ProjectiveSpace => k,
        Base::Torus => T::zero(),
        Base::Hyperbolic => T::zero() - k,
    }
}

/// `⟨z, w⟩ = Σ_{i ≤ n+1} z̄_i w_i − z̄_{n+2} w_{n+2}` on `ℂ^{n+2}`.
pub fn hermitian(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    let last = z.len() - 1;
    z.iter().zip(w).enumerate().map(|(i, (a, b))| if i == last { -a.conj() * b } else { a.conj() * b }).sum()
}

const CONE_TOL: f64 = 1e-10;

/// `Re⟨X, Y⟩` for vectors tangent to the null cone at `p`; this is the
/// cone-model metric on the projected tangent vectors.
pub fn cone_model_metric(p: &[Complex64], x: &[Complex64], y: &[Complex64]) -> Result<f64, FefError> {
    if x.len() != p.len() || y.len() != p.len() || p.len() < 2 {
        return Err(FefError::Shape { expected: p.len(), got: x.len().min(y.len()) });
    }
    let r = hermitian(p, p).norm();
    if r > CONE_TOL {
        return Err(FefError::NotOnCone { residual: r });
    }
    for v in [x, y] {
        let r = hermitian(p, v).re.abs();
        if r > CONE_TOL {
            return Err(FefError::NotTangent { residual: r });
        }
    }
    Ok(hermitian(x, y).re)
}

/// The cone point `(a_1, …, a_{n+1}, z/√(n+2))` after normalizing `a` to
/// `Σ|a_i|² = 1/(n+2)` and `z` to modulus one.
pub fn cone_point(a: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let k = (a.len() + 1) as f64;
    let na = a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let mut p: Vec<Complex64> = a.iter().map(|v| v / (na * k.sqrt())).collect();
    p.push(z / (z.norm() * k.sqrt()));
    p
}

/// Tangents `(ṡ(0), ċ(0))` at a cone point: the circle action
/// `s(θ) = e^{iθ} p` and the curve rotating only the last coordinate.
pub fn circle_tangents(p: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let i = Complex64::i();
    let s: Vec<Complex64> = p.iter().map(|v| i * v).collect();
    let mut c = vec![Complex64::new(0.0, 0.0); p.len()];
    let last = p.len() - 1;
    c[last] = -i * p[last];
    (s, c)
}

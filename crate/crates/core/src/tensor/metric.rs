use std::collections::HashMap;

use super::{Tensor, TensorError};
use crate::linalg::{signature, Mat, Signature};
use crate::sym::{Compiled, Expr, Point};
use crate::Scalar;

/// A metric `g_AB` on a coordinate chart.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricChart {
    coords: Vec<String>,
    g: Tensor<Expr>,
}

impl MetricChart {
    /// Builds a chart from a full component matrix, rejecting asymmetric input.
    pub fn new<S: Into<String>>(
        coords: impl IntoIterator<Item = S>,
        rows: Vec<Vec<Expr>>,
    ) -> Result<Self, TensorError> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        let d = coords.len();
        if d < 2 {
            return Err(TensorError::DimensionTooSmall { dim: d, min: 2 });
        }
        if rows.len() != d {
            return Err(TensorError::DimensionMismatch { expected: d, got: rows.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(TensorError::DimensionMismatch { expected: d, got: r.len() });
        }
        for (i, name) in coords.iter().enumerate() {
            if coords[..i].contains(name) {
                return Err(crate::sym::SymError::DuplicateCoordinate(name.clone()).into());
            }
        }
        for a in 0..d {
            for b in a + 1..d {
                if !(rows[a][b].clone() - rows[b][a].clone()).simplify().is_zero() {
                    return Err(TensorError::NotSymmetric { row: a, col: b });
                }
            }
        }
        let g = Tensor::from_fn(d, 2, |i| rows[i[0]][i[1]].simplify());
        Ok(MetricChart { coords, g })
    }

    /// Builds a chart from upper-triangle entries; missing components are zero.
    pub fn from_upper<S: Into<String>>(
        coords: impl IntoIterator<Item = S>,
        entries: impl IntoIterator<Item = (usize, usize, Expr)>,
    ) -> Result<Self, TensorError> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        let d = coords.len();
        let mut rows = vec![vec![Expr::zero(); d]; d];
        for (i, j, e) in entries {
            if i >= d || j >= d {
                return Err(TensorError::DimensionMismatch { expected: d, got: i.max(j) + 1 });
            }
            rows[i][j] = e.clone();
            rows[j][i] = e;
        }
        MetricChart::new(coords, rows)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn component(&self, a: usize, b: usize) -> &Expr {
        &self.g[[a, b]]
    }

    pub fn components(&self) -> &Tensor<Expr> {
        &self.g
    }

    /// The conformally related metric `u·g`.
    pub fn scaled(&self, u: &Expr) -> MetricChart {
        MetricChart { coords: self.coords.clone(), g: self.g.map(|e| (u.clone() * e.clone()).simplify()) }
    }

    /// The metric plus a symmetric perturbation given as full rows.
    pub fn plus(&self, rows: &[Vec<Expr>]) -> Result<MetricChart, TensorError> {
        let d = self.dim();
        let sum = (0..d).map(|a| (0..d).map(|b| self.g[[a, b]].clone() + rows[a][b].clone()).collect()).collect();
        MetricChart::new(self.coords.clone(), sum)
    }

    pub fn compile<T: Scalar>(&self) -> Result<CompiledMetric<T>, TensorError> {
        Ok(CompiledMetric { dim: self.dim(), g: self.g.try_map(|e| e.compile(&self.coords))? })
    }

    /// The component matrix at coordinate values ordered as [`coords`](Self::coords).
    pub fn eval<T: Scalar>(&self, x: &[T]) -> Result<Mat<T>, TensorError> {
        self.compile()?.eval(x)
    }

    pub fn eval_at<T: Scalar>(&self, p: &Point<T>) -> Result<Mat<T>, TensorError> {
        self.eval(&p.values_for(&self.coords)?)
    }

    /// `g(X, Y)` as an expression.
    pub fn inner(&self, x: &VectorFieldChart, y: &VectorFieldChart) -> Result<Expr, TensorError> {
        self.check_field(x)?;
        self.check_field(y)?;
        let d = self.dim();
        let mut terms = Vec::new();
        for a in 0..d {
            for b in 0..d {
                if self.g[[a, b]].is_zero() || x.0[a].is_zero() || y.0[b].is_zero() {
                    continue;
                }
                terms.push(self.g[[a, b]].clone() * x.0[a].clone() * y.0[b].clone());
            }
        }
        Ok(Expr::sum(terms).simplify())
    }

    pub(crate) fn check_field(&self, v: &VectorFieldChart) -> Result<(), TensorError> {
        if v.0.len() != self.dim() {
            return Err(TensorError::DimensionMismatch { expected: self.dim(), got: v.0.len() });
        }
        Ok(())
    }

    /// Checks nondegeneracy at every sample point and returns the common signature.
    pub fn check_at<T: Scalar>(&self, points: &[Vec<T>]) -> Result<Signature, TensorError> {
        let c = self.compile::<T>()?;
        let mut seen: Option<Signature> = None;
        for p in points {
            let m = c.eval(p)?;
            m.inverse().map_err(|_| TensorError::SingularMetric {
                at: Some(p.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()),
            })?;
            let s = signature(&m, T::lit(1e-10)).map_err(|_| TensorError::SingularMetric { at: None })?;
            match seen {
                Some(prev) if prev != s => return Err(TensorError::SignatureChange),
                _ => seen = Some(s),
            }
        }
        seen.ok_or(TensorError::SignatureChange)
    }

    /// Exact inverse `g^AB` as adjugate over determinant.
    pub fn inverse_symbolic(&self) -> Result<Tensor<Expr>, TensorError> {
        let d = self.dim();
        let mut memo = HashMap::new();
        let full = (1u32 << d) - 1;
        let det = minor(&self.g, full, full, &mut memo);
        if det.is_zero() {
            return Err(TensorError::SingularMetric { at: None });
        }
        let mut inv = Tensor::filled(d, 2, Expr::zero());
        for i in 0..d {
            for j in i..d {
                // (g^-1)_ij = (-1)^(i+j) M_ji / det, and the metric is symmetric
                let m = minor(&self.g, full & !(1 << j), full & !(1 << i), &mut memo);
                let cof = if (i + j) % 2 == 0 { m } else { -m };
                let e = Expr::quotient(cof, det.clone()).expect("nonzero determinant").simplify();
                inv.set(&[i, j], e.clone());
                inv.set(&[j, i], e);
            }
        }
        Ok(inv)
    }

    /// Exact determinant of the component matrix.
    pub fn determinant(&self) -> Expr {
        let full = (1u32 << self.dim()) - 1;
        minor(&self.g, full, full, &mut HashMap::new())
    }
}

/// Determinant of the submatrix on the given row and column masks, by
/// Laplace expansion along the lowest row.
fn minor(g: &Tensor<Expr>, rows: u32, cols: u32, memo: &mut HashMap<(u32, u32), Expr>) -> Expr {
    if rows == 0 {
        return Expr::one();
    }
    if let Some(e) = memo.get(&(rows, cols)) {
        return e.clone();
    }
    let r = rows.trailing_zeros() as usize;
    let mut terms = Vec::new();
    let mut sign_neg = false;
    for c in 0..g.dim() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &g[[r, c]];
        if !entry.is_zero() {
            let sub = minor(g, rows & !(1 << r), cols & !(1 << c), memo);
            if !sub.is_zero() {
                let t = entry.clone() * sub;
                terms.push(if sign_neg { -t } else { t });
            }
        }
        sign_neg = !sign_neg;
    }
    let e = Expr::sum(terms).simplify();
    memo.insert((rows, cols), e.clone());
    e
}

/// Metric components compiled against the chart coordinates.
#[derive(Clone, Debug)]
pub struct CompiledMetric<T> {
    dim: usize,
    g: Tensor<Compiled<T>>,
}

impl<T: Scalar> CompiledMetric<T> {
    pub fn eval(&self, x: &[T]) -> Result<Mat<T>, TensorError> {
        let mut m = Mat::zeros(self.dim, self.dim);
        for a in 0..self.dim {
            for b in a..self.dim {
                let v = self.g[[a, b]].eval(x)?;
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        Ok(m)
    }
}

/// A vector field given by its coordinate-frame components.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldChart(pub Vec<Expr>);

impl VectorFieldChart {
    pub fn new(components: Vec<Expr>) -> Self {
        VectorFieldChart(components)
    }

    /// The coordinate field `∂_i` on a `dim`-dimensional chart.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        VectorFieldChart((0..dim).map(|k| if k == i { Expr::one() } else { Expr::zero() }).collect())
    }

    pub fn zero(dim: usize) -> Self {
        VectorFieldChart(vec![Expr::zero(); dim])
    }

    pub fn components(&self) -> &[Expr] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, f: &Expr) -> Self {
        VectorFieldChart(self.0.iter().map(|c| (f.clone() * c.clone()).simplify()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        VectorFieldChart(self.0.iter().zip(&other.0).map(|(a, b)| (a.clone() + b.clone()).simplify()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.simplify().is_zero())
    }

    pub fn eval<T: Scalar>(&self, coords: &[String], x: &[T]) -> Result<Vec<T>, TensorError> {
        self.0.iter().map(|c| Ok(c.compile::<T>(coords)?.eval(x)?)).collect()
    }
}

impl VectorFieldChart {
    /// Lie bracket `[X, Y]^C = X(Y^C) − Y(X^C)`.
    pub fn bracket(&self, coords: &[String], other: &Self) -> Self {
        VectorFieldChart(
            (0..self.dim())
                .map(|c| (other.0[c].directional(coords, &self.0) - self.0[c].directional(coords, &other.0)).simplify())
                .collect(),
        )
    }
}

/// A one-form given by its coordinate-coframe components.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm(pub Vec<Expr>);

impl OneForm {
    pub fn new(components: Vec<Expr>) -> Self {
        OneForm(components)
    }

    /// The coordinate differential `dx^i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        OneForm((0..dim).map(|k| if k == i { Expr::one() } else { Expr::zero() }).collect())
    }

    pub fn components(&self) -> &[Expr] {
        &self.0
    }

    pub fn scale(&self, f: &Expr) -> Self {
        OneForm(self.0.iter().map(|c| (f.clone() * c.clone()).simplify()).collect())
    }

    /// Sum of `c_k · α_k`.
    pub fn combination(dim: usize, parts: &[(Expr, &OneForm)]) -> Self {
        OneForm(
            (0..dim)
                .map(|a| Expr::sum(parts.iter().map(|(c, f)| c.clone() * f.0[a].clone()).collect()).simplify())
                .collect(),
        )
    }

    /// `α(X)`.
    pub fn apply(&self, v: &VectorFieldChart) -> Expr {
        Expr::sum(
            self.0
                .iter()
                .zip(&v.0)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        )
        .simplify()
    }

    /// `dα(X, Y) = X α(Y) − Y α(X) − α([X, Y])`.
    pub fn exterior_derivative(&self, coords: &[String], x: &VectorFieldChart, y: &VectorFieldChart) -> Expr {
        let xy = self.apply(y).directional(coords, &x.0);
        let yx = self.apply(x).directional(coords, &y.0);
        (xy - yx - self.apply(&x.bracket(coords, y))).simplify()
    }
}

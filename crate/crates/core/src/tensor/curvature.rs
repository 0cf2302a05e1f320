use super::assemble;
use super::metric::{MetricChart, VectorFieldChart};
use super::{Component, Tensor, TensorError};
use crate::linalg::Mat;
use crate::sym::{Compiled, Expr, Point};
use crate::Scalar;

/// Why a Weyl tensor was reported as identically zero without computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylWarning {
    /// The Weyl tensor vanishes identically in dimension 3.
    DimensionThree,
    /// The Weyl tensor is undefined below dimension 3.
    Undefined,
}

struct Parts<F> {
    riemann_up: Tensor<F>,
    riemann_low: Tensor<F>,
    ricci: Tensor<F>,
    scalar: F,
    weyl: Tensor<F>,
    weyl_warning: Option<WeylWarning>,
}

fn parts<F: Component>(g: &Tensor<F>, ginv: &Tensor<F>, gamma: &Tensor<F>, dgamma: &Tensor<F>) -> Parts<F> {
    let d = g.dim();
    let riemann_up = assemble::riemann_up(gamma, dgamma);
    let riemann_low = assemble::lower_last(g, &riemann_up);
    let ricci = assemble::ricci(&riemann_up);
    let scalar = assemble::trace(ginv, &ricci);
    let (weyl, weyl_warning) = match d {
        0..=2 => (Tensor::filled(d, 4, F::zero()), Some(WeylWarning::Undefined)),
        3 => (Tensor::filled(d, 4, F::zero()), Some(WeylWarning::DimensionThree)),
        _ => (assemble::weyl(g, &riemann_low, &ricci, &scalar), None),
    };
    Parts { riemann_up, riemann_low, ricci, scalar, weyl, weyl_warning }
}

/// Exact curvature of a [`MetricChart`].
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub coords: Vec<String>,
    pub metric: Tensor<Expr>,
    pub inverse: Tensor<Expr>,
    /// `Γ^C_AB` at `[C, A, B]`.
    pub christoffel: Tensor<Expr>,
    /// `R^D_ABC` at `[D, A, B, C]`.
    pub riemann_up: Tensor<Expr>,
    pub riemann_low: Tensor<Expr>,
    pub ricci: Tensor<Expr>,
    pub scalar: Expr,
    pub weyl: Tensor<Expr>,
    pub weyl_warning: Option<WeylWarning>,
}

fn metric_derivative(m: &MetricChart) -> Tensor<Expr> {
    let g = m.components();
    Tensor::from_fn(m.dim(), 3, |i| g[[i[1], i[2]]].differentiate(&m.coords()[i[0]]))
}

fn christoffel_derivative(coords: &[String], gamma: &Tensor<Expr>) -> Tensor<Expr> {
    let d = coords.len();
    let mut out = Tensor::filled(d, 4, Expr::zero());
    for e in 0..d {
        for c in 0..d {
            for a in 0..d {
                for b in a..d {
                    let v = gamma[[c, a, b]].differentiate(&coords[e]);
                    out.set(&[e, c, b, a], v.clone());
                    out.set(&[e, c, a, b], v);
                }
            }
        }
    }
    out
}

impl CurvatureBundle {
    pub fn compute(m: &MetricChart) -> Result<Self, TensorError> {
        let inverse = m.inverse_symbolic()?;
        let christoffel = assemble::christoffel(&inverse, &metric_derivative(m));
        let dgamma = christoffel_derivative(m.coords(), &christoffel);
        let p = parts(m.components(), &inverse, &christoffel, &dgamma);
        Ok(CurvatureBundle {
            coords: m.coords().to_vec(),
            metric: m.components().clone(),
            inverse,
            christoffel,
            riemann_up: p.riemann_up,
            riemann_low: p.riemann_low,
            ricci: p.ricci,
            scalar: p.scalar,
            weyl: p.weyl,
            weyl_warning: p.weyl_warning,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `∇_X Y`.
    pub fn covariant_derivative(
        &self,
        x: &VectorFieldChart,
        y: &VectorFieldChart,
    ) -> Result<VectorFieldChart, TensorError> {
        nabla(&self.coords, &self.christoffel, x, y)
    }

    pub fn compile<T: Scalar>(&self) -> Result<CompiledBundle<T>, TensorError> {
        let c = |t: &Tensor<Expr>| t.try_map(|e| e.compile::<T>(&self.coords));
        Ok(CompiledBundle {
            arity: self.coords.len(),
            metric: c(&self.metric)?,
            inverse: c(&self.inverse)?,
            christoffel: c(&self.christoffel)?,
            riemann_up: c(&self.riemann_up)?,
            riemann_low: c(&self.riemann_low)?,
            ricci: c(&self.ricci)?,
            scalar: self.scalar.compile(&self.coords)?,
            weyl: c(&self.weyl)?,
            weyl_warning: self.weyl_warning,
        })
    }

    pub fn at<T: Scalar>(&self, p: &Point<T>) -> Result<PointCurvature<T>, TensorError> {
        self.compile()?.eval(&p.values_for(&self.coords)?)
    }
}

fn nabla(
    coords: &[String],
    gamma: &Tensor<Expr>,
    x: &VectorFieldChart,
    y: &VectorFieldChart,
) -> Result<VectorFieldChart, TensorError> {
    let d = coords.len();
    for v in [x, y] {
        if v.dim() != d {
            return Err(TensorError::DimensionMismatch { expected: d, got: v.dim() });
        }
    }
    let (xs, ys) = (x.components(), y.components());
    let comps = (0..d)
        .map(|c| {
            let mut terms = vec![ys[c].directional(coords, xs)];
            for a in 0..d {
                for b in 0..d {
                    if gamma[[c, a, b]].is_zero() || xs[a].is_zero() || ys[b].is_zero() {
                        continue;
                    }
                    terms.push(gamma[[c, a, b]].clone() * xs[a].clone() * ys[b].clone());
                }
            }
            Expr::sum(terms).simplify()
        })
        .collect();
    Ok(VectorFieldChart::new(comps))
}

/// Christoffel symbols `Γ^C_AB` at `[C, A, B]`.
pub fn christoffel(m: &MetricChart) -> Result<Tensor<Expr>, TensorError> {
    let inverse = m.inverse_symbolic()?;
    Ok(assemble::christoffel(&inverse, &metric_derivative(m)))
}

/// The Riemann tensor as `(R^D_ABC, R_ABCD)`.
pub fn riemann(m: &MetricChart) -> Result<(Tensor<Expr>, Tensor<Expr>), TensorError> {
    let b = CurvatureBundle::compute(m)?;
    Ok((b.riemann_up, b.riemann_low))
}

/// Ricci tensor `Ric_BC = R^A_ABC` and scalar curvature.
pub fn ricci_scalar(m: &MetricChart) -> Result<(Tensor<Expr>, Expr), TensorError> {
    let b = CurvatureBundle::compute(m)?;
    Ok((b.ricci, b.scalar))
}

/// Lowered Weyl tensor. Dimension 3 yields zeros and a warning.
pub fn weyl(m: &MetricChart) -> Result<(Tensor<Expr>, Option<WeylWarning>), TensorError> {
    if m.dim() < 3 {
        return Err(TensorError::DimensionTooSmall { dim: m.dim(), min: 3 });
    }
    let b = CurvatureBundle::compute(m)?;
    Ok((b.weyl, b.weyl_warning))
}

/// `(∇_X Y)^C = X^A ∂_A Y^C + Γ^C_AB X^A Y^B`.
pub fn covariant_derivative(
    m: &MetricChart,
    x: &VectorFieldChart,
    y: &VectorFieldChart,
) -> Result<VectorFieldChart, TensorError> {
    nabla(m.coords(), &christoffel(m)?, x, y)
}

/// A [`CurvatureBundle`] with every component compiled for evaluation.
#[derive(Clone, Debug)]
pub struct CompiledBundle<T> {
    arity: usize,
    metric: Tensor<Compiled<T>>,
    inverse: Tensor<Compiled<T>>,
    christoffel: Tensor<Compiled<T>>,
    riemann_up: Tensor<Compiled<T>>,
    riemann_low: Tensor<Compiled<T>>,
    ricci: Tensor<Compiled<T>>,
    scalar: Compiled<T>,
    weyl: Tensor<Compiled<T>>,
    weyl_warning: Option<WeylWarning>,
}

impl<T: Scalar> CompiledBundle<T> {
    pub fn eval(&self, x: &[T]) -> Result<PointCurvature<T>, TensorError> {
        if x.len() != self.arity {
            return Err(TensorError::DimensionMismatch { expected: self.arity, got: x.len() });
        }
        let e = |t: &Tensor<Compiled<T>>| t.try_map(|c| c.eval(x));
        Ok(PointCurvature {
            metric: e(&self.metric)?,
            inverse: e(&self.inverse)?,
            christoffel: e(&self.christoffel)?,
            riemann_up: e(&self.riemann_up)?,
            riemann_low: e(&self.riemann_low)?,
            ricci: e(&self.ricci)?,
            scalar: self.scalar.eval(x)?,
            weyl: e(&self.weyl)?,
            weyl_warning: self.weyl_warning,
        })
    }

    /// Only the lowered Weyl tensor, skipping the other components.
    pub fn eval_weyl(&self, x: &[T]) -> Result<Tensor<T>, TensorError> {
        Ok(self.weyl.try_map(|c| c.eval(x))?)
    }
}

/// All curvature quantities evaluated at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCurvature<T> {
    pub metric: Tensor<T>,
    pub inverse: Tensor<T>,
    pub christoffel: Tensor<T>,
    pub riemann_up: Tensor<T>,
    pub riemann_low: Tensor<T>,
    pub ricci: Tensor<T>,
    pub scalar: T,
    pub weyl: Tensor<T>,
    pub weyl_warning: Option<WeylWarning>,
}

impl<T: Scalar> PointCurvature<T> {
    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// `W^D_ABC = g^DE W_ABCE`, the conformally invariant variance.
    pub fn weyl_mixed(&self) -> Tensor<T> {
        let d = self.dim();
        Tensor::from_fn(d, 4, |i| {
            (0..d).fold(T::zero(), |acc, e| acc + self.inverse[[i[0], e]] * self.weyl[[i[1], i[2], i[3], e]])
        })
    }

    /// `g^AC R_ABCD`, which equals `−Ric_BD` in the stored convention.
    pub fn ricci_first_third(&self) -> Tensor<T> {
        contract_13(&self.inverse, &self.riemann_low)
    }

    /// `g^AC W_ABCD`; zero for a trace-free tensor.
    pub fn weyl_trace(&self) -> Tensor<T> {
        contract_13(&self.inverse, &self.weyl)
    }

    /// Largest difference over Christoffel, Riemann, Ricci, scalar and Weyl.
    pub fn max_abs_diff(&self, other: &PointCurvature<T>) -> T {
        [
            self.christoffel.max_abs_diff(&other.christoffel),
            self.riemann_up.max_abs_diff(&other.riemann_up),
            self.riemann_low.max_abs_diff(&other.riemann_low),
            self.ricci.max_abs_diff(&other.ricci),
            (self.scalar - other.scalar).abs(),
            self.weyl.max_abs_diff(&other.weyl),
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }

    /// Largest violation of the algebraic Riemann symmetries and first Bianchi identity.
    pub fn symmetry_residual(&self) -> T {
        let r = &self.riemann_low;
        let d = self.dim();
        let mut worst = T::zero();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for dd in 0..d {
                        let v = r[[a, b, c, dd]];
                        let checks = [
                            v + r[[b, a, c, dd]],
                            v + r[[a, b, dd, c]],
                            v - r[[c, dd, a, b]],
                            v + r[[a, c, dd, b]] + r[[a, dd, b, c]],
                        ];
                        for x in checks {
                            worst = worst.max(x.abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

fn contract_13<T: Scalar>(ginv: &Tensor<T>, t: &Tensor<T>) -> Tensor<T> {
    let d = ginv.dim();
    Tensor::from_fn(d, 2, |i| {
        let mut acc = T::zero();
        for a in 0..d {
            for c in 0..d {
                acc = acc + ginv[[a, c]] * t[[a, i[0], c, i[1]]];
            }
        }
        acc
    })
}

/// Metric components with exact first and second derivatives, compiled.
///
/// Evaluation inverts `g` numerically and assembles curvature from the
/// derivative values, avoiding the symbolic inverse and Riemann tensor.
#[derive(Clone, Debug)]
pub struct MetricJet<T> {
    dim: usize,
    g: Tensor<Compiled<T>>,
    dg: Tensor<Compiled<T>>,
    ddg: Tensor<Compiled<T>>,
}

impl<T: Scalar + Component> MetricJet<T> {
    pub fn new(m: &MetricChart) -> Result<Self, TensorError> {
        let coords = m.coords();
        let dg = metric_derivative(m);
        let ddg = Tensor::from_fn(m.dim(), 4, |i| dg[[i[1], i[2], i[3]]].differentiate(&coords[i[0]]));
        let c = |t: &Tensor<Expr>| t.try_map(|e| e.compile::<T>(coords));
        Ok(MetricJet { dim: m.dim(), g: c(m.components())?, dg: c(&dg)?, ddg: c(&ddg)? })
    }

    pub fn curvature_at(&self, x: &[T]) -> Result<PointCurvature<T>, TensorError> {
        let d = self.dim;
        if x.len() != d {
            return Err(TensorError::DimensionMismatch { expected: d, got: x.len() });
        }
        let e = |t: &Tensor<Compiled<T>>| t.try_map(|c| c.eval(x));
        let g = e(&self.g)?;
        let dg = e(&self.dg)?;
        let ddg = e(&self.ddg)?;
        let gm = Mat::from_fn(d, d, |a, b| g[[a, b]]);
        let inv = gm.inverse().map_err(|_| TensorError::SingularMetric {
            at: Some(x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()),
        })?;
        let ginv = Tensor::from_fn(d, 2, |i| inv[(i[0], i[1])]);
        let gamma = assemble::christoffel(&ginv, &dg);
        // ∂_E g^CD = −g^CP ∂_E g_PQ g^QD
        let dginv = Tensor::from_fn(d, 3, |i| {
            let (ee, c, dd) = (i[0], i[1], i[2]);
            let mut acc = <T as Component>::zero();
            for p in 0..d {
                for q in 0..d {
                    acc = acc + ginv[[c, p]] * dg[[ee, p, q]] * ginv[[q, dd]];
                }
            }
            -acc
        });
        let half = T::lit(0.5);
        let dgamma = Tensor::from_fn(d, 4, |i| {
            let (ee, c, a, b) = (i[0], i[1], i[2], i[3]);
            let mut acc = <T as Component>::zero();
            for dd in 0..d {
                let first = half * (dg[[a, dd, b]] + dg[[b, dd, a]] - dg[[dd, a, b]]);
                let dfirst = half * (ddg[[ee, a, dd, b]] + ddg[[ee, b, dd, a]] - ddg[[ee, dd, a, b]]);
                acc = acc + dginv[[ee, c, dd]] * first + ginv[[c, dd]] * dfirst;
            }
            acc
        });
        let p = parts(&g, &ginv, &gamma, &dgamma);
        Ok(PointCurvature {
            metric: g,
            inverse: ginv,
            christoffel: gamma,
            riemann_up: p.riemann_up,
            riemann_low: p.riemann_low,
            ricci: p.ricci,
            scalar: p.scalar,
            weyl: p.weyl,
            weyl_warning: p.weyl_warning,
        })
    }
}

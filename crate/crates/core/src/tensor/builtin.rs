//! Reference metrics with known curvature.

use super::{MetricChart, TensorError};
use crate::sym::Expr;

fn names(prefix: &str, d: usize) -> Vec<String> {
    (0..d).map(|i| format!("{prefix}{i}")).collect()
}

fn diagonal(coords: Vec<String>, diag: Vec<Expr>) -> Result<MetricChart, TensorError> {
    let d = diag.len();
    let rows = (0..d).map(|a| (0..d).map(|b| if a == b { diag[a].clone() } else { Expr::zero() }).collect()).collect();
    MetricChart::new(coords, rows)
}

/// The identity metric on `ℝ^d` in coordinates `x0..x{d−1}`.
pub fn euclidean(d: usize) -> Result<MetricChart, TensorError> {
    diagonal(names("x", d), vec![Expr::one(); d])
}

/// `diag(1, …, 1, −1)` on `ℝ^d`; the last coordinate is timelike.
pub fn minkowski(d: usize) -> Result<MetricChart, TensorError> {
    let mut diag = vec![Expr::one(); d];
    if let Some(last) = diag.last_mut() {
        *last = Expr::int(-1);
    }
    diagonal(names("x", d), diag)
}

/// The unit round sphere `dθ² + sin²θ dφ²`.
pub fn sphere2() -> Result<MetricChart, TensorError> {
    let th = Expr::var("theta");
    diagonal(vec!["theta".into(), "phi".into()], vec![Expr::one(), th.sin().pow(2)])
}

/// `e^(x+y)` times the Euclidean metric on `ℝ⁴` with coordinates `x, y, z, w`.
pub fn conformal_euclidean4() -> Result<MetricChart, TensorError> {
    let u = (Expr::var("x") + Expr::var("y")).exp();
    diagonal(vec!["x".into(), "y".into(), "z".into(), "w".into()], vec![u; 4])
}

/// A Lorentz metric on `(t, x, y, z)` with polynomial components and
/// nonvanishing Weyl tensor.
///
/// It is `Lᵀ η L` for `η = diag(−1, 1, 1, 1)` and a unit lower-triangular
/// polynomial `L`, so the determinant is `−1` and the inverse is polynomial.
pub fn generic_lorentz4() -> Result<MetricChart, TensorError> {
    let (t, x, y, z) = (Expr::var("t"), Expr::var("x"), Expr::var("y"), Expr::var("z"));
    let zero = Expr::zero;
    let one = Expr::one;
    let l = [
        [one(), zero(), zero(), zero()],
        [Expr::rational(1, 2) * x.clone(), one(), zero(), zero()],
        [zero(), Expr::rational(1, 3) * t.clone() * y, one(), zero()],
        [Expr::rational(1, 4) * z.pow(2), t.clone() - z, Expr::rational(1, 3) * x.pow(2), one()],
    ];
    let eta = [-1, 1, 1, 1];
    let rows = (0..4)
        .map(|a| {
            (0..4)
                .map(|b| {
                    let terms = (0..4).map(|k| Expr::int(eta[k]) * l[k][a].clone() * l[k][b].clone()).collect();
                    Expr::sum(terms).simplify()
                })
                .collect()
        })
        .collect();
    MetricChart::new(["t", "x", "y", "z"], rows)
}

/// Names accepted by [`by_name`], in a fixed order.
pub const NAMES: [&str; 5] = ["euclidean", "minkowski", "sphere2", "conformal-euclidean4", "generic-lorentz4"];

/// Looks up a reference metric. `dim` applies to the flat families only.
pub fn by_name(name: &str, dim: usize) -> Option<Result<MetricChart, TensorError>> {
    Some(match name {
        "euclidean" => euclidean(dim),
        "minkowski" => minkowski(dim),
        "sphere2" => sphere2(),
        "conformal-euclidean4" => conformal_euclidean4(),
        "generic-lorentz4" => generic_lorentz4(),
        _ => return None,
    })
}

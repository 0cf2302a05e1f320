use feflab::sym::{parse, Expr, Point};
use feflab::tensor::{
    builtin, christoffel, covariant_derivative, fd_curvature_oracle, ricci_scalar, riemann, weyl, CurvatureBundle,
    MetricChart, MetricJet, TensorError, VectorFieldChart, WeylWarning,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn box_points(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

#[test]
fn flat_metrics_have_zero_christoffel_symbols() {
    for m in [builtin::euclidean(3).unwrap(), builtin::minkowski(3).unwrap()] {
        let g = christoffel(&m).unwrap();
        assert!(g.as_slice().iter().all(Expr::is_zero));
        let (up, low) = riemann(&m).unwrap();
        assert!(up.as_slice().iter().chain(low.as_slice()).all(Expr::is_zero));
    }
    let (ric, s) = ricci_scalar(&builtin::euclidean(4).unwrap()).unwrap();
    assert!(ric.as_slice().iter().all(Expr::is_zero) && s.is_zero());
}

#[test]
fn sphere_christoffel_closed_form() {
    let m = builtin::sphere2().unwrap();
    let g = christoffel(&m).unwrap();
    let p = Point::new([("theta", 1.0), ("phi", 0.4)]).unwrap();
    let v = g[[0, 1, 1]].evaluate(&p).unwrap();
    assert!((v - (-(1.0f64).sin() * (1.0f64).cos())).abs() < 1e-14);
    let v = g[[1, 0, 1]].evaluate(&p).unwrap();
    assert!((v - (1.0f64).cos() / (1.0f64).sin()).abs() < 1e-14);
}

#[test]
fn sphere_scalar_curvature_is_two() {
    let m = builtin::sphere2().unwrap();
    let b = CurvatureBundle::compute(&m).unwrap();
    let p = Point::new([("theta", 1.0f64), ("phi", -0.3)]).unwrap();
    let pc = b.at(&p).unwrap();
    assert!((pc.scalar - 2.0).abs() < 1e-12, "scalar {}", pc.scalar);
    // positive sectional curvature: R(∂θ, ∂φ, ∂θ, ∂φ) with R_ABCD = g(R(A,B)C,D) is −K sin²θ
    let k = -pc.riemann_low[[0, 1, 0, 1]] / (1.0f64).sin().powi(2);
    assert!((k - 1.0).abs() < 1e-12);
    let fd = fd_curvature_oracle(&m, &p).unwrap();
    assert!((fd.scalar - 2.0).abs() < 1e-5);
    assert_eq!(fd.weyl_warning, Some(WeylWarning::Undefined));
}

#[test]
fn weyl_dimension_rules() {
    assert!(matches!(weyl(&builtin::sphere2().unwrap()), Err(TensorError::DimensionTooSmall { dim: 2, min: 3 })));
    let (w, warn) = weyl(&builtin::euclidean(3).unwrap()).unwrap();
    assert_eq!(warn, Some(WeylWarning::DimensionThree));
    assert!(w.as_slice().iter().all(Expr::is_zero));
}

#[test]
fn conformally_flat_metric_has_vanishing_weyl() {
    let m = builtin::conformal_euclidean4().unwrap();
    let b = CurvatureBundle::compute(&m).unwrap();
    let c = b.compile::<f64>().unwrap();
    for x in box_points(4, 20, 1) {
        let pc = c.eval(&x).unwrap();
        assert!(pc.weyl.max_abs() < 1e-9, "weyl {}", pc.weyl.max_abs());
        assert!(pc.riemann_low.max_abs() > 1e-3);
    }
}

#[test]
fn generic_metric_satisfies_curvature_identities() {
    let m = builtin::generic_lorentz4().unwrap();
    let sig = m.check_at(&box_points(4, 20, 2)).unwrap();
    assert_eq!((sig.positive, sig.negative), (3, 1));
    let b = CurvatureBundle::compute(&m).unwrap();
    let c = b.compile::<f64>().unwrap();
    let mut weyl_seen = 0.0f64;
    for x in box_points(4, 20, 3) {
        let pc = c.eval(&x).unwrap();
        assert!(pc.symmetry_residual() < 1e-9);
        assert!(pc.weyl_trace().max_abs() < 1e-9);
        assert!(pc.ricci_first_third().max_abs_diff(&pc.ricci.map(|v| -v)) < 1e-9);
        weyl_seen = weyl_seen.max(pc.weyl.max_abs());
    }
    assert!(weyl_seen > 1e-3, "the test metric should not be conformally flat");
}

#[test]
fn symbolic_and_numeric_paths_agree_with_oracle() {
    let metrics =
        [builtin::sphere2().unwrap(), builtin::conformal_euclidean4().unwrap(), builtin::generic_lorentz4().unwrap()];
    for (k, m) in metrics.iter().enumerate() {
        let b = CurvatureBundle::compute(m).unwrap().compile::<f64>().unwrap();
        let jet = MetricJet::<f64>::new(m).unwrap();
        for mut x in box_points(m.dim(), 10, 10 + k as u64) {
            if m.dim() == 2 {
                x[0] = 0.5 + (x[0] + 1.0); // keep θ away from the poles
            }
            let sym = b.eval(&x).unwrap();
            let num = jet.curvature_at(&x).unwrap();
            let fd = fd_curvature_oracle(m, &Point::on_chart(m.coords(), &x).unwrap()).unwrap();
            assert!(sym.max_abs_diff(&num) < 1e-10);
            let r = sym.max_abs_diff(&fd);
            assert!(r < 1e-5, "metric {k}: oracle residual {r}");
        }
    }
}

#[test]
fn flat_oracle_is_near_zero() {
    let m = builtin::minkowski(4).unwrap();
    let p = Point::on_chart(m.coords(), &[0.2, -0.1, 0.7, 0.3]).unwrap();
    let fd = fd_curvature_oracle(&m, &p).unwrap();
    assert!(fd.riemann_low.max_abs() < 1e-7 && fd.weyl.max_abs() < 1e-7);
}

#[test]
fn covariant_derivative_on_the_sphere() {
    let m = builtin::sphere2().unwrap();
    let dphi = VectorFieldChart::coordinate(2, 1);
    // ∇_φ ∂_φ = −sinθ cosθ ∂_θ
    let v = covariant_derivative(&m, &dphi, &dphi).unwrap();
    let p = Point::new([("theta", 0.8), ("phi", 0.0)]).unwrap();
    let got = v.components()[0].evaluate(&p).unwrap();
    assert!((got + (0.8f64).sin() * (0.8f64).cos()).abs() < 1e-14);
    assert!(v.components()[1].is_zero());
}

#[test]
fn metric_construction_errors() {
    let x = Expr::var("x");
    let asym = MetricChart::new(["x", "y"], vec![vec![Expr::one(), x], vec![Expr::zero(), Expr::one()]]);
    assert!(matches!(asym, Err(TensorError::NotSymmetric { row: 0, col: 1 })));
    let degenerate =
        MetricChart::from_upper(["x", "y"], [(0, 0, Expr::one()), (0, 1, Expr::one()), (1, 1, Expr::one())]).unwrap();
    assert!(matches!(degenerate.inverse_symbolic(), Err(TensorError::SingularMetric { .. })));
    let pointwise = MetricChart::from_upper(["x", "y"], [(0, 0, parse("x").unwrap()), (1, 1, Expr::one())]).unwrap();
    assert!(matches!(pointwise.check_at(&[vec![0.0, 0.0]]), Err(TensorError::SingularMetric { .. })));
    assert!(matches!(pointwise.check_at(&[vec![1.0, 0.0], vec![-1.0, 0.0]]), Err(TensorError::SignatureChange)));
}

#[test]
fn single_precision_jet() {
    let m = builtin::sphere2().unwrap();
    let jet = MetricJet::<f32>::new(&m).unwrap();
    let pc = jet.curvature_at(&[1.0f32, 0.0]).unwrap();
    assert!((pc.scalar - 2.0).abs() < 1e-4);
}

fn weyl_mixed_at(m: &MetricChart, x: &[f64]) -> feflab::tensor::Tensor<f64> {
    MetricJet::<f64>::new(m).unwrap().curvature_at(x).unwrap().weyl_mixed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mixed_weyl_is_conformally_invariant(
        c in proptest::collection::vec(-0.3f64..0.3, 6),
        x in proptest::collection::vec(-1.0f64..1.0, 4),
    ) {
        let m = builtin::generic_lorentz4().unwrap();
        let v = |n: &str| Expr::var(n);
        let r = |q: f64| Expr::rational((q * 1000.0).round() as i64, 1000);
        let poly = r(c[0]) * v("t") + r(c[1]) * v("x") + r(c[2]) * v("y").pow(2)
            + r(c[3]) * v("x") * v("z") + r(c[4]) * v("t") * v("y") + r(c[5]);
        let scaled = m.scaled(&poly.exp());
        let w0 = weyl_mixed_at(&m, &x);
        let w1 = weyl_mixed_at(&scaled, &x);
        let diff = w0.max_abs_diff(&w1);
        prop_assert!(diff <= 1e-7 * w0.max_abs().max(1.0), "diff {diff}");
    }
}

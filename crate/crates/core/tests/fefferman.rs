use feflab::fefferman::{
    base_scalar, circle_tangents, cone_model_metric, cone_point, frame_rescale, heisenberg_fefferman, hermitian,
    horizontal, sigma_xi_from_scalar, verify_conformal, Base, FefError, FeffermanChart, S, XI,
};
use feflab::sym::{Expr, Point, Rational};
use feflab::tensor::{fd_curvature_oracle, CurvatureBundle, MetricJet, VectorFieldChart};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn box_points(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

fn frame_at(ch: &FeffermanChart, x: &[f64]) -> Vec<Vec<f64>> {
    ch.frame.iter().map(|v| v.eval(ch.coords(), x).unwrap()).collect()
}

fn field_at(ch: &FeffermanChart, v: &VectorFieldChart, x: &[f64]) -> Vec<f64> {
    v.eval(ch.coords(), x).unwrap()
}

#[test]
fn metric_at_origin_for_n1() {
    let ch = heisenberg_fefferman(1).unwrap();
    let g = ch.chart.eval(&[0.0; 4]).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            let want = match (a.min(b), a.max(b)) {
                (0, 1) => 1.0f64 / 3.0,
                (2, 2) | (3, 3) => 1.0,
                _ => 0.0,
            };
            assert!((g[(a, b)] - want).abs() < 1e-15, "({a},{b})");
        }
    }
    assert!(matches!(heisenberg_fefferman(0), Err(FefError::BadDimension(0))));
}

#[test]
fn chart_invariants() {
    for n in [1, 2] {
        let ch = heisenberg_fefferman(n).unwrap();
        let c = ch.coords();
        assert!(ch.omega.apply(&ch.frame[XI]).is_one());
        assert!(ch.omega.apply(&ch.frame[S]).is_zero());
        assert_eq!(ch.sigma.apply(&ch.frame[S]), Expr::rational(1, n as i64 + 2));
        for i in 0..2 * n {
            assert!(ch.omega.apply(&ch.frame[horizontal(i)]).is_zero());
        }
        let g = &ch.chart;
        assert!(g.inner(&ch.frame[S], &ch.frame[S]).unwrap().is_zero());
        assert!(g.inner(&ch.frame[XI], &ch.frame[XI]).unwrap().is_zero());
        assert_eq!(g.inner(&ch.frame[XI], &ch.frame[S]).unwrap(), Expr::rational(1, n as i64 + 2));
        let sig = g.check_at(&box_points(c.len(), 50, 5)).unwrap();
        assert_eq!((sig.positive, sig.negative, sig.zero), (2 * n + 1, 1, 0));
        // the horizontal frame is orthonormal
        for i in 0..2 * n {
            for k in 0..2 * n {
                let e = g.inner(&ch.frame[horizontal(i)], &ch.frame[horizontal(k)]).unwrap();
                assert_eq!(e, if i == k { Expr::one() } else { Expr::zero() });
            }
        }
    }
}

#[test]
fn j_is_calibrated_against_d_omega() {
    for n in [1, 2, 3] {
        let ch = heisenberg_fefferman(n).unwrap();
        assert_eq!(ch.j_sign, -1);
        for i in 0..2 * n {
            let x = &ch.frame[horizontal(i)];
            let v = ch.omega.exterior_derivative(ch.coords(), &ch.j_frame(horizontal(i)), x);
            assert_eq!(v, Expr::int(2));
            // J² = −1
            let (s1, k1) = ch.j_slot(horizontal(i)).unwrap();
            let (s2, k2) = ch.j_slot(k1).unwrap();
            assert_eq!((s1 * s2, k2), (-1, horizontal(i)));
        }
        assert!(ch.j_slot(S).is_none() && ch.j_slot(XI).is_none());
        // the pointwise J matches the frame table
        let x = box_points(ch.dim(), 1, 9).remove(0);
        for k in 0..2 * n {
            let v = field_at(&ch, &ch.frame[horizontal(k)], &x);
            let want = field_at(&ch, &ch.j_frame(horizontal(k)), &x);
            let got = ch.j_components(&v, &x);
            assert!(got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-14));
        }
    }
}

#[test]
fn curvature_in_the_adapted_frame() {
    for n in [1, 2] {
        let ch = heisenberg_fefferman(n).unwrap();
        let b = CurvatureBundle::compute(&ch.chart).unwrap().compile::<f64>().unwrap();
        let d = ch.dim();
        let k = 1.0 / (n as f64 + 2.0);
        for x in box_points(d, 20, 11 + n as u64) {
            let pc = b.eval(&x).unwrap();
            let f = frame_at(&ch, &x);
            assert!(pc.weyl.max_abs() < 1e-9);
            assert!(pc.scalar.abs() < 1e-9);
            let ric = pc.ricci_first_third();
            let r = |a: usize, c: usize| ric.contract(&[&f[a], &f[c]]);
            assert!((r(S, S) + 2.0 * n as f64 * k * k).abs() < 1e-12);
            for a in 0..d {
                assert!(r(XI, a).abs() < 1e-9);
            }
            for i in 0..2 * n {
                for j in 0..2 * n {
                    assert!(r(horizontal(i), horizontal(j)).abs() < 1e-9);
                }
            }
            let rl = |a: usize, b2: usize, c: usize, e: usize| pc.riemann_low.contract(&[&f[a], &f[b2], &f[c], &f[e]]);
            for a in 0..d {
                for b2 in 0..d {
                    for c in 0..d {
                        assert!(rl(XI, a, b2, c).abs() < 1e-9);
                    }
                }
            }
            let h: Vec<usize> = (0..2 * n).map(horizontal).collect();
            for &a in &h {
                for &b2 in &h {
                    let want = if a == b2 { -k * k } else { 0.0 };
                    assert!((rl(S, a, S, b2) - want).abs() < 1e-12);
                    for &c in &h {
                        for &e in &h {
                            assert!(rl(a, b2, c, e).abs() < 1e-9);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn connection_identities() {
    for n in [1, 2] {
        let ch = heisenberg_fefferman(n).unwrap();
        let bundle = CurvatureBundle::compute(&ch.chart).unwrap();
        let k = Expr::rational(-1, n as i64 + 2);
        let mut checks = Vec::new();
        checks.push((
            bundle.covariant_derivative(&ch.frame[S], &ch.frame[XI]).unwrap(),
            VectorFieldChart::zero(ch.dim()),
        ));
        for i in 0..2 * n {
            let xi = bundle.covariant_derivative(&ch.frame[horizontal(i)], &ch.frame[XI]).unwrap();
            checks.push((xi, VectorFieldChart::zero(ch.dim())));
        }
        for a in 0..ch.dim() {
            let lhs = bundle.covariant_derivative(&ch.frame[S], &ch.frame[a]).unwrap();
            checks.push((lhs, ch.j_frame(a).scale(&k)));
        }
        for x in box_points(ch.dim(), 20, 21) {
            for (lhs, rhs) in &checks {
                let (l, r) = (field_at(&ch, lhs, &x), field_at(&ch, rhs, &x));
                assert!(l.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-12));
            }
        }
    }
}

#[test]
fn oracle_agrees_on_the_heisenberg_metric() {
    let ch = heisenberg_fefferman(1).unwrap();
    let b = CurvatureBundle::compute(&ch.chart).unwrap().compile::<f64>().unwrap();
    let jet = MetricJet::<f64>::new(&ch.chart).unwrap();
    for x in box_points(4, 10, 31) {
        let sym = b.eval(&x).unwrap();
        let fd = fd_curvature_oracle(&ch.chart, &Point::on_chart(ch.coords(), &x).unwrap()).unwrap();
        assert!(sym.max_abs_diff(&fd) < 1e-5);
        assert!(sym.max_abs_diff(&jet.curvature_at(&x).unwrap()) < 1e-12);
    }
}

fn constant_change(rng: &mut ChaCha8Rng, n: usize) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let lambda = rng.gen_range(0.3..2.0);
    let x: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    // a complex-linear orthogonal map: a product of coordinate rotations in each z_j plane
    // followed by a real rotation mixing z_1 and z_2 when n = 2
    let m = 2 * n;
    let mut b = vec![vec![0.0; m]; m];
    for j in 0..n {
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        b[j][j] = a.cos();
        b[n + j][n + j] = a.cos();
        b[j][n + j] = -a.sin();
        b[n + j][j] = a.sin();
    }
    if n == 2 {
        let c: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = [[c.cos(), -c.sin()], [c.sin(), c.cos()]];
        let mut out = vec![vec![0.0; m]; m];
        for blk in [0, n] {
            for i in 0..n {
                for k in 0..m {
                    out[blk + i][k] = (0..n).map(|l| r[i][l] * b[blk + l][k]).sum();
                }
            }
        }
        b = out;
    }
    (lambda, x, b)
}

fn exact(v: f64) -> Expr {
    Expr::constant(Rational::from_float(v).unwrap())
}

#[test]
fn frame_rescale_identity_and_scaling() {
    let ch = heisenberg_fefferman(1).unwrap();
    let pts = box_points(4, 20, 41);
    let id = vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), Expr::one()]];
    let zero = vec![Expr::zero(); 2];
    let same = frame_rescale(&ch, &Expr::one(), &zero, &id, &pts).unwrap();
    assert_eq!(same.omega, ch.omega);
    assert_eq!(same.theta, ch.theta);
    assert_eq!(same.sigma, ch.sigma);
    let four = frame_rescale(&ch, &Expr::int(2), &zero, &id, &pts).unwrap();
    let (us, res) = verify_conformal(&ch.chart, &four.metric(ch.coords()).unwrap(), &pts).unwrap();
    assert!(res < 1e-12 && us.iter().all(|u| (u - 4.0).abs() < 1e-12));

    assert!(matches!(frame_rescale(&ch, &Expr::int(-1), &zero, &id, &pts), Err(FefError::NonPositiveU { .. })));
    let skew = vec![vec![Expr::one(), Expr::one()], vec![Expr::zero(), Expr::one()]];
    assert!(matches!(frame_rescale(&ch, &Expr::one(), &zero, &skew, &pts), Err(FefError::NotUnitary { .. })));
}

#[test]
fn frame_rescale_is_conformal_for_generic_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for n in [1, 2] {
        let ch = heisenberg_fefferman(n).unwrap();
        let pts = box_points(ch.dim(), 20, 44);
        for _ in 0..10 {
            let (lambda, x, b) = constant_change(&mut rng, n);
            let be: Vec<Vec<Expr>> = b.iter().map(|r| r.iter().map(|&v| exact(v)).collect()).collect();
            let xe: Vec<Expr> = x.iter().map(|&v| exact(v)).collect();
            let fc = frame_rescale(&ch, &exact(lambda), &xe, &be, &pts).unwrap();
            let (us, res) = verify_conformal(&ch.chart, &fc.metric(ch.coords()).unwrap(), &pts).unwrap();
            assert!(res < 1e-9, "residual {res}");
            assert!(us.iter().all(|u| (u - lambda * lambda).abs() < 1e-9));
        }
    }
}

#[test]
fn frame_rescale_with_variable_scale() {
    let ch = heisenberg_fefferman(1).unwrap();
    let pts = box_points(4, 20, 45);
    let lambda = (Expr::var("t") * Expr::rational(1, 2) + Expr::var("x1")).exp();
    let x = vec![Expr::var("y1"), Expr::rational(1, 3)];
    let id = vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), Expr::one()]];
    let fc = frame_rescale(&ch, &lambda, &x, &id, &pts).unwrap();
    let (us, res) = verify_conformal(&ch.chart, &fc.metric(ch.coords()).unwrap(), &pts).unwrap();
    assert!(res < 1e-9);
    for (u, p) in us.iter().zip(&pts) {
        assert!((u - (p[1] + 2.0 * p[2]).exp()).abs() < 1e-9);
    }
}

#[test]
fn verify_conformal_detects_non_conformal_pairs() {
    let ch = heisenberg_fefferman(1).unwrap();
    let pts = box_points(4, 10, 47);
    let (us, res) = verify_conformal(&ch.chart, &ch.chart.scaled(&Expr::int(2)), &pts).unwrap();
    assert!(res == 0.0 && us.iter().all(|&u| u == 2.0));
    let mut bump = vec![vec![Expr::zero(); 4]; 4];
    bump[1][1] = Expr::one();
    let other = ch.chart.plus(&bump).unwrap();
    let (_, res) = verify_conformal(&ch.chart, &other, &pts).unwrap();
    assert!(res > 0.1);
    let flat = feflab::tensor::builtin::euclidean(2).unwrap();
    let zero = flat.scaled(&Expr::var("x0"));
    assert!(matches!(verify_conformal(&zero, &flat, &[vec![0.0, 0.5]]), Err(FefError::DegeneratePoint { .. })));
}

#[test]
fn sigma_xi_table_is_exact() {
    let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
    for n in 1..=6u32 {
        for c in [r(1, 1), r(2, 3), r(-5, 7)] {
            let nn = r(n as i64, 1);
            let want = nn.clone() * c.clone() / (r(2, 1) * (nn.clone() + r(2, 1)));
            let cases =
                [(Base::ProjectiveSpace, -want.clone()), (Base::Torus, r(0, 1)), (Base::Hyperbolic, want.clone())];
            for (base, g) in cases {
                let s = base_scalar(base, n, c.clone());
                let (sigma, gxx) = sigma_xi_from_scalar(s, n);
                assert_eq!(gxx, g);
                assert_eq!(gxx, r(2, 1) * sigma);
            }
        }
    }
    let (_, g) = sigma_xi_from_scalar(3.0f64, 1);
    assert!((g + 0.5).abs() < 1e-15);
}

fn random_cone_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let a: Vec<Complex64> =
        (0..=n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let z = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    cone_point(&a, z)
}

#[test]
fn cone_model_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for n in 1..=3 {
        let k = 1.0 / (n as f64 + 2.0);
        for _ in 0..20 {
            let p = random_cone_point(&mut rng, n);
            assert!(hermitian(&p, &p).norm() < 1e-12);
            let (s, c) = circle_tangents(&p);
            assert!((cone_model_metric(&p, &c, &c).unwrap() + k).abs() < 1e-12);
            assert!((cone_model_metric(&p, &s, &c).unwrap() - k).abs() < 1e-12);
            assert!(cone_model_metric(&p, &s, &s).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn cone_model_errors() {
    let one = Complex64::new(1.0, 0.0);
    let off = vec![one, one * 2.0];
    assert!(matches!(cone_model_metric(&off, &off, &off), Err(FefError::NotOnCone { .. })));
    let p = vec![one, one];
    assert!(matches!(cone_model_metric(&p, &[one, -one], &p), Err(FefError::NotTangent { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cone_metric_ignores_the_radial_direction(seed in any::<u64>(), r in -3.0f64..3.0, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_cone_point(&mut rng, n);
        let (s, c) = circle_tangents(&p);
        let shifted: Vec<Complex64> = c.iter().zip(&p).map(|(v, q)| v + q * r).collect();
        let a = cone_model_metric(&p, &c, &s).unwrap();
        let b = cone_model_metric(&p, &shifted, &s).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        let cc = cone_model_metric(&p, &shifted, &shifted).unwrap();
        prop_assert!((cc - cone_model_metric(&p, &c, &c).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn frame_rescale_gram_identity(seed in any::<u64>(), n in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = heisenberg_fefferman(n).unwrap();
        let (lambda, x, b) = constant_change(&mut rng, n);
        let be: Vec<Vec<Expr>> = b.iter().map(|r| r.iter().map(|&v| exact(v)).collect()).collect();
        let xe: Vec<Expr> = x.iter().map(|&v| exact(v)).collect();
        let fc = frame_rescale(&ch, &exact(lambda), &xe, &be, &[]).unwrap();
        let p = fc.matrix_at(ch.coords(), &vec![0.0; ch.dim()]).unwrap();
        let m = p.rows();
        let form = feflab::linalg::Mat::from_fn(m, m, |i, j| {
            let corner = i + j == m - 1 && (i == 0 || j == 0);
            let middle = i == j && i != 0 && i != m - 1;
            if corner || middle { 1.0 } else { 0.0 }
        });
        let lhs = p.matmul(&form).unwrap().matmul(&p.transpose()).unwrap();
        prop_assert!(lhs.max_abs_diff(&form.scale(&(lambda * lambda))) < 1e-10);
    }
}

//! The verification suites behind `verify` and `groups`.
//!
//! Each suite draws from its own generator seeded by `seed + salt`, so the
//! result of one suite does not depend on which others run.

use feflab::causality::{
    causality_scan, cone_inner, d_case_classify, orbit_field, orbit_field_oracle, CausalClass, DVerdict, OrbitCase,
    OrbitField,
};
use feflab::fefferman::{
    base_scalar, circle_tangents, cone_model_metric, cone_point, frame_rescale, heisenberg_fefferman, horizontal,
    sigma_xi_from_scalar, verify_conformal, Base, FeffermanChart, S, XI,
};
use feflab::groups::{
    gc_element, gc_factor, heisenberg_act, lorentz_form, one_param_matrix, realify, rho_flat, sim_element, Basis,
    CrMap, GroupElement, GroupTag, HeisenbergElement, OneParamCase, OneParamSubgroup,
};
use feflab::linalg::Mat;
use feflab::sym::{Expr, Rational};
use feflab::tensor::{CurvatureBundle, MetricJet, VectorFieldChart};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Check, CliError, Report, Settings};

/// Suite names accepted by `verify`, in run order for `all`.
pub const SUITES: [&str; 5] = ["weyl", "ricci", "frames", "groups", "causality"];

/// Random draws per group check.
pub const GROUP_SAMPLES: usize = 100;
/// Points scanned for the untwisted characteristic field.
pub const LIGHT_SCAN: usize = 10_000;

pub fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(salt))
}

pub fn box_points(r: &mut ChaCha8Rng, d: usize, count: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..d).map(|_| r.gen_range(lo..hi)).collect()).collect()
}

pub fn cvec(r: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect()
}

/// Gram–Schmidt on random columns.
pub fn random_unitary(r: &mut ChaCha8Rng, n: usize) -> Mat<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < n {
        let mut v = cvec(r, n);
        for c in &cols {
            let p: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.iter().map(|x| x / norm).collect());
        }
    }
    Mat::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_orthogonal(r: &mut ChaCha8Rng, n: usize) -> Mat<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        for c in &cols {
            let p: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.iter().map(|x| x / norm).collect());
        }
    }
    Mat::from_fn(n, n, |i, j| cols[j][i])
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Decimal with at most six places and no trailing zeros.
pub fn decimal(v: f64) -> String {
    let s = format!("{:.6}", v.abs());
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if v < 0.0 {
        format!("−{s}")
    } else {
        s.to_string()
    }
}

fn exact(v: f64) -> Result<Expr, CliError> {
    Rational::from_float(v).map(Expr::constant).ok_or_else(|| CliError::Numerical(format!("{v} is not finite")))
}

/// Running maximum that remembers where it was attained.
#[derive(Default)]
struct Worst {
    value: f64,
    at: Option<Vec<f64>>,
}

impl Worst {
    fn see(&mut self, v: f64, at: &[f64]) {
        if !(v <= self.value) || self.at.is_none() {
            self.value = if v.is_nan() { f64::NAN } else { v.max(self.value) };
            self.at = Some(at.to_vec());
        }
    }

    fn check(self, id: String, anchor: &str, tol: f64) -> Check {
        Check::new(id, anchor, self.value, tol).with_witness(self.at)
    }
}

pub fn run(name: &str, s: &Settings) -> Result<Report, CliError> {
    match name {
        "weyl" => weyl(s),
        "ricci" => ricci(s),
        "frames" => frames(s),
        "groups" => groups(s),
        "causality" => causality(s),
        "all" => {
            let mut out = Report::new("all", s);
            for suite in SUITES {
                out.merge(run(suite, s)?);
            }
            Ok(out)
        }
        other => Err(CliError::UnknownSuite(other.into())),
    }
}

fn frame_at(ch: &FeffermanChart, x: &[f64]) -> Result<Vec<Vec<f64>>, CliError> {
    ch.frame.iter().map(|v| Ok(v.eval(ch.coords(), x)?)).collect()
}

pub fn weyl(s: &Settings) -> Result<Report, CliError> {
    let mut rep = Report::new("weyl", s);
    let mut r = rng(s.seed, 1);
    for n in s.dims() {
        let ch = heisenberg_fefferman(n)?;
        let c = CurvatureBundle::compute(&ch.chart)?.compile::<f64>()?;
        let jet = MetricJet::<f64>::new(&ch.chart)?;
        let (mut w, mut agree) = (Worst::default(), Worst::default());
        for x in box_points(&mut r, ch.dim(), s.points.max(1), -1.0, 1.0) {
            let sym = c.eval(&x)?;
            w.see(sym.weyl.max_abs(), &x);
            agree.see(sym.max_abs_diff(&jet.curvature_at(&x)?), &x);
        }
        let anchor = "the Heisenberg Fefferman metric is conformally flat";
        rep.push(w.check(format!("W = 0 (n={n})"), anchor, s.tol_or(1e-9)));
        let anchor = "exact and numeric curvature pipelines agree";
        rep.push(agree.check(format!("W symbolic = numeric (n={n})"), anchor, s.tol_or(1e-9)));
    }
    Ok(rep)
}

pub fn ricci(s: &Settings) -> Result<Report, CliError> {
    let mut rep = Report::new("ricci", s);
    let mut r = rng(s.seed, 2);
    let tol = s.tol_or(1e-9);
    for n in s.dims() {
        let ch = heisenberg_fefferman(n)?;
        let c = CurvatureBundle::compute(&ch.chart)?.compile::<f64>()?;
        let k = 1.0 / (n as f64 + 2.0);
        let want = -2.0 * n as f64 * k * k;
        let mut worst: [Worst; 5] = Default::default();
        for x in box_points(&mut r, ch.dim(), s.points.max(1), -1.0, 1.0) {
            let pc = c.eval(&x)?;
            let f = frame_at(&ch, &x)?;
            let ric = pc.ricci_first_third();
            let rc = |a: usize, b: usize| ric.contract(&[&f[a], &f[b]]);
            let rl = |a: usize, b: usize, c: usize, d: usize| pc.riemann_low.contract(&[&f[a], &f[b], &f[c], &f[d]]);
            worst[0].see(pc.scalar.abs(), &x);
            worst[1].see((rc(S, S) - want).abs(), &x);
            worst[2].see((0..ch.dim()).map(|a| rc(XI, a).abs()).fold(0.0, f64::max), &x);
            let (mut hor, mut lem) = (0.0f64, 0.0f64);
            for i in 0..2 * n {
                for j in 0..2 * n {
                    let (a, b) = (horizontal(i), horizontal(j));
                    hor = hor.max(rc(a, b).abs());
                    let delta = if i == j { -k * k } else { 0.0 };
                    lem = lem.max((rl(S, a, S, b) - delta).abs());
                }
            }
            worst[3].see(hor, &x);
            worst[4].see(lem, &x);
        }
        let [w0, w1, w2, w3, w4] = worst;
        let sq = (n + 2) * (n + 2);
        rep.push(w0.check(format!("S = 0 (n={n})"), "the scalar curvature vanishes", tol));
        let id = format!("R_SS = −{}/{} = {}", 2 * n, sq, decimal(want));
        rep.push(w1.check(id, "Ricci along the circle direction", tol));
        rep.push(w2.check(format!("Ric(ξ,·) = 0 (n={n})"), "ξ is in the Ricci kernel", tol));
        rep.push(w3.check(format!("Ric(X,Y) = 0 on H (n={n})"), "Ricci vanishes on the horizontal frame", tol));
        let id = format!("R(𝒮,X,𝒮,Y) = −δ/{sq} (n={n})");
        rep.push(w4.check(id, "curvature along the circle direction", tol));
    }
    Ok(rep)
}

pub fn frames(s: &Settings) -> Result<Report, CliError> {
    let mut rep = Report::new("frames", s);
    let mut r = rng(s.seed, 3);
    for n in s.dims() {
        connection(&mut rep, &mut r, n, s)?;
        frame_change(&mut rep, &mut r, n, s)?;
    }
    let cone_dims = match s.n {
        Some(n) => vec![n],
        None => vec![1, 2, 3],
    };
    for n in cone_dims {
        cone(&mut rep, &mut r, n, s)?;
    }
    sigma_table(&mut rep);
    Ok(rep)
}

fn connection(rep: &mut Report, r: &mut ChaCha8Rng, n: usize, s: &Settings) -> Result<(), CliError> {
    let ch = heisenberg_fefferman(n)?;
    let b = CurvatureBundle::compute(&ch.chart)?;
    let zero = VectorFieldChart::zero(ch.dim());
    let k = Expr::rational(-1, n as i64 + 2);
    let mut groups: Vec<(String, &str, Vec<(VectorFieldChart, VectorFieldChart)>)> = vec![
        (
            format!("∇_𝒮 ξ = 0 (n={n})"),
            "ξ is parallel along 𝒮",
            vec![(b.covariant_derivative(&ch.frame[S], &ch.frame[XI])?, zero.clone())],
        ),
        (format!("∇_X ξ = 0 (n={n})"), "ξ is parallel along H", Vec::new()),
        (format!("∇_𝒮 A = −JA/{} (n={n})", n + 2), "𝒮 rotates the frame by J", Vec::new()),
    ];
    for i in 0..2 * n {
        groups[1].2.push((b.covariant_derivative(&ch.frame[horizontal(i)], &ch.frame[XI])?, zero.clone()));
    }
    for a in 0..ch.dim() {
        groups[2].2.push((b.covariant_derivative(&ch.frame[S], &ch.frame[a])?, ch.j_frame(a).scale(&k)));
    }
    let pts = box_points(r, ch.dim(), s.points.max(1), -1.0, 1.0);
    for (id, anchor, pairs) in groups {
        let mut w = Worst::default();
        for x in &pts {
            for (lhs, rhs) in &pairs {
                w.see(max_diff(&lhs.eval(ch.coords(), x)?, &rhs.eval(ch.coords(), x)?), x);
            }
        }
        rep.push(w.check(id, anchor, s.tol_or(1e-9)));
    }
    Ok(())
}

fn frame_change(rep: &mut Report, r: &mut ChaCha8Rng, n: usize, s: &Settings) -> Result<(), CliError> {
    let ch = heisenberg_fefferman(n)?;
    let (mut metric, mut recovered, mut gram) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let pts = box_points(r, ch.dim(), 5, -1.0, 1.0);
        let u: f64 = r.gen_range(0.1..4.0);
        let x: Vec<f64> = (0..2 * n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let bu = random_unitary(r, n);
        let br = realify(&bu);
        let be = (0..2 * n)
            .map(|i| (0..2 * n).map(|j| exact(br[(i, j)])).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let xe = x.iter().map(|&v| exact(v)).collect::<Result<Vec<_>, _>>()?;
        let lambda = u.sqrt();
        let fc = frame_rescale(&ch, &exact(lambda)?, &xe, &be, &pts)?;
        let (us, res) = verify_conformal(&ch.chart, &fc.metric(ch.coords())?, &pts)?;
        metric = us.iter().fold(metric.max(res), |m, v| m.max((v - lambda * lambda).abs()));

        let p = gc_element(u, &x, &bu)?;
        let (k, q) = gc_factor(&p)?;
        recovered = recovered.max((k * k - u).abs());
        let form = lorentz_form::<f64>(2 * n, Basis::Lightcone).matrix.real_part();
        let qr = q.real_part();
        let g =
            qr.matmul(&form).and_then(|m| m.matmul(&qr.transpose())).map_err(|e| CliError::Numerical(e.to_string()))?;
        gram = gram.max(g.max_abs_diff(&form));
    }
    let anchor = "coframe changes by the structure group give conformal metrics";
    rep.push(Check::new(format!("g' = u·g for constant (u,x,B) (n={n})"), anchor, metric, s.tol_or(1e-9)));
    rep.push(Check::new(
        format!("gc_factor recovers u (n={n})"),
        "factorization of the structure group",
        recovered,
        s.tol_or(1e-12),
    ));
    rep.push(Check::new(
        format!("Q·I·Qᵀ = I (n={n})"),
        "the similarity factor preserves the form",
        gram,
        s.tol_or(1e-10),
    ));
    Ok(())
}

fn cone(rep: &mut Report, r: &mut ChaCha8Rng, n: usize, s: &Settings) -> Result<(), CliError> {
    let k = 1.0 / (n as f64 + 2.0);
    let mut w = [0.0f64; 3];
    for _ in 0..s.points.max(1) {
        let p = cone_point(&cvec(r, n + 1), Complex64::from_polar(1.0, r.gen_range(0.0..std::f64::consts::TAU)));
        let (sd, cd) = circle_tangents(&p);
        w[0] = w[0].max((cone_model_metric(&p, &cd, &cd)? + k).abs());
        w[1] = w[1].max((cone_model_metric(&p, &sd, &cd)? - k).abs());
        w[2] = w[2].max(cone_model_metric(&p, &sd, &sd)?.abs());
    }
    let tol = s.tol_or(1e-10);
    let anchor = "circle directions in the cone model";
    rep.push(Check::new(format!("ĝ(ξ,ξ) = −1/{} (n={n})", n + 2), anchor, w[0], tol));
    rep.push(Check::new(format!("ĝ(𝒮,ξ) = 1/{} (n={n})", n + 2), anchor, w[1], tol));
    rep.push(Check::new(format!("ĝ(𝒮,𝒮) = 0 (n={n})"), anchor, w[2], tol));
    Ok(())
}

fn sigma_table(rep: &mut Report) {
    let q = |p: i64, d: i64| Rational::new(p.into(), d.into());
    let mut ok = true;
    for n in 1..=6u32 {
        for c in [q(1, 1), q(3, 2), q(-5, 7)] {
            let nn = q(n as i64, 1);
            let v = nn.clone() * c.clone() / (q(2, 1) * (nn + q(2, 1)));
            for (base, want) in [(Base::ProjectiveSpace, -v.clone()), (Base::Torus, q(0, 1)), (Base::Hyperbolic, v)] {
                let (_, got) = sigma_xi_from_scalar(base_scalar(base, n, c.clone()), n);
                ok &= got == want;
            }
        }
    }
    rep.push(Check::flag("σ(ξ) = ∓nc/(2(n+2)) exact", "g(ξ,ξ) from the base scalar curvature", ok));
}

fn random_heis(r: &mut ChaCha8Rng, n: usize) -> HeisenbergElement<f64> {
    HeisenbergElement::new(r.gen_range(-2.0..2.0), cvec(r, n).iter().map(|z| z * 2.0).collect())
}

fn subgroup(r: &mut ChaCha8Rng, case: OneParamCase, n: usize) -> Result<OneParamSubgroup<f64>, CliError> {
    let len = match case {
        OneParamCase::NilTranslation => n - 1,
        OneParamCase::Torus => r.gen_range(1..=n + 1),
        _ => n,
    };
    let params = (0..len).map(|_| r.gen_range(0.5..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    Ok(OneParamSubgroup::new(case, r.gen_range(0..2), n, params)?)
}

/// Largest residual, or at least 1 when some element was rejected.
struct Members(f64);

impl Members {
    fn see(&mut self, e: &GroupElement<f64>) -> Result<(), CliError> {
        let m = e.membership()?;
        self.0 = self.0.max(if m.member { m.residual } else { m.residual.max(1.0) });
        Ok(())
    }
}

pub fn groups(s: &Settings) -> Result<Report, CliError> {
    let mut rep = Report::new("groups", s);
    let mut r = rng(s.seed, 4);
    let tol = s.tol_or(1e-10);
    for n in s.dims() {
        let m = 2 * n;
        let mut mem: [Members; 5] = [Members(0.0), Members(0.0), Members(0.0), Members(0.0), Members(0.0)];
        let cases =
            [OneParamCase::NilParabolic, OneParamCase::NilTranslation, OneParamCase::Hyperbolic, OneParamCase::Torus];
        let (mut hom, mut one_mem) = (0.0f64, Members(0.0));
        for k in 0..GROUP_SAMPLES {
            let x: Vec<f64> = (0..m).map(|_| r.gen_range(-2.0..2.0)).collect();
            let e = sim_element(r.gen_range(0.2..3.0), &x, &random_orthogonal(&mut r, m))?;
            mem[0].see(&e)?;
            mem[1].see(&GroupElement {
                entries: e.entries.clone(),
                tag: GroupTag::Orthogonal { m, basis: Basis::Lightcone },
            })?;
            let c = Complex64::new(r.gen_range(0.2..3.0), 0.0);
            mem[2].see(&GroupElement { entries: e.entries.scale(&c), tag: GroupTag::GReal { m } })?;
            mem[3].see(&gc_element(r.gen_range(0.1..5.0), &x, &random_unitary(&mut r, n))?)?;

            let sub = subgroup(&mut r, cases[k % 4], n)?;
            let (t1, t2) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let a = one_param_matrix(&sub, t1)?;
            let ab = a.mul(&one_param_matrix(&sub, t2)?)?;
            hom = hom.max(ab.entries.max_norm_diff(&one_param_matrix(&sub, t1 + t2)?.entries));
            one_mem.see(&a)?;
            let u = GroupElement { entries: a.entries.clone(), tag: GroupTag::Unitary { n, basis: Basis::Lightcone } };
            if sub.case != OneParamCase::Torus {
                mem[4].see(&u)?;
            }
        }
        let names = [
            ("Sim", "the similarity group"),
            ("O(2n+1,1) lightcone", "Sim lies in the Lorentz group"),
            ("G_R", "positive multiples of Sim"),
            ("G_C", "the complex structure group"),
            ("U(n+1,1)", "one-parameter subgroups are unitary"),
        ];
        for ((name, anchor), mm) in names.iter().zip(mem) {
            rep.push(Check::new(format!("member {name} (n={n})"), *anchor, mm.0, tol));
        }
        rep.push(Check::new(format!("one-parameter homomorphism (n={n})"), "t ↦ exp(tX) is a homomorphism", hom, tol));
        rep.push(Check::new(format!("one-parameter membership (n={n})"), "values lie in U(n+1,1)", one_mem.0, tol));

        let (mut assoc, mut action) = (0.0f64, 0.0f64);
        for _ in 0..GROUP_SAMPLES {
            let (g, h, p) = (random_heis(&mut r, n), random_heis(&mut r, n), random_heis(&mut r, n));
            assoc = assoc.max(g.mul(&h)?.mul(&p)?.max_diff(&g.mul(&h.mul(&p)?)?));
            let f1 = CrMap { g, lambda: r.gen_range(0.3..2.0), a: random_unitary(&mut r, n) };
            let f2 = CrMap { g: h, lambda: r.gen_range(0.3..2.0), a: random_unitary(&mut r, n) };
            let (t1, w1) = f2.apply(p.a, &p.z)?;
            let (t2, w2) = f1.apply(t1, &w1)?;
            let (t3, w3) = f1.compose(&f2)?.apply(p.a, &p.z)?;
            action = w2.iter().zip(&w3).fold(action.max((t2 - t3).abs()), |m, (a, b)| m.max((a - b).norm()));
            let (ta, wa) = heisenberg_act(&f1.g, 1.0, &Mat::identity(n), p.a, &p.z)?;
            action = action.max(f1.g.mul(&p)?.max_diff(&HeisenbergElement::new(ta, wa)));
        }
        rep.push(Check::new(
            format!("heisenberg associativity (n={n})"),
            "the Heisenberg group law",
            assoc,
            s.tol_or(1e-12),
        ));
        rep.push(Check::new(
            format!("CR action compatibility (n={n})"),
            "the similarity action on the Heisenberg group",
            action,
            s.tol_or(1e-12),
        ));
    }

    let (mut hom, mut lin) = (0.0f64, Members(0.0));
    for _ in 0..GROUP_SAMPLES {
        let (g, h) = (random_heis(&mut r, 1), random_heis(&mut r, 1));
        hom = hom.max(rho_flat(&g)?.mul(&rho_flat(&h)?)?.max_diff(&rho_flat(&g.mul(&h)?)?));
        let m = rho_flat(&g)?.m.to_complex();
        let e = GroupElement { entries: m, tag: GroupTag::Orthogonal { m: 1, basis: Basis::Lightcone } };
        lin.see(&e)?;
    }
    rep.push(Check::new("ρ homomorphism", "the flat affine representation", hom, s.tol_or(1e-12)));
    rep.push(Check::new("ρ linear part in O(2,1)", "the flat affine representation", lin.0, s.tol_or(1e-12)));
    Ok(rep)
}

/// Signs `(positive, negative, zero)` of the torus field length at random cone
/// points with some `z_i ≠ 0`, `i < a.len()`, and one point of each sign.
pub fn torus_signs(
    r: &mut ChaCha8Rng,
    case: OrbitCase,
    a: &[f64],
    n: usize,
    samples: usize,
) -> Result<([bool; 3], [Option<Vec<Complex64>>; 3]), CliError> {
    let k = a.len();
    let mut seen = [false; 3];
    let mut wit: [Option<Vec<Complex64>>; 3] = Default::default();
    for i in 0..samples {
        let mut z = cvec(r, n + 1);
        // sparse supports reach strata where only some weights matter
        if i % 2 == 1 {
            let keep = r.gen_range(0..k);
            for (j, c) in z.iter_mut().enumerate() {
                if j != keep && r.gen_bool(0.7) {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
        }
        if z[..k].iter().all(|c| c.norm() == 0.0) {
            continue;
        }
        let v = cone_point(&z, Complex64::new(1.0, 0.0));
        let q = cone_inner(case, a, &v)?;
        let slot = if q > 1e-12 {
            0
        } else if q < -1e-12 {
            1
        } else {
            2
        };
        seen[slot] = true;
        wit[slot].get_or_insert(v);
    }
    Ok((seen, wit))
}

/// The verdict implied by sampled signs.
pub fn sampled_verdict(a: &[f64], seen: [bool; 3]) -> DVerdict {
    let l = a.iter().filter(|&&x| x == -2.0).count();
    match seen {
        [true, false, false] => DVerdict::SpacelikeOffSphere,
        [false, _, _] => DVerdict::TimelikeOffSphere(l),
        [true, false, true] => DVerdict::SemidefiniteOffSphere(l),
        [true, true, _] => DVerdict::Mixed,
    }
}

pub fn causality(s: &Settings) -> Result<Report, CliError> {
    let mut rep = Report::new("causality", s);
    let mut r = rng(s.seed, 5);
    for n in s.dims() {
        let ch = heisenberg_fefferman(n)?;
        let o = OrbitField::new(OrbitCase::Nil1, 0, vec![0.0; n], n)?;
        let scan = causality_scan(&ch, &o, &box_points(&mut r, ch.dim(), LIGHT_SCAN, -1.0, 1.0))?;
        let light = scan.uniform() == Some(CausalClass::Lightlike);
        let witness = scan.witnesses.iter().find(|(c, _)| **c != CausalClass::Lightlike).map(|(_, w)| w.clone());
        rep.push(
            Check::flag(format!("Nil-1 a=0 δ=0 lightlike (n={n})"), "the characteristic field is null", light)
                .with_witness(witness),
        );

        let mut iff = true;
        for k in 0..20 {
            let delta = (k % 2) as u8;
            let a: Vec<f64> = (0..n).map(|_| if r.gen_bool(0.5) { 0.0 } else { r.gen_range(-2.0..2.0) }).collect();
            let o = OrbitField::new(OrbitCase::Nil1, delta, a.clone(), n)?;
            let scan = causality_scan(&ch, &o, &box_points(&mut r, ch.dim(), 500, -1.0, 1.0))?;
            let expect = delta == 0 && a.iter().all(|&v| v == 0.0);
            let witnessed = scan.witnesses.keys().any(|c| *c != CausalClass::Lightlike);
            iff &= witnessed != expect;
        }
        rep.push(Check::flag(
            format!("Nil-1 lightlike iff a=0 and δ=0 (n={n})"),
            "only the untwisted characteristic field is null",
            iff,
        ));

        let mut w = Worst::default();
        for case in [OrbitCase::Nil1, OrbitCase::Nil2, OrbitCase::Hyp3] {
            let len = if case == OrbitCase::Nil2 { n - 1 } else { n };
            let a: Vec<f64> = (0..len).map(|_| r.gen_range(-2.0..2.0)).collect();
            let o = OrbitField::new(case, (r.gen_bool(0.5)) as u8, a, n)?;
            let (field, _) = orbit_field(&o)?;
            let sub = o.subgroup()?;
            for x in box_points(&mut r, ch.dim(), s.points.max(1), -1.0, 1.0) {
                w.see(max_diff(&field.eval(ch.coords(), &x)?, &orbit_field_oracle(&sub, &x)?), &x);
            }
        }
        rep.push(w.check(
            format!("orbit fields match flows (n={n})"),
            "generators of the one-parameter actions",
            s.tol_or(1e-6),
        ));
    }

    let mut agree = true;
    for k in 0..50 {
        let n = 1 + k % 3;
        let len = r.gen_range(1..=n + 1);
        let a: Vec<f64> = (0..len)
            .map(|_| match r.gen_range(0..6) {
                0 => -2.0,
                1 => r.gen_range(-4.0..-2.0),
                2 | 3 => r.gen_range(-2.0..0.0),
                _ => r.gen_range(0.0..4.0),
            })
            .map(|v: f64| if v == 0.0 { 1.0 } else { v })
            .collect();
        let (seen, _) = torus_signs(&mut r, OrbitCase::TorusD, &a, n, 400)?;
        agree &= d_case_classify(&a)? == sampled_verdict(&a, seen);
    }
    rep.push(Check::flag("torus-d verdicts match cone sampling", "sign regions of the twisted torus field", agree));
    Ok(rep)
}

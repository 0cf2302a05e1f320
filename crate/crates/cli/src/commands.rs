//! The `curvature` and `causality` commands.

use feflab::causality::{
    causality_scan, d_case_classify, orbit_field, orbit_field_oracle, CausalClass, DVerdict, OrbitCase, OrbitField,
};
use feflab::fefferman::heisenberg_fefferman;
use feflab::sym::Point;
use feflab::tensor::{builtin, fd_curvature_oracle, CurvatureBundle, MetricChart, MetricJet, WeylWarning};
use serde_json::json;

use crate::metric_file::parse_metric;
use crate::suites::{box_points, rng, sampled_verdict, torus_signs};
use crate::{Check, CliError, Report, Settings};

/// Sample box for `curvature`; positive so polar charts stay off their axis.
pub const CURVATURE_BOX: (f64, f64) = (0.2, 1.2);
/// Tolerance of the finite-difference comparison. `--tol` does not change it.
pub const FD_TOL: f64 = 1e-5;

/// Builtin names accepted by `--builtin`.
pub fn builtin_names() -> Vec<&'static str> {
    let mut v = vec!["heisenberg-fefferman"];
    v.extend(builtin::NAMES);
    v
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricSource {
    Builtin { name: String, n: usize, dim: usize },
    File(std::path::PathBuf),
}

/// What a builtin is known to satisfy.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Expect {
    WeylFlat,
    Flat,
    Scalar(f64),
    Nothing,
}

fn load(src: &MetricSource) -> Result<(String, MetricChart, Expect), CliError> {
    match src {
        MetricSource::File(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), parse_metric(&text)?, Expect::Nothing))
        }
        MetricSource::Builtin { name, n, dim } => {
            if name == "heisenberg-fefferman" {
                return Ok((format!("{name} n={n}"), heisenberg_fefferman(*n)?.chart, Expect::WeylFlat));
            }
            let m = builtin::by_name(name, *dim).ok_or_else(|| {
                CliError::Usage(format!("unknown builtin `{name}` (known: {})", builtin_names().join(", ")))
            })??;
            let expect = match name.as_str() {
                "euclidean" | "minkowski" => Expect::Flat,
                "sphere2" => Expect::Scalar(2.0),
                "conformal-euclidean4" => Expect::WeylFlat,
                _ => Expect::Nothing,
            };
            let label = if expect == Expect::Flat { format!("{name} dim={dim}") } else { name.clone() };
            Ok((label, m, expect))
        }
    }
}

pub fn curvature(src: &MetricSource, s: &Settings) -> Result<Report, CliError> {
    let (label, m, expect) = load(src)?;
    let mut rep = Report::new("curvature", s);
    let mut r = rng(s.seed, 10);
    let pts = box_points(&mut r, m.dim(), s.points.max(1), CURVATURE_BOX.0, CURVATURE_BOX.1);
    let sig = m.check_at(&pts)?;
    let c = CurvatureBundle::compute(&m)?.compile::<f64>()?;
    let jet = MetricJet::<f64>::new(&m)?;
    let tol = s.tol_or(1e-9);

    let mut fd = (0.0f64, None);
    let mut jet_diff = (0.0f64, None);
    let mut sym_res = (0.0f64, None);
    let mut trace = (0.0f64, None);
    let (mut riem, mut ric, mut weyl) = (0.0f64, 0.0f64, 0.0f64);
    let (mut smin, mut smax) = (f64::INFINITY, f64::NEG_INFINITY);
    let track = |slot: &mut (f64, Option<Vec<f64>>), v: f64, x: &[f64]| {
        if !(v <= slot.0) || slot.1.is_none() {
            *slot = (if v.is_nan() { f64::NAN } else { v.max(slot.0) }, Some(x.to_vec()));
        }
    };
    let weyl_defined = m.dim() >= 3;
    for x in &pts {
        let pc = c.eval(x)?;
        let p = Point::on_chart(m.coords(), x)?;
        track(&mut fd, pc.max_abs_diff(&fd_curvature_oracle(&m, &p)?), x);
        track(&mut jet_diff, pc.max_abs_diff(&jet.curvature_at(x)?), x);
        track(&mut sym_res, pc.symmetry_residual(), x);
        if weyl_defined {
            track(&mut trace, pc.weyl_trace().max_abs(), x);
            weyl = weyl.max(pc.weyl.max_abs());
        }
        riem = riem.max(pc.riemann_low.max_abs());
        ric = ric.max(pc.ricci.max_abs());
        smin = smin.min(pc.scalar);
        smax = smax.max(pc.scalar);
    }
    let chk = |id: &str, anchor: &str, (v, w): (f64, Option<Vec<f64>>), tol: f64| {
        Check::new(id, anchor, v, tol).with_witness(w)
    };
    rep.push(chk("symbolic = finite differences", "independent curvature oracle", fd, FD_TOL));
    rep.push(chk("symbolic = numeric jet", "exact and numeric pipelines agree", jet_diff, tol));
    rep.push(chk("Riemann symmetries", "pair symmetry and the first Bianchi identity", sym_res, tol));
    if weyl_defined {
        rep.push(chk("Weyl trace-free", "the Weyl tensor has no traces", trace, tol));
    }
    match expect {
        Expect::WeylFlat => rep.push(Check::new("W = 0", "conformally flat by construction", weyl, tol)),
        Expect::Flat => rep.push(Check::new("Riemann = 0", "flat metric", riem, tol)),
        Expect::Scalar(k) => {
            let res = (smin - k).abs().max((smax - k).abs());
            rep.push(Check::new(format!("scalar = {k}"), "constant curvature", res, tol));
        }
        Expect::Nothing => {}
    }

    rep.value("metric", label);
    rep.value("coordinates", m.coords().join(","));
    rep.value("signature", json!([sig.positive, sig.negative]));
    rep.value("max |Riemann|", riem);
    rep.value("max |Ric|", ric);
    rep.value("scalar min", smin);
    rep.value("scalar max", smax);
    if weyl_defined {
        rep.value("max |W|", weyl);
    } else {
        let note = match c.eval(&pts[0])?.weyl_warning {
            Some(WeylWarning::Undefined) | None => "undefined below dimension 3",
            Some(WeylWarning::DimensionThree) => "identically zero in dimension 3",
        };
        rep.value("W", note);
    }
    Ok(rep)
}

pub fn parse_case(name: &str) -> Result<OrbitCase, CliError> {
    Ok(match name {
        "nil-1" => OrbitCase::Nil1,
        "nil-2" => OrbitCase::Nil2,
        "hyp-3" => OrbitCase::Hyp3,
        "torus-c" => OrbitCase::TorusC,
        "torus-d" => OrbitCase::TorusD,
        other => {
            return Err(CliError::Usage(format!(
                "unknown case `{other}` (expected nil-1, nil-2, hyp-3, torus-c or torus-d)"
            )))
        }
    })
}

fn class_name(c: CausalClass) -> &'static str {
    match c {
        CausalClass::Spacelike => "spacelike",
        CausalClass::Lightlike => "lightlike",
        CausalClass::Timelike => "timelike",
        CausalClass::Zero => "zero",
    }
}

/// Sphere `z_i = 0` for the listed number of vanishing coordinates, as `S^d`.
fn sphere(n: usize, vanishing: usize) -> String {
    if vanishing == n + 1 {
        "∅".into()
    } else {
        format!("S^{}", 2 * (n + 1 - vanishing) - 1)
    }
}

/// `causality`: scans orbit fields on the Heisenberg chart or classifies the
/// torus cases on the cone. `a = None` means all weights zero (chart cases).
pub fn causality(case: OrbitCase, a: Option<Vec<f64>>, delta: u8, n: usize, s: &Settings) -> Result<Report, CliError> {
    let mut rep = Report::new("causality", s);
    let mut r = rng(s.seed, 20);
    rep.value("case", format!("{case:?}"));
    rep.value("n", n);
    match case {
        OrbitCase::TorusC | OrbitCase::TorusD => {
            if delta != 0 {
                return Err(CliError::Usage("--delta applies to the chart cases only".into()));
            }
            let a = a.ok_or_else(|| CliError::Usage("torus cases need --a".into()))?;
            if a.is_empty() || a.len() > n + 1 || a.iter().any(|v| *v == 0.0 || !v.is_finite()) {
                return Err(CliError::Usage(format!("need 1..={} finite nonzero weights, got {a:?}", n + 1)));
            }
            let k = a.len();
            let (seen, wit) = torus_signs(&mut r, case, &a, n, s.points.max(1))?;
            let fixed = sphere(n, k);
            let verdict = if case == OrbitCase::TorusC {
                rep.push(Check::flag(
                    "sampled signs match",
                    "the torus field is spacelike off its zero set",
                    seen == [true, false, false],
                ));
                if k == n + 1 {
                    "spacelike everywhere".to_string()
                } else {
                    format!("spacelike off the fixed sphere {fixed}")
                }
            } else {
                let v = d_case_classify(&a)?;
                rep.push(Check::flag(
                    "sampled signs match",
                    "sign regions of the twisted torus field",
                    sampled_verdict(&a, seen) == v,
                ));
                match v {
                    DVerdict::SpacelikeOffSphere => format!("spacelike off {fixed}"),
                    DVerdict::TimelikeOffSphere(l) => format!("timelike off {}", sphere(n, k - l)),
                    DVerdict::SemidefiniteOffSphere(l) => {
                        format!("spacelike off {}, lightlike on it away from {fixed}", sphere(n, k - l))
                    }
                    DVerdict::Mixed => "mixed".to_string(),
                }
            };
            rep.value("verdict", verdict);
            for (slot, w) in wit.iter().enumerate() {
                if let Some(v) = w {
                    let name = ["spacelike", "timelike", "lightlike"][slot];
                    let flat: Vec<f64> = v.iter().flat_map(|c| [c.re, c.im]).collect();
                    rep.value(format!("witness {name}"), json!(flat));
                }
            }
        }
        _ => {
            let len = if case == OrbitCase::Nil2 { n - 1 } else { n };
            let a = a.unwrap_or_else(|| vec![0.0; len]);
            let o = OrbitField::new(case, delta, a, n)?;
            let ch = heisenberg_fefferman(n)?;
            let pts = box_points(&mut r, ch.dim(), s.points.max(1), -1.0, 1.0);
            let (field, _) = orbit_field(&o)?;
            let sub = o.subgroup()?;
            let mut worst = (0.0f64, None);
            for x in &pts {
                let f = field.eval(ch.coords(), x)?;
                let g = orbit_field_oracle(&sub, x)?;
                let d = f.iter().zip(&g).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
                if !(d <= worst.0) || worst.1.is_none() {
                    worst = (d.max(worst.0), Some(x.clone()));
                }
            }
            let c = Check::new(
                "orbit field matches flow",
                "generator of the one-parameter action",
                worst.0,
                s.tol_or(1e-6),
            );
            rep.push(c.with_witness(worst.1));

            let scan = causality_scan(&ch, &o, &pts)?;
            let classes: Vec<&str> = scan.counts.keys().map(|c| class_name(*c)).collect();
            let verdict = match scan.uniform() {
                Some(c) => format!("{} everywhere", class_name(c)),
                None => format!("mixed ({})", classes.join(", ")),
            };
            rep.value("verdict", verdict);
            rep.value("delta", delta);
            rep.value("a", json!(o.params));
            for (c, k) in &scan.counts {
                rep.value(format!("count {}", class_name(*c)), *k);
            }
            for (c, w) in &scan.witnesses {
                rep.value(format!("witness {}", class_name(*c)), json!(w));
            }
        }
    }
    Ok(rep)
}

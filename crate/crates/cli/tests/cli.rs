use std::process::Command;

use feflab_cli::commands::{causality, curvature, parse_case, MetricSource};
use feflab_cli::metric_file::parse_metric;
use feflab_cli::suites::{self, decimal};
use feflab_cli::{Check, CliError, Report, Settings, Status};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_feflab"));
    c.env_remove("FEFLAB_SEED");
    c
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn records(stdout: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn value<'a>(recs: &'a [Value], id: &str) -> &'a Value {
    &recs.iter().find(|r| r["record"] == "value" && r["id"] == id).unwrap()["value"]
}

#[test]
fn metric_file_format() {
    let m = parse_metric("x, y\n# comment\n0 0 1\n\n0 1 x/2\n1 1 exp(y)\n").unwrap();
    assert_eq!(m.coords(), ["x", "y"]);
    let g = m.eval(&[1.0, 0.0]).unwrap();
    assert_eq!((g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]), (1.0, 0.5, 0.5, 1.0));
    let sparse = parse_metric("a,b,c\n1 1 2\n").unwrap();
    assert!(sparse.component(0, 0).is_zero() && sparse.component(0, 2).is_zero());

    let bad = [
        "",
        "x,,y\n",
        "x,y\n1 0 1\n",
        "x,y\n0 2 1\n",
        "x,y\n0 0\n",
        "x,y\n0 0 1\n0 0 2\n",
        "x,y\n0 0 z\n",
        "x,y\n0 0 (x\n",
        "x,y\nzero 0 1\n",
    ];
    for b in bad {
        assert!(matches!(parse_metric(b), Err(CliError::Parse(_))), "{b:?}");
    }
}

#[test]
fn report_records() {
    let s = Settings::default();
    let mut r = Report::new("t", &s);
    r.push(Check::new("b", "", 1e-12, 1e-9));
    r.push(Check::new("a", "", f64::NAN, 1e-9).with_witness(Some(vec![1.0])));
    r.value("v", 3);
    let recs = records(r.to_json_lines().as_bytes());
    assert_eq!(recs.len(), 4);
    assert_eq!((recs[0]["id"].as_str(), recs[1]["id"].as_str()), (Some("a"), Some("b")));
    assert_eq!(recs[0]["residual"], f64::MAX);
    assert_eq!(recs[0]["witness"], serde_json::json!([1.0]));
    assert_eq!(recs[1]["witness"], Value::Null);
    assert_eq!(recs[3]["record"], "summary");
    assert_eq!((recs[3]["failed"].as_u64(), recs[3]["status"].as_str()), (Some(1), Some("fail")));
    assert!(!r.passed());
    assert!(r.to_table().contains("FAIL"));
    assert_eq!(Check::flag("f", "", true).status, Status::Pass);
    assert_eq!((decimal(-0.25), decimal(-2.0 / 9.0), decimal(3.0)), ("−0.25".into(), "−0.222222".into(), "3".into()));
}

#[test]
#[should_panic(expected = "duplicate")]
fn duplicate_ids_are_rejected() {
    let mut r = Report::new("t", &Settings::default());
    r.push(Check::flag("x", "", true));
    r.push(Check::flag("x", "", true));
}

#[test]
fn library_commands() {
    let s = Settings::default();
    let src = MetricSource::Builtin { name: "heisenberg-fefferman".into(), n: 1, dim: 4 };
    let rep = curvature(&src, &s).unwrap();
    assert!(rep.passed());
    assert!(rep.check("W = 0").unwrap().residual < 1e-9);

    let rep = curvature(&MetricSource::File(fixture("sphere2.txt").into()), &s).unwrap();
    assert!(rep.passed());
    for id in ["scalar min", "scalar max"] {
        assert!((rep.get_value(id).unwrap().as_f64().unwrap() - 2.0).abs() < 1e-9);
    }

    let rep = suites::run("ricci", &Settings { n: Some(2), ..s.clone() }).unwrap();
    assert_eq!(rep.check("R_SS = −4/16 = −0.25").unwrap().status, Status::Pass);
    assert!(matches!(suites::run("bogus", &s), Err(CliError::UnknownSuite(_))));

    let rep = causality(parse_case("nil-1").unwrap(), Some(vec![0.0]), 0, 1, &s).unwrap();
    assert_eq!(rep.get_value("verdict").unwrap(), "lightlike everywhere");
    let rep = causality(parse_case("nil-1").unwrap(), None, 1, 1, &s).unwrap();
    assert_ne!(rep.get_value("verdict").unwrap(), "lightlike everywhere");
    let rep = causality(parse_case("torus-d").unwrap(), Some(vec![1.0, -1.0]), 0, 1, &s).unwrap();
    assert_eq!(rep.get_value("verdict").unwrap(), "mixed");
    let rep = causality(parse_case("torus-d").unwrap(), Some(vec![-1.0, -2.0]), 0, 1, &s).unwrap();
    assert_eq!(rep.get_value("verdict").unwrap(), "timelike off S^1");
    let rep = causality(parse_case("torus-c").unwrap(), Some(vec![2.0, 3.0]), 0, 3, &s).unwrap();
    assert_eq!(rep.get_value("verdict").unwrap(), "spacelike off the fixed sphere S^3");
    assert!(rep.passed());

    let torus = parse_case("torus-c").unwrap();
    for bad in [Some(vec![0.0]), Some(vec![1.0; 3]), None] {
        assert!(matches!(causality(torus, bad, 0, 1, &s), Err(CliError::Usage(_))));
    }
    assert!(matches!(causality(torus, Some(vec![1.0]), 1, 1, &s), Err(CliError::Usage(_))));
    assert!(matches!(causality(parse_case("nil-2").unwrap(), Some(vec![1.0]), 0, 1, &s), Err(CliError::Usage(_))));
    assert!(parse_case("nil-3").is_err());
}

#[test]
fn curvature_command() {
    let out = bin().args(["curvature", "--builtin", "heisenberg-fefferman", "--n", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out.stdout);
    let w = recs.iter().find(|r| r["id"] == "W = 0").unwrap();
    assert_eq!(w["status"], "pass");
    assert!(w["residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(recs.last().unwrap()["record"], "summary");

    let out = bin().args(["curvature", "--builtin", "minkowski", "--dim", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out.stdout);
    for id in ["max |Riemann|", "max |Ric|", "max |W|", "scalar max", "scalar min"] {
        assert_eq!(value(&recs, id).as_f64(), Some(0.0), "{id}");
    }

    let out = bin().args(["curvature", "--metric-file", &fixture("sphere2.txt"), "--human"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("scalar max") && text.contains("passed"));
}

#[test]
fn verify_and_groups_commands() {
    let out = bin().args(["verify", "all", "--seed", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out.stdout);
    let ids: Vec<&str> = recs.iter().filter(|r| r["record"] == "check").map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
    assert!(recs.iter().all(|r| r["record"] != "check" || r["status"] == "pass"));

    let out = bin().args(["verify", "ricci", "--n", "2"]).output().unwrap();
    assert!(records(&out.stdout).iter().any(|r| r["id"] == "R_SS = −4/16 = −0.25"));

    let out = bin().args(["groups"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    for r in records(&out.stdout).iter().filter(|r| r["record"] == "check") {
        assert!(r["residual"].as_f64().unwrap() < 1e-10, "{r}");
    }
}

#[test]
fn causality_command() {
    let run = |args: &[&str]| {
        let out = bin().arg("causality").args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        value(&records(&out.stdout), "verdict").as_str().unwrap().to_string()
    };
    assert_eq!(run(&["--case", "nil-1", "--a", "0", "--delta", "0", "--n", "1"]), "lightlike everywhere");
    assert_eq!(run(&["--case", "torus-d", "--a", "1,-1"]), "mixed");
    assert!(run(&["--case", "torus-c", "--a", "2,3", "--n", "3"]).starts_with("spacelike off"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(code(&["verify", "nope"]), Some(2));
    assert_eq!(code(&["causality", "--case", "bogus"]), Some(2));
    assert_eq!(code(&["curvature"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["verify", "weyl", "--n", "0"]), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let singular = dir.path().join("singular.txt");
    std::fs::write(&singular, "x,y\n0 0 0\n1 1 1\n").unwrap();
    assert_eq!(code(&["curvature", "--metric-file", singular.to_str().unwrap()]), Some(3));
    let garbled = dir.path().join("garbled.txt");
    std::fs::write(&garbled, "x,y\n0 0 exp(x\n").unwrap();
    assert_eq!(code(&["curvature", "--metric-file", garbled.to_str().unwrap()]), Some(2));
    assert_eq!(code(&["curvature", "--builtin", "generic-lorentz4", "--tol", "1e-30"]), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    for p in [&a, &b] {
        let out = bin().args(["verify", "all", "--out", p.to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ra.is_empty());
    assert_eq!(ra, rb);

    let with_env = bin().args(["groups"]).env("FEFLAB_SEED", "9").output().unwrap().stdout;
    let with_flag = bin().args(["groups", "--seed", "9"]).output().unwrap().stdout;
    let default = bin().args(["groups"]).output().unwrap().stdout;
    assert_eq!(with_env, with_flag);
    assert_ne!(with_env, default);
    let recs = records(&default);
    assert_eq!(recs.last().unwrap()["seed"], 42);
}

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use jordan_core::fixture::{serialize_fixture, Fixture};
use jordan_core::herm::{congruence_op, skew_exp};
use jordan_core::sample;
use jordan_core::structure::central_symmetry_op;
use jordan_core::{Algebra, CMatrix, Element, RMatrix, VOperator};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jordan-cone"));
    c.env_remove("JORDAN_CONE_TOL");
    c
}

static WRITES: AtomicUsize = AtomicUsize::new(0);

fn write_fixture(name: &str, f: &Fixture) -> PathBuf {
    let id = WRITES.fetch_add(1, Ordering::Relaxed);
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{name}-{}-{id}.json", std::process::id()));
    std::fs::write(&path, serialize_fixture(f)).unwrap();
    path
}

fn run(fixture: &PathBuf, args: &[&str]) -> Output {
    bin().arg("--fixture").arg(fixture).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn diag(alg: &Algebra, d: &[f64]) -> Element {
    let mut m = CMatrix::zeros(d.len(), d.len());
    for (i, &x) in d.iter().enumerate() {
        m[(i, i)] = x.into();
    }
    Element::from_matrix(alg, &m).unwrap()
}

fn sym2_fixture() -> PathBuf {
    let alg = Algebra::sym(2).unwrap();
    let mut f = Fixture::new(&alg, 11);
    f.elements.insert("x".into(), diag(&alg, &[3.0, -1.0]));
    f.elements.insert("pos".into(), diag(&alg, &[4.0, 9.0]));
    f.elements.insert("p".into(), diag(&alg, &[1.0, 0.0]));
    f.elements.insert("u".into(), diag(&alg, &[1.0, 2.0]));
    f.elements.insert("w".into(), diag(&alg, &[1.0, -2.0]));
    let mut rng = sample::rng(3);
    let v = sample::cone_point(&alg, &mut rng);
    let k = sample::automorphism(&alg, &mut rng);
    f.operators.insert("g".into(), v.u_op().compose(&k));
    f.operators
        .insert("junk".into(), VOperator::new(&alg, RMatrix::from_fn(3, 3, |i, j| (i * 3 + j) as f64 + 0.5)).unwrap());
    write_fixture("sym2", &f)
}

#[test]
fn spectrum_prints_ascending_eigenvalues() {
    let f = sym2_fixture();
    let out = run(&f, &["--json", "spectrum", "--element", "x"]);
    assert_eq!(out.status.code(), Some(0));
    let ev: Vec<f64> = serde_json::from_value(json(&out)["eigenvalues"].clone()).unwrap();
    assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12, "{ev:?}");

    let out = run(&f, &["--json", "spectrum", "--element", "pos", "--function", "sqrt"]);
    let ev: Vec<f64> = serde_json::from_value(json(&out)["eigenvalues"].clone()).unwrap();
    assert!((ev[0] - 2.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12, "{ev:?}");

    let text = run(&f, &["spectrum", "--element", "x"]);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("eigenvalues"));
}

#[test]
fn spectrum_domain_error_exits_one() {
    let f = sym2_fixture();
    let out = run(&f, &["--json", "spectrum", "--element", "x", "--function", "log"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["error"].is_string());
}

#[test]
fn decompose_str_and_go() {
    let f = sym2_fixture();
    let out = run(&f, &["--json", "decompose-str", "--operator", "g"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json(&out);
    assert!(j["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(j["involutive"], Value::Bool(false));
    let text = String::from_utf8_lossy(&run(&f, &["decompose-str", "--operator", "g"]).stdout).into_owned();
    for key in ["v ", "p ", "residual", "k"] {
        assert!(text.contains(key), "{text}");
    }

    let out = run(&f, &["--json", "decompose-go", "--operator", "g"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["residual"].as_f64().unwrap() <= 1e-9);

    let out = run(&f, &["--json", "decompose-str", "--operator", "junk"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decompose_str_over_all_central_projections() {
    let alg: Algebra = "sym:2+sym:2".parse().and_then(Algebra::new).unwrap();
    let mut f = Fixture::new(&alg, 1);
    let mut rng = sample::rng(9);
    let ps = jordan_core::structure::central_projections(&alg);
    assert_eq!(ps.len(), 4);
    for (i, p) in ps.iter().enumerate() {
        let v = sample::cone_point(&alg, &mut rng);
        f.operators.insert(format!("g{i}"), v.u_op().compose(&central_symmetry_op(p)));
    }
    let path = write_fixture("pair", &f);
    for (i, p) in ps.iter().enumerate() {
        let out = run(&path, &["--json", "decompose-str", "--operator", &format!("g{i}")]);
        assert_eq!(out.status.code(), Some(0));
        let got: Vec<f64> = serde_json::from_value(json(&out)["p"].clone()).unwrap();
        let err = got.iter().zip(p.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-7, "projection {i}: {got:?} vs {:?}", p.as_slice());
    }
}

#[test]
fn upositive_pierce_isotope() {
    let f = sym2_fixture();
    let out = run(&f, &["--json", "upositive", "--element", "pos"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["positive"], Value::Bool(true));
    let out = run(&f, &["--json", "upositive", "--element", "x"]);
    assert_eq!(out.status.code(), Some(1));
    let j = json(&out);
    assert_eq!(j["positive"], Value::Bool(false));
    assert!(j["witness"].as_f64().unwrap() < 0.0);

    let out = run(&f, &["--json", "pierce", "--element", "p"]);
    assert_eq!(out.status.code(), Some(0));
    let dims = &json(&out)["dims"];
    assert_eq!((dims["one"].as_u64(), dims["half"].as_u64(), dims["zero"].as_u64()), (Some(1), Some(1), Some(1)));

    let out = run(&f, &["--json", "isotope", "--element", "u"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["isomorphic"], Value::Bool(true));
    let out = run(&f, &["--json", "isotope", "--element", "w"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["isomorphic"], Value::Bool(false));
}

#[test]
fn lift_aut_reproduces_congruence() {
    let alg = Algebra::herm(2).unwrap();
    let mut f = Fixture::new(&alg, 2);
    let z = sample::skew_hermitian(2, 0.05, &mut sample::rng(4));
    f.operators.insert("k".into(), congruence_op(&skew_exp(&z), false).unwrap());
    let path = write_fixture("herm2", &f);
    let out = run(&path, &["--json", "lift-aut", "--operator", "k"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json(&out);
    assert_eq!(j["component"], "unitary");
    assert!(j["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = ["verify", "--algebra", "herm:3", "--seed", "7", "--trials", "20", "--json"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let j: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(j["pass"], Value::Bool(true));
    assert_eq!(j["algebra"], "herm:3");
    assert!(j.get("wall_time").is_none());
}

#[test]
fn verify_uses_fixture_algebra_and_seed() {
    let f = sym2_fixture();
    let a = run(&f, &["--json", "--trials", "3", "verify"]);
    assert_eq!(a.status.code(), Some(0));
    let j = json(&a);
    assert_eq!(j["algebra"], "sym:2");
    assert_eq!(j["seed"], 11);
}

#[test]
fn tolerance_flag_and_environment() {
    let f = sym2_fixture();
    let strict = run(&f, &["--json", "--tol", "1e-300", "verify", "--trials", "2"]);
    assert_eq!(strict.status.code(), Some(1));
    assert_eq!(json(&strict)["pass"], Value::Bool(false));
    let env = bin()
        .env("JORDAN_CONE_TOL", "1e-300")
        .args(["--json", "verify", "--algebra", "sym:2", "--trials", "2"])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(1));
    assert_eq!(json(&env)["tolerance"], 1e-300);
}

#[test]
fn usage_errors_exit_two() {
    let f = sym2_fixture();
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec!["spectrum"],
        vec!["spectrum", "--element", "x"],
        vec!["verify", "--algebra", "sym:0"],
        vec!["verify", "--algebra", "octonion:3"],
        vec!["--tol", "-1", "verify", "--algebra", "sym:2"],
        vec!["--trials", "0", "verify", "--algebra", "sym:2"],
    ];
    for args in cases {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
    }
    let out = run(&f, &["spectrum", "--element", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&f, &["spectrum", "--element", "x", "--function", "cosh"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn malformed_fixture_names_element() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bad.json");
    std::fs::write(&path, "{\n  \"algebra\": {\"kind\": \"sym\", \"n\": 3},\n  \"elements\": {\n    \"a\": [1.0, 2.0, 3.0]\n  },\n  \"operators\": {},\n  \"seed\": 0\n}\n").unwrap();
    let out = run(&path, &["spectrum", "--element", "a"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("elements.a"), "{err}");
}

//! `jordan-cone` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check or decomposition fails, 2 on
//! usage and parse errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use jordan_core::fixture::{parse_fixture, Fixture};
use jordan_core::herm::{self, AutComponent};
use jordan_core::isotope::{isomorphism_defect, isotope_isomorphic, HomotopeAlgebra};
use jordan_core::spectral::{apply_function, spectral_decompose, ScalarFn};
use jordan_core::structure::{
    go_decompose, idempotent_identities, pierce_decompose, str_decompose, u_positive_decompose, u_spectrum_split,
    StrElement,
};
use jordan_core::suite::run_suite;
use jordan_core::{tol, Algebra, CMatrix, Element, JordanError, RMatrix, VOperator};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "jordan-cone", version, about = "Jordan algebra cone and structure-group toolkit")]
pub struct Cli {
    /// Fixture file with the algebra, named elements and operators.
    #[arg(long, global = true)]
    pub fixture: Option<PathBuf>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Residual tolerance.
    #[arg(long, global = true, env = tol::TOL_ENV)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ascending eigenvalues of an element, optionally of f(x).
    Spectrum {
        #[arg(long)]
        element: String,
        #[arg(long)]
        function: Option<ScalarFn>,
    },
    /// g = U_v S_p k.
    DecomposeStr {
        #[arg(long)]
        operator: String,
    },
    /// g = U_y k for g preserving the cone.
    DecomposeGo {
        #[arg(long)]
        operator: String,
    },
    /// x = v o eps_p when U_x is positive.
    Upositive {
        #[arg(long)]
        element: String,
    },
    /// Pierce projections of an idempotent.
    Pierce {
        #[arg(long)]
        element: String,
    },
    /// Isotope V_u and its isomorphism witness.
    Isotope {
        #[arg(long)]
        element: String,
    },
    /// Lift an automorphism of herm:n to a unitary.
    LiftAut {
        #[arg(long)]
        operator: String,
        #[arg(long, default_value_t = 0)]
        xi: usize,
    },
    /// Run the randomized verification suite.
    Verify {
        /// Algebra such as `herm:3` or `sym:2+sym:3`; defaults to the fixture's.
        #[arg(long)]
        algebra: Option<String>,
    },
}

/// What a command produced: a JSON value, a table, and whether it passed.
struct Outcome {
    json: Value,
    text: String,
    pass: bool,
}

enum Failure {
    Usage(String),
    Domain(JordanError),
}

impl From<JordanError> for Failure {
    fn from(e: JordanError) -> Self {
        Failure::Domain(e)
    }
}

fn real_matrix(m: &RMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|r| json!(m.row(r).iter().copied().collect::<Vec<f64>>())).collect())
}

fn complex_matrix(m: &CMatrix) -> Value {
    json!({
        "re": real_matrix(&m.map(|z| z.re)),
        "im": real_matrix(&m.map(|z| z.im)),
    })
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.12e}")).collect();
    format!("[{}]", parts.join(", "))
}

struct Ctx {
    fixture: Option<Fixture>,
    tol: f64,
    seed: Option<u64>,
}

impl Ctx {
    fn fixture(&self) -> Result<&Fixture, Failure> {
        self.fixture.as_ref().ok_or_else(|| Failure::Usage("this command needs --fixture".into()))
    }

    fn element(&self, name: &str) -> Result<&Element, Failure> {
        self.fixture()?.element(name).ok_or_else(|| Failure::Usage(format!("fixture has no element {name:?}")))
    }

    fn operator(&self, name: &str) -> Result<&VOperator, Failure> {
        self.fixture()?.operator(name).ok_or_else(|| Failure::Usage(format!("fixture has no operator {name:?}")))
    }

    fn seed(&self) -> u64 {
        self.seed.or(self.fixture.as_ref().map(|f| f.seed)).unwrap_or(0)
    }
}

fn spectrum(ctx: &Ctx, element: &str, function: Option<ScalarFn>) -> Result<Outcome, Failure> {
    let x = ctx.element(element)?;
    let y = match function {
        Some(f) => apply_function(x, f)?,
        None => x.clone(),
    };
    let sd = spectral_decompose(&y);
    let eig = sd.with_multiplicity();
    let text = format!("eigenvalues  {}\n", fmt_vec(&eig));
    Ok(Outcome {
        json: json!({
            "element": element,
            "function": function.map(ScalarFn::name),
            "eigenvalues": eig,
            "distinct": sd.eigenvalues,
            "multiplicities": sd.multiplicities,
        }),
        text,
        pass: true,
    })
}

fn decompose_str(ctx: &Ctx, name: &str) -> Result<Outcome, Failure> {
    let g = StrElement::new(ctx.operator(name)?.clone())?;
    let d = str_decompose(&g)?;
    let residual = d.recompose().distance(&g.g) / g.g.norm().max(1.0);
    let pass = residual <= ctx.tol;
    let text = format!(
        "v         {}\np         {}\ninvolutive {}\nresidual  {residual:.3e}\nk\n{}",
        fmt_vec(d.v.as_slice()),
        fmt_vec(d.p.as_slice()),
        d.is_involutive(),
        d.k.matrix()
    );
    Ok(Outcome {
        json: json!({
            "operator": name,
            "v": d.v.as_slice(),
            "p": d.p.as_slice(),
            "k": real_matrix(d.k.matrix()),
            "involutive": d.is_involutive(),
            "str_residual": g.residual,
            "residual": residual,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn decompose_go(ctx: &Ctx, name: &str) -> Result<Outcome, Failure> {
    let g = StrElement::new(ctx.operator(name)?.clone())?;
    let (y, k) = go_decompose(&g)?;
    let residual = y.u_op().compose(&k).distance(&g.g) / g.g.norm().max(1.0);
    let pass = residual <= ctx.tol;
    let text = format!("y         {}\nresidual  {residual:.3e}\nk\n{}", fmt_vec(y.as_slice()), k.matrix());
    Ok(Outcome {
        json: json!({"operator": name, "y": y.as_slice(), "k": real_matrix(k.matrix()), "residual": residual, "pass": pass}),
        text,
        pass,
    })
}

fn upositive(ctx: &Ctx, name: &str) -> Result<Outcome, Failure> {
    let x = ctx.element(name)?;
    let split = u_spectrum_split(x)?;
    match u_positive_decompose(x) {
        Ok((v, eps)) => {
            let residual = v.jordan(&eps)?.max_abs_diff(x) / x.coord_norm().max(1.0);
            let pass = residual <= ctx.tol;
            Ok(Outcome {
                json: json!({"element": name, "positive": true, "v": v.as_slice(), "eps": eps.as_slice(),
                             "residual": residual, "split": split, "pass": pass}),
                text: format!(
                    "positive  true\nv         {}\neps       {}\nresidual  {residual:.3e}\n",
                    fmt_vec(v.as_slice()),
                    fmt_vec(eps.as_slice())
                ),
                pass,
            })
        }
        Err(JordanError::UxNotPositive { witness }) => Ok(Outcome {
            json: json!({"element": name, "positive": false, "witness": witness, "split": split, "pass": false}),
            text: format!(
                "positive  false\nwitness   {witness:.12e}\nJ+        {}\nJ-        {}\nJ0        {}\n",
                fmt_vec(&split.plus),
                fmt_vec(&split.minus),
                fmt_vec(&split.zero)
            ),
            pass: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn pierce(ctx: &Ctx, name: &str) -> Result<Outcome, Failure> {
    let p = ctx.element(name)?;
    let d = pierce_decompose(p)?;
    let ids = idempotent_identities(p);
    let worst = ids.iter().map(|(_, r)| *r).fold(d.defect(), f64::max);
    let pass = worst <= ctx.tol;
    let mut text = format!(
        "dims      one={} half={} zero={}\ndefect    {:.3e}\n",
        d.dims.one,
        d.dims.half,
        d.dims.zero,
        d.defect()
    );
    for (id, r) in &ids {
        let _ = writeln!(text, "{r:.3e}  {id}");
    }
    let identities: Vec<Value> = ids.iter().map(|(id, r)| json!({"identity": id, "residual": r})).collect();
    Ok(Outcome {
        json: json!({"element": name, "dims": d.dims, "defect": d.defect(), "identities": identities,
                     "p1": real_matrix(d.p1.matrix()), "p0": real_matrix(d.p0.matrix()),
                     "phalf": real_matrix(d.phalf.matrix()), "pass": pass}),
        text,
        pass,
    })
}

fn isotope(ctx: &Ctx, name: &str) -> Result<Outcome, Failure> {
    let u = ctx.element(name)?;
    let iso = isotope_isomorphic(u)?;
    let mut rng = jordan_core::sample::rng(ctx.seed());
    let defect = iso.witness.as_ref().map(|g| isomorphism_defect(g, &HomotopeAlgebra::new(u.clone()), 100, &mut rng));
    let pass = iso.isomorphic && defect.is_some_and(|d| d <= ctx.tol);
    let text = match (&iso.witness, defect) {
        (Some(g), Some(d)) => format!("isomorphic  true\ndefect      {d:.3e}\nwitness\n{}", g.matrix()),
        _ => format!("isomorphic  false\nU_u witness {:.12e}\n", iso.ux_witness.unwrap_or(f64::NAN)),
    };
    Ok(Outcome {
        json: json!({"element": name, "isomorphic": iso.isomorphic,
                     "witness": iso.witness.as_ref().map(|g| real_matrix(g.matrix())),
                     "multiplicativity_defect": defect, "ux_witness": iso.ux_witness, "pass": pass}),
        text,
        pass,
    })
}

fn lift_aut(ctx: &Ctx, name: &str, xi: usize) -> Result<Outcome, Failure> {
    let k = ctx.operator(name)?;
    let component = herm::aut_component(k)?;
    let lift = herm::lift_automorphism(k, xi)?;
    let residual = lift.implementer().to_operator()?.max_abs_diff(k);
    let pass = residual <= ctx.tol.max(jordan_core::suite::HERM_TOL);
    let comp = match component {
        AutComponent::Unitary => "unitary",
        AutComponent::Antiunitary => "antiunitary",
    };
    Ok(Outcome {
        json: json!({"operator": name, "component": comp, "conjugated": lift.conjugated, "xi_index": lift.xi_index,
                     "z": complex_matrix(&lift.z), "w": complex_matrix(&lift.w), "s": complex_matrix(&lift.s),
                     "residual": residual, "pass": pass}),
        text: format!("component  {comp}\nconjugated {}\nresidual   {residual:.3e}\ns\n{}", lift.conjugated, lift.s),
        pass,
    })
}

fn verify(ctx: &Ctx, algebra: Option<&str>, trials: usize) -> Result<Outcome, Failure> {
    let alg = match algebra {
        Some(spec) => {
            spec.parse().and_then(Algebra::new).map_err(|e| Failure::Usage(format!("bad --algebra {spec:?}: {e}")))?
        }
        None => ctx.fixture()?.algebra.clone(),
    };
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let rep = run_suite(&alg, ctx.seed(), trials, ctx.tol);
    eprintln!("verify {} finished in {:.2?}", rep.algebra, rep.wall_time);
    let mut text = format!(
        "algebra {}  seed {}  trials {}  records {}  failures {}\n",
        rep.algebra,
        rep.seed,
        rep.trials,
        rep.records.len() + rep.structural.len(),
        rep.failures
    );
    let mut worst: std::collections::BTreeMap<&str, (f64, f64, usize)> = Default::default();
    for r in rep.records.iter().chain(&rep.structural) {
        let e = worst.entry(&r.check).or_insert((0.0, r.tolerance, 0));
        e.0 = e.0.max(r.residual);
        e.2 += usize::from(!r.pass);
    }
    for (check, (res, tol, fails)) in &worst {
        let status = if *fails == 0 { "ok  " } else { "FAIL" };
        let _ = writeln!(text, "{status} {check:<40} max {res:.3e}  tol {tol:.1e}");
    }
    let pass = rep.pass;
    let json = serde_json::to_value(&rep).expect("report serializes");
    Ok(Outcome { json, text, pass })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let fixture = match &cli.fixture {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            Some(parse_fixture(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))?)
        }
        None => None,
    };
    let tol = tol::resolve(cli.tol);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let ctx = Ctx { fixture, tol, seed: cli.seed };
    match &cli.command {
        Command::Spectrum { element, function } => spectrum(&ctx, element, *function),
        Command::DecomposeStr { operator } => decompose_str(&ctx, operator),
        Command::DecomposeGo { operator } => decompose_go(&ctx, operator),
        Command::Upositive { element } => upositive(&ctx, element),
        Command::Pierce { element } => pierce(&ctx, element),
        Command::Isotope { element } => isotope(&ctx, element),
        Command::LiftAut { operator, xi } => lift_aut(&ctx, operator, *xi),
        Command::Verify { algebra } => verify(&ctx, algebra.as_deref(), cli.trials),
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if out.pass {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"error": e.to_string(), "pass": false})).expect("json")
                );
            }
            EXIT_FAIL
        }
    }
}

//! Randomized verification suite over one algebra.
//!
//! Every trial draws from its own stream of the seeded generator, so the
//! report depends only on `(algebra, seed, trials, tol)`.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, Element, VOperator};
use crate::cone::{cone_retraction, cone_test_points, in_cone, min_pairing, order_unit_norm, transport};
use crate::error::JordanError;
use crate::herm;
use crate::isotope::{isomorphism_defect, isotope_inverse, isotope_isomorphic, isotope_spectrum, HomotopeAlgebra};
use crate::sample::{self, SampleRng};
use crate::spectral::{
    self, apply_function, hull_check, multiset_distance, operator_spectrum, spectral_decompose, ScalarFn,
};
use crate::structure::{
    central_projections, central_symmetry_op, derivation_defect, go_decompose, idempotent_identities, is_automorphism,
    lie_split, pierce_decompose, str_decompose, str_lie_residual, str_residual, u_positive_decompose, u_spectrum_split,
    StrElement,
};

/// Tolerance for recovering factors of a structure-group element.
pub const RECOVERY_TOL: f64 = 1e-7;
/// Tolerance for the `Herm(n)` implementer and lift checks.
pub const HERM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckRecord {
    pub check: String,
    pub anchor: String,
    pub trial: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub algebra: String,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub pass: bool,
    pub failures: usize,
    pub records: Vec<CheckRecord>,
    /// Checks that do not depend on the trial.
    pub structural: Vec<CheckRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().chain(&self.structural).filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Recorder {
    trial: usize,
    records: Vec<CheckRecord>,
}

impl Recorder {
    fn check(&mut self, check: &str, anchor: &str, residual: f64, tolerance: f64) {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.records.push(CheckRecord {
            check: check.into(),
            anchor: anchor.into(),
            trial: self.trial,
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }

    fn agree(&mut self, check: &str, anchor: &str, ok: bool) {
        self.check(check, anchor, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    fn result(&mut self, check: &str, anchor: &str, r: Result<f64, JordanError>, tolerance: f64) {
        self.check(check, anchor, r.unwrap_or(f64::INFINITY), tolerance);
    }
}

fn nrm(x: &Element) -> f64 {
    x.coord_norm().max(1.0)
}

fn rel(a: &VOperator, b: &VOperator) -> f64 {
    a.distance(b) / b.norm().max(1.0)
}

fn identities(r: &mut Recorder, alg: &Algebra, rng: &mut SampleRng, tol: f64) {
    let x = sample::element(alg, rng);
    let y = sample::element(alg, rng);
    let (nx, ny) = (nrm(&x), nrm(&y));
    let x2 = x.square();

    let lhs = x2.jordan(&x.jordan(&y).unwrap()).unwrap();
    let rhs = x.jordan(&x2.jordan(&y).unwrap()).unwrap();
    r.check("jordan_identity", "x^2 o (x o y) = x o (x^2 o y)", lhs.max_abs_diff(&rhs) / (nx.powi(3) * ny), tol);

    let polar = (&(&(&x + &y).u_op() - &x.u_op()) - &y.u_op()).scale(0.5);
    r.check(
        "polarization",
        "U_{x,y} = (U_{x+y} - U_x - U_y)/2",
        rel(&x.u_bilinear(&y).unwrap(), &polar) / (nx * ny),
        tol,
    );

    let uxy = x.u_op().apply(&y);
    let ff = x.u_op().compose(&y.u_op()).compose(&x.u_op());
    r.check(
        "fundamental_formula",
        "U_{U_x y} = U_x U_y U_x",
        uxy.u_op().distance(&ff) / (nx.powi(4) * ny.powi(2)),
        tol,
    );

    let v = x.scale(0.5);
    let lhs = v.l_op().scale(2.0).exp();
    let rhs = spectral::exp(&v).u_op();
    r.check("exp_quadratic", "e^{2L_v} = U_{e^v}", rel(&lhs, &rhs), tol);

    let (a, b) = (x.norm(), y.norm());
    let prod = x.jordan(&y).unwrap().norm();
    r.check("jb_norm_submultiplicative", "|x o y| <= |x| |y|", ((prod - a * b) / (a * b).max(1.0)).max(0.0), tol);
    r.check("jb_norm_square", "|x^2| = |x|^2", (x2.norm() - a * a).abs() / (a * a).max(1.0), tol);
    let sum = (&x2 + &y.square()).norm();
    r.check("jb_norm_monotone", "|x^2| <= |x^2 + y^2|", ((x2.norm() - sum) / sum.max(1.0)).max(0.0), tol);

    let sd = spectral_decompose(&x);
    let sq: Vec<f64> = x.eigenvalues().iter().map(|l| l * l).collect();
    let d = multiset_distance(&x2.eigenvalues(), &sq).unwrap_or(f64::INFINITY);
    r.check("spectral_mapping_square", "sigma(x^2) = sigma(x)^2", d / (nx * nx), tol);
    let ex: Vec<f64> = x.eigenvalues().iter().map(|l| l.exp()).collect();
    let d = multiset_distance(&spectral::exp(&x).eigenvalues(), &ex).unwrap_or(f64::INFINITY);
    r.check("spectral_mapping_exp", "sigma(e^x) = e^sigma(x)", d / sd.max().abs().exp().max(1.0), tol);
    r.check("spectral_reconstruction", "x = sum lambda_i e_i", sd.reconstruct().max_abs_diff(&x) / nx, tol);

    let (lo, hi) = hull_check(&x);
    r.check("hull_equality", "co sigma(L_x) = co sigma(x)", lo.abs().max(hi.abs()) / nx, tol);

    let c = sample::cone_point(alg, rng);
    let s = spectral::sqrt(&c).map(|s| s.square().max_abs_diff(&c) / nrm(&c));
    r.result("sqrt_squares_back", "(x^{1/2})^2 = x", s, tol);
    let l = spectral::log(&c).map(|l| spectral::exp(&l).max_abs_diff(&c) / nrm(&c));
    r.result("exp_log_inverse", "e^{ln x} = x", l, tol);
}

fn cone_checks(r: &mut Recorder, alg: &Algebra, rng: &mut SampleRng, tol: f64) {
    let x = sample::cone_point(alg, rng);
    let y = sample::cone_point(alg, rng);
    let pts = cone_test_points(alg, 32, rng);
    r.check("cone_self_duality", "<x, y> >= 0 on the cone", (-min_pairing(&x, &pts)).max(0.0), tol);
    match (transport(&x, &y), transport(&y, &x)) {
        (Ok(g), Ok(h)) => {
            r.check("transport", "U_{y^{1/2}} U_{x^{-1/2}} x = y", g.apply(&x).max_abs_diff(&y) / nrm(&y), tol);
            r.check(
                "transport_homogeneity",
                "T(y,x) T(x,y) x = x",
                h.compose(&g).apply(&x).max_abs_diff(&x) / nrm(&x),
                tol,
            );
        }
        _ => {
            r.check("transport", "U_{y^{1/2}} U_{x^{-1/2}} x = y", f64::INFINITY, tol);
            r.check("transport_homogeneity", "T(y,x) T(x,y) x = x", f64::INFINITY, tol);
        }
    }
    let z = sample::invertible(alg, 0.1, rng);
    let uz = z.u_op();
    r.agree("inner_str_preserves_cone", "U_x(cone) in cone", pts.iter().all(|p| in_cone(&uz.apply(p))));
    let w = sample::element(alg, rng);
    r.check("order_unit_norm", "|x| = inf{l : -l1 <= x <= l1}", (order_unit_norm(&w) - w.norm()).abs() / nrm(&w), tol);
}

fn pierce_checks(r: &mut Recorder, alg: &Algebra, rng: &mut SampleRng, tol: f64) {
    let x = sample::invertible(alg, 0.1, rng);
    let p = apply_function(&x, ScalarFn::ChiPlus).expect("invertible");
    let worst = idempotent_identities(&p).into_iter().map(|(_, v)| v).fold(0.0, f64::max);
    r.check("idempotent_identities", "U_eps = 1 - 4U_{p,p'} and related", worst, tol);
    r.result("pierce_projections", "U_p + U_{p'} + 2U_{p,p'} = 1", pierce_decompose(&p).map(|d| d.defect()), tol);
    let c = sample::central_projection(alg, rng);
    let s = central_symmetry_op(&c);
    let worst = idempotent_identities(&c).into_iter().map(|(_, v)| v).fold(0.0, f64::max);
    r.check(
        "central_identities",
        "L_eps^2 = 1 for central p",
        worst.max(s.compose(&s).max_abs_diff(&VOperator::identity(alg))),
        tol,
    );
    r.result("central_symmetry_in_str", "L_{eps_p} in Str", str_residual(&s), tol);
}

fn u_positive_checks(r: &mut Recorder, alg: &Algebra, rng: &mut SampleRng, tol: f64) {
    let base = sample::invertible(alg, 0.1, rng);
    let x = if rng.random_bool(0.5) {
        let p = sample::central_projection(alg, rng);
        central_symmetry_op(&p).apply(&base.square())
    } else {
        base
    };
    let min_u = operator_spectrum(&x.u_op()).iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let res = u_positive_decompose(&x);
    r.agree("u_positive_agreement", "U_x > 0 iff x = v o eps_p", res.is_ok() == (min_u > 0.0));
    if let Ok((v, eps)) = &res {
        let recon = v.jordan(eps).map(|ve| ve.max_abs_diff(&x) / nrm(&x)).unwrap_or(f64::INFINITY);
        let central = crate::structure::centrality_defect(&eps.add_unit(1.0).scale(0.5));
        r.check("u_positive_reconstruction", "x = v o eps_p", recon.max(central), tol);
    } else {
        r.check("u_positive_reconstruction", "x = v o eps_p", 0.0, tol);
    }

    let y = sample::invertible(alg, 0.1, rng);
    match u_spectrum_split(&y) {
        Ok(split) => {
            let full = spectral::symmetric_spectrum(&y.u_op());
            let d = multiset_distance(&split.union(), &full).unwrap_or(f64::INFINITY);
            r.check("u_spectrum_split_union", "sigma(U_x) = sigma_+ u sigma_- u sigma_0", d / nrm(&y).powi(2), tol);
            let zmax = split.zero.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            r.check("u_spectrum_split_zero", "sigma_0 <= 0", zmax.max(0.0), tol);
        }
        Err(_) => {
            r.check("u_spectrum_split_union", "sigma(U_x) = sigma_+ u sigma_- u sigma_0", f64::INFINITY, tol);
            r.check("u_spectrum_split_zero", "sigma_0 <= 0", f64::INFINITY, tol);
        }
    }
}

fn str_checks(r: &mut Recorder, alg: &Algebra, rng: &mut SampleRng, tol: f64) {
    let one = Element::unit(alg);
    let v = if rng.random_bool(0.5) { sample::cone_point(alg, rng) } else { one.clone() };
    let p = sample::central_projection(alg, rng);
    let k = sample::automorphism(alg, rng);
    let g = v.u_op().compose(&central_symmetry_op(&p)).compose(&k);
    r.result("str_membership", "U_{gx} = g U_x g*", str_residual(&g), tol);
    let x = sample::invertible(alg, 0.1, rng);
    r.result("quadratic_in_str", "U_x in Str", str_residual(&x.u_op()), tol);

    let se = StrElement::new(g.clone());
    let decomposed = se.as_ref().ok().map(|s| (s, str_decompose(s)));
    match decomposed {
        Some((s, Ok(d))) => {
            r.check("str_recover_v", "g = U_v S_p k", d.v.max_abs_diff(&v) / nrm(&v), RECOVERY_TOL.max(tol));
            r.check("str_recover_p", "g = U_v S_p k", d.p.max_abs_diff(&p), RECOVERY_TOL.max(tol));
            r.check("str_recover_k", "g = U_v S_p k", d.k.max_abs_diff(&k), RECOVERY_TOL.max(tol));
            r.check("str_recompose", "g = U_v S_p k", rel(&d.recompose(), &g), RECOVERY_TOL.max(tol));
            let inv = g.inverse().map(|gi| rel(&s.adj, &gi) <= RECOVERY_TOL).unwrap_or(false);
            r.agree("involutive_classification", "g* = g^{-1} iff v = 1", inv == d.is_involutive());
            let back = StrElement::new(s.adj.clone()).map(|a| rel(&a.adj, &g));
            r.result("adjoint_involution", "(g*)* = g", back, RECOVERY_TOL.max(tol));
        }
        _ => {
            for name in ["str_recover_v", "str_recover_p", "str_recover_k", "str_recompose", "adjoint_involution"] {
                r.check(name, "g = U_v S_p k", f64::INFINITY, RECOVERY_TOL.max(tol));
            }
            r.agree("involutive_classification", "g* = g^{-1} iff v = 1", false);
        }
    }

    let c = sample::cone_point(alg, rng);
    let h = c.u_op().compose(&k);
    let go = StrElement::new(h.clone()).and_then(|s| go_decompose(&s));
    r.result(
        "go_round_trip",
        "g = U_y k, y = g(1)^{1/2}",
        go.map(|(y, kk)| rel(&y.u_op().compose(&kk), &h).max(kk.max_abs_diff(&k))),
        tol.max(1e-9),
    );
    r.result("retraction_start", "F(g,0) = g", cone_retraction(&h, 0.0).map(|f| rel(&f, &h)), tol);
    let end = cone_retraction(&h, 1.0).map(|f| {
        let unit = f.apply(&one).max_abs_diff(&one);
        if is_automorphism(&f) {
            unit
        } else {
            f64::INFINITY
        }
    });
    r.result("retraction_end_automorphism", "F(g,1) in Aut", end, RECOVERY_TOL.max(tol));
    let t: f64 = rng.random();
    r.result("retraction_fixes_aut", "F(k,t) = k", cone_retraction(&k, t).map(|f| f.max_abs_diff(&k)), tol);
}

fn lie_checks(r: &mut Recorder, alg: &Algebra, rng: &mut SampleRng, tol: f64) {
    let u = sample::element(alg, rng);
    let d = sample::derivation(alg, 1.0, rng);
    let h = &u.l_op() + &d;
    r.check("str_lie_membership", "2U_{x,Hx} = H U_x - U_x Hbar", str_lie_residual(&h), tol);
    let split = lie_split(&h).map(|(u2, d2)| u2.max_abs_diff(&u).max(d2.max_abs_diff(&d)) / nrm(&u));
    r.result("str_lie_split", "str = der + L", split, tol);
    r.check("derivation_leibniz", "D(x o y) = Dx o y + x o Dy", derivation_defect(&d, 4, rng), tol);
    let e = d.scale(0.5).exp();
    r.agree("derivation_exp_aut", "e^{tD} in Aut", is_automorphism(&e));
}

fn isotope_checks(r: &mut Recorder, alg: &Algebra, rng: &mut SampleRng, tol: f64) {
    let u = sample::invertible(alg, 0.3, rng);
    let h = HomotopeAlgebra::new(u.clone());
    let x = sample::element(alg, rng);
    let y = sample::element(alg, rng);
    r.result("homotope_jordan_identity", "Jordan identity in V_u", h.jordan_identity_defect(&x, &y), tol);
    let singular = HomotopeAlgebra::new(apply_function(&u, ScalarFn::ChiPlus).expect("invertible"));
    r.result(
        "homotope_jordan_identity_singular_u",
        "Jordan identity in V_u",
        singular.jordan_identity_defect(&x, &y),
        tol,
    );
    let unit = h.unit().expect("invertible u");
    let cond = nrm(&u) * nrm(unit);
    let law = h.product(unit, &x).map(|p| p.max_abs_diff(&x) / (nrm(&x) * cond));
    r.result("isotope_unit_law", "1_u = u^{-1}", law, tol);
    let z = sample::invertible(alg, 0.3, rng);
    let inv = isotope_inverse(&h, &z)
        .and_then(|zi| h.u_op(&z).map(|uz| uz.apply(&zi).max_abs_diff(&z) / (nrm(&z) * cond.powi(2))));
    r.result("isotope_inverse_law", "U^u_x x^{-1_u} = x", inv, tol);

    let w = if rng.random_bool(0.5) {
        central_symmetry_op(&sample::central_projection(alg, rng)).apply(&u.square())
    } else {
        u.clone()
    };
    let positive = operator_spectrum(&w.u_op()).iter().all(|l| l.re > 0.0);
    match isotope_isomorphic(&w) {
        Ok(iso) => {
            r.agree("isotope_isomorphic_agreement", "V_u iso V iff U_u > 0", iso.isomorphic == positive);
            let defect = iso.witness.map_or(0.0, |g| isomorphism_defect(&g, &HomotopeAlgebra::new(w.clone()), 4, rng));
            r.check("isotope_witness_multiplicativity", "g(x o y) = g(x) ._u g(y)", defect, tol);
        }
        Err(_) => {
            r.agree("isotope_isomorphic_agreement", "V_u iso V iff U_u > 0", false);
            r.check("isotope_witness_multiplicativity", "g(x o y) = g(x) ._u g(y)", f64::INFINITY, tol);
        }
    }

    let v = sample::cone_point(alg, rng);
    let g = v
        .u_op()
        .compose(&central_symmetry_op(&sample::central_projection(alg, rng)))
        .compose(&sample::automorphism(alg, rng));
    let ev = v.eigenvalues();
    let kappa = (ev[ev.len() - 1] / ev[0]).powi(2);
    let spec = StrElement::new(g).and_then(|s| isotope_spectrum(&s, &x)).map(|s| {
        multiset_distance(&s, &spectral_decompose(&x).with_multiplicity()).unwrap_or(f64::INFINITY) / (nrm(&x) * kappa)
    });
    r.result("isotope_spectrum", "g(Omega) = Omega^{g(1)^{-1}}", spec, RECOVERY_TOL.max(tol));
}

fn small_unitary_aut(n: usize, limit: f64, rng: &mut SampleRng) -> (crate::CMatrix, VOperator) {
    let z = sample::skew_hermitian(n, 0.3, rng);
    let mut scale = 1.0;
    loop {
        let zs = &z * num_complex::Complex64::new(scale, 0.0);
        let s = herm::skew_exp(&zs);
        let k = herm::congruence_op(&s, false).expect("unitary");
        if (&k - &VOperator::identity(k.algebra())).op_norm() < limit {
            return (s, k);
        }
        scale *= 0.5;
    }
}

fn herm_checks(r: &mut Recorder, n: usize, rng: &mut SampleRng, tol: f64) {
    let htol = HERM_TOL.max(tol);
    let t = sample::complex_gaussian(n, rng);
    let conj = rng.random_bool(0.5);
    let g = herm::congruence_op(&t, conj).expect("gaussian matrix is invertible");
    let rec = StrElement::new(g.clone()).and_then(|s| herm::recover_implementer(&s)).map(|m| {
        let op = m.to_operator().map(|o| rel(&o, &g)).unwrap_or(f64::INFINITY);
        let gauge = (&m.t - herm::phase_normalize(&t)).norm() / t.norm();
        if m.conjugate == conj || n == 1 {
            op.max(gauge)
        } else {
            f64::INFINITY
        }
    });
    r.result("herm_recover_implementer", "g(A) = f A f^dagger, f up to phase", rec, htol);

    let (_, k) = herm::random_unitary_aut(n, rng);
    let flip = rng.random_bool(0.5);
    let kk = if flip { herm::transpose_map(n).compose(&k) } else { k };
    let expect = if flip && n > 1 { herm::AutComponent::Antiunitary } else { herm::AutComponent::Unitary };
    r.agree("herm_aut_component", "unitary and antiunitary components", herm::aut_component(&kk).ok() == Some(expect));

    let (s0, k) = small_unitary_aut(n, 0.9, rng);
    let xi = rng.random_range(0..n);
    let lift = herm::lift_automorphism(&k, xi).map(|l| {
        let op = herm::congruence_op(&l.s, false).map(|o| o.max_abs_diff(&k)).unwrap_or(f64::INFINITY);
        op.max(herm::phase_distance(&l.s, &s0) / (n as f64).sqrt())
    });
    r.result("herm_lift", "k = Ad(e^Z W)", lift, htol);

    let mut z = sample::skew_hermitian(n, 0.3, rng);
    // keep e^{t ad Z} inside the lift neighbourhood
    while (&herm::ad_op(&(&z * num_complex::Complex64::new(0.5, 0.0))).expect("square").exp()
        - &VOperator::identity(&Algebra::herm(n).expect("n >= 1")))
        .op_norm()
        >= 0.9
    {
        z *= num_complex::Complex64::new(0.5, 0.0);
    }
    let mut worst = 0.0_f64;
    for tt in [0.1, 0.5] {
        let zt = &z * num_complex::Complex64::new(tt, 0.0);
        let kt = herm::ad_op(&zt).expect("square").exp();
        worst = worst.max(match herm::lift_automorphism(&kt, 0) {
            Ok(l) => herm::phase_distance(&l.s, &herm::skew_exp(&zt)),
            Err(_) => f64::INFINITY,
        });
    }
    r.check("herm_lift_one_parameter", "s(e^{t ad Z}) = e^{tZ}", worst, htol);

    let t0 = sample::complex_gaussian(n, rng);
    let lr = herm::lr_op(&t0).and_then(|h| herm::str_as_lr(&h).map(|t1| (t1, h))).map(|(t1, h)| {
        let op = herm::lr_op(&t1).map(|o| rel(&o, &h)).unwrap_or(f64::INFINITY);
        // T is determined up to i R Id; compare trace-free imaginary parts
        let diff = &t1 - &t0;
        let shift = num_complex::Complex64::new(0.0, diff.trace().im / n as f64);
        op.max((diff - crate::CMatrix::identity(n, n) * shift).norm() / t0.norm())
    });
    r.result("herm_str_as_lr", "str = {l_T + r_{T^dagger}}", lr, htol);

    let x = sample::invertible(&Algebra::herm(n).expect("n >= 1"), 0.1, rng);
    let sign = rng.random_bool(0.5);
    let g = if sign { x.u_op().scale(-1.0) } else { x.u_op() };
    let comp = StrElement::new(g).and_then(|s| herm::str_two_components(&s));
    let expect = if sign { herm::StrComponent::Minus } else { herm::StrComponent::Plus };
    r.agree("herm_two_components", "Str = G(Omega) u -G(Omega)", comp.ok() == Some(expect));
}

fn run_trial(alg: &Algebra, seed: u64, trial: usize, tol: f64) -> Vec<CheckRecord> {
    let mut rng = sample::trial_rng(seed, trial as u64);
    let mut r = Recorder { trial, records: Vec::new() };
    identities(&mut r, alg, &mut rng, tol);
    cone_checks(&mut r, alg, &mut rng, tol);
    pierce_checks(&mut r, alg, &mut rng, tol);
    u_positive_checks(&mut r, alg, &mut rng, tol);
    str_checks(&mut r, alg, &mut rng, tol);
    lie_checks(&mut r, alg, &mut rng, tol);
    isotope_checks(&mut r, alg, &mut rng, tol);
    if let Some(n) = alg.herm_size() {
        herm_checks(&mut r, n, &mut rng, tol);
    }
    r.records
}

fn structural(alg: &Algebra) -> Vec<CheckRecord> {
    let mut r = Recorder { trial: 0, records: Vec::new() };
    let cps = central_projections(alg);
    let atoms = crate::structure::central_atoms(alg).len();
    r.agree("central_projection_count", "|central projections| = 2^m", cps.len() == 1 << atoms);
    let worst = cps.iter().map(crate::structure::centrality_defect).fold(0.0, f64::max);
    r.check("central_projections_central", "[L_p, L_z] = 0", worst, crate::tol::CENTRALITY);
    // str_decompose over every central projection with v = 1, k = Id
    let mut worst = 0.0_f64;
    for p in &cps {
        let g = central_symmetry_op(p);
        worst = worst.max(match StrElement::new(g).and_then(|s| str_decompose(&s)) {
            Ok(d) => d.p.max_abs_diff(p),
            Err(_) => f64::INFINITY,
        });
    }
    r.check("central_projection_round_trip", "g = S_p", worst, RECOVERY_TOL);
    if let Some(n) = alg.herm_size() {
        if n <= 3 {
            let dim = herm::str_dimension(alg);
            let expect = 2 * n * n - 1;
            r.check("herm_str_dimension", "dim str = dim der + dim L = 2n^2 - 1", dim.abs_diff(expect) as f64, 0.0);
        }
    }
    r.records
}

/// Run every check `trials` times on `alg`.
pub fn run_suite(alg: &Algebra, seed: u64, trials: usize, tol: f64) -> VerificationReport {
    let start = Instant::now();
    let trials = trials.max(1);
    let mut records: Vec<CheckRecord> =
        (0..trials).into_par_iter().flat_map_iter(|t| run_trial(alg, seed, t, tol)).collect();
    records.sort_by(|a, b| a.check.cmp(&b.check).then(a.trial.cmp(&b.trial)));
    let structural = structural(alg);
    let failures = records.iter().chain(&structural).filter(|r| !r.pass).count();
    VerificationReport {
        suite: String::from("jordan-cone"),
        algebra: alg.to_string(),
        seed,
        trials,
        tolerance: tol,
        pass: failures == 0,
        failures,
        records,
        structural,
        wall_time: start.elapsed(),
    }
}

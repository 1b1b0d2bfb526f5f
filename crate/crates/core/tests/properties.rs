use num_complex::Complex64;
use proptest::prelude::*;

use jordan_core::cone::{cone_retraction, cone_test_points, in_cone, min_pairing, order_unit_norm, transport};
use jordan_core::fixture::{parse_fixture, serialize_fixture, Fixture};
use jordan_core::herm::{self, congruence_op, lift_automorphism, phase_distance, recover_implementer, skew_exp};
use jordan_core::isotope::HomotopeAlgebra;
use jordan_core::sample::{self, SampleRng};
use jordan_core::spectral::{self, spectral_decompose};
use jordan_core::structure::{
    central_projections, central_symmetry_op, idempotent_identities, str_decompose, str_lie_residual, str_residual,
    StrElement,
};
use jordan_core::suite::run_suite;
use jordan_core::{hull_check, Algebra, CMatrix, Element, VOperator};

const TOL: f64 = 1e-9;

const SPECS: &[&str] = &[
    "sym:1",
    "sym:2",
    "sym:3",
    "sym:4",
    "herm:1",
    "herm:2",
    "herm:3",
    "spin:1",
    "spin:2",
    "spin:4",
    "spin:5",
    "sym:2+sym:3",
    "sym:2+sym:2",
    "herm:2+spin:3",
];

fn alg(i: usize) -> Algebra {
    SPECS[i].parse().and_then(Algebra::new).unwrap()
}

fn any_alg() -> impl Strategy<Value = (Algebra, u64)> {
    (0..SPECS.len(), any::<u64>()).prop_map(|(i, s)| (alg(i), s))
}

fn matrix_alg() -> impl Strategy<Value = (Algebra, u64)> {
    (prop_oneof![Just("sym:2"), Just("sym:3"), Just("herm:2"), Just("herm:3")], any::<u64>())
        .prop_map(|(s, seed)| (s.parse().and_then(Algebra::new).unwrap(), seed))
}

fn herm_n() -> impl Strategy<Value = (usize, u64)> {
    (2usize..=3, any::<u64>())
}

fn rel(a: &VOperator, b: &VOperator) -> f64 {
    a.distance(b) / b.norm().max(1.0)
}

fn scale(x: &Element) -> f64 {
    1.0 + x.norm()
}

fn str_sample(a: &Algebra, rng: &mut SampleRng) -> VOperator {
    let v = sample::cone_point(a, rng);
    let p = sample::central_projection(a, rng);
    v.u_op().compose(&central_symmetry_op(&p)).compose(&sample::automorphism(a, rng))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn jordan_identity_and_fundamental_formula((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let (x, y) = (sample::element(&a, &mut r), sample::element(&a, &mut r));
        let x2 = x.square();
        let lhs = x2.jordan(&x.jordan(&y).unwrap()).unwrap();
        let rhs = x.jordan(&x2.jordan(&y).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= TOL * scale(&x).powi(3) * scale(&y));
        let uxy = x.u_op().apply(&y);
        let ff = uxy.u_op();
        let prod = x.u_op().compose(&y.u_op()).compose(&x.u_op());
        prop_assert!(ff.max_abs_diff(&prod) <= TOL * scale(&x).powi(4) * scale(&y).powi(2));
    }

    #[test]
    fn polarization_matches_bilinear((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let (x, y) = (sample::element(&a, &mut r), sample::element(&a, &mut r));
        let sum = (&x + &y).u_op();
        let polar = (&(&sum - &x.u_op()) - &y.u_op()).scale(0.5);
        prop_assert!(polar.max_abs_diff(&x.u_bilinear(&y).unwrap()) <= TOL * (scale(&x) * scale(&y)).powi(1) * 4.0);
    }

    #[test]
    fn quadratic_matches_congruence((a, seed) in matrix_alg()) {
        let mut r = sample::rng(seed);
        let (x, y) = (sample::element(&a, &mut r), sample::element(&a, &mut r));
        let (mx, my) = (x.to_matrix().unwrap(), y.to_matrix().unwrap());
        let oracle = Element::from_matrix(&a, &(&mx * &my * &mx)).unwrap();
        prop_assert!(x.u_op().apply(&y).max_abs_diff(&oracle) <= TOL * scale(&x).powi(2) * scale(&y));
    }

    #[test]
    fn inverse_laws((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let x = sample::invertible(&a, 0.2, &mut r);
        let xi = x.inverse().unwrap();
        let k = scale(&x) * scale(&xi);
        prop_assert!(x.u_op().apply(&xi).max_abs_diff(&x) <= TOL * k * k);
        prop_assert!(xi.inverse().unwrap().max_abs_diff(&x) <= TOL * k * k);
        prop_assert!(x.u_op().inverse().is_ok());
    }

    #[test]
    fn jb_norm_axioms((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let (x, y) = (sample::element(&a, &mut r), sample::element(&a, &mut r));
        let (nx, ny) = (x.norm(), y.norm());
        prop_assert!(x.jordan(&y).unwrap().norm() <= nx * ny * (1.0 + TOL));
        prop_assert!((x.square().norm() - nx * nx).abs() <= TOL * (1.0 + nx * nx));
        prop_assert!(x.square().norm() <= (&x.square() + &y.square()).norm() * (1.0 + TOL));
        prop_assert!((order_unit_norm(&x) - nx).abs() <= 1e-8 * (1.0 + nx));
    }

    #[test]
    fn exp_of_multiplication_is_quadratic((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let v = sample::element(&a, &mut r).scale(0.5);
        let lhs = v.l_op().scale(2.0).exp();
        prop_assert!(rel(&lhs, &spectral::exp(&v).u_op()) <= TOL);
    }

    #[test]
    fn spectral_mapping_and_sqrt((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let x = sample::element(&a, &mut r);
        let sq: Vec<f64> = x.eigenvalues().iter().map(|l| l * l).collect();
        let d = spectral::multiset_distance(&x.square().eigenvalues(), &sq).unwrap();
        prop_assert!(d <= TOL * scale(&x).powi(2));
        let c = sample::cone_point(&a, &mut r);
        let back = spectral::sqrt(&c.u_op().apply(&Element::unit(&a))).unwrap();
        prop_assert!(back.max_abs_diff(&c) <= TOL * scale(&c));
        let (lo, hi) = hull_check(&x);
        prop_assert!(lo.abs().max(hi.abs()) <= TOL * scale(&x));
    }

    #[test]
    fn cone_self_duality((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let ys = cone_test_points(&a, 100, &mut r);
        let c = sample::cone_point(&a, &mut r);
        prop_assert!(min_pairing(&c, &ys) >= -TOL * scale(&c));
        // an element with a negative eigenvalue pairs negatively with its bottom idempotent
        let x = sample::element(&a, &mut r);
        let sd = spectral_decompose(&x);
        let lo = sd.min();
        if lo < -1e-6 {
            let e = sd.map(|l| if l == lo { 1.0 } else { 0.0 });
            prop_assert!(x.inner(&e) < 0.0);
            prop_assert!(!in_cone(&x));
        }
    }

    #[test]
    fn transport_homogeneity((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let (x, y) = (sample::cone_point(&a, &mut r), sample::cone_point(&a, &mut r));
        let txy = transport(&x, &y).unwrap();
        let tyx = transport(&y, &x).unwrap();
        let k = scale(&x) * scale(&y);
        prop_assert!(txy.apply(&x).max_abs_diff(&y) <= 1e-8 * k * k);
        prop_assert!(tyx.apply(&txy.apply(&x)).max_abs_diff(&x) <= 1e-8 * k.powi(4));
        let z = sample::invertible(&a, 0.2, &mut r);
        let uz = z.u_op();
        prop_assert!(cone_test_points(&a, 16, &mut r).iter().all(|p| in_cone(&uz.apply(p))));
    }

    #[test]
    fn retraction_is_lipschitz((a, seed) in any_alg(), t in 0.0f64..1.0, dt in -0.1f64..0.1) {
        let mut r = sample::rng(seed);
        let g = sample::cone_point(&a, &mut r).u_op().compose(&sample::automorphism(&a, &mut r));
        let s = (t + dt).clamp(0.0, 1.0);
        let half_log = spectral::log(&g.apply(&Element::unit(&a))).unwrap().scale(0.5);
        let c = 2.0 * half_log.norm() * (2.0 * half_log.norm()).exp() * g.op_norm();
        let gap = cone_retraction(&g, t).unwrap().distance(&cone_retraction(&g, s).unwrap());
        let frob = (a.dim() as f64).sqrt();
        prop_assert!(gap <= c * frob * (t - s).abs() * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn central_projections_behave((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let x = sample::element(&a, &mut r);
        let ps = central_projections(&a);
        for p in &ps {
            let lp = p.l_op();
            prop_assert!(lp.max_abs_diff(&lp.compose(&lp)) <= TOL);
            prop_assert!(lp.max_abs_diff(&p.u_op()) <= TOL);
            let px = p.jordan(&x).unwrap();
            prop_assert!(px.l_op().max_abs_diff(&lp.compose(&x.l_op())) <= TOL * scale(&x));
            prop_assert!(px.square().max_abs_diff(&p.jordan(&x.square()).unwrap()) <= TOL * scale(&x).powi(2));
            prop_assert!(str_residual(&central_symmetry_op(p)).unwrap() <= TOL);
        }
        for (i, p) in ps.iter().enumerate() {
            for q in &ps[i + 1..] {
                let prod = central_symmetry_op(p).compose(&central_symmetry_op(q));
                prop_assert!(!in_cone(&prod.apply(&Element::unit(&a))));
            }
        }
    }

    #[test]
    fn idempotents_satisfy_pierce_identities((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let x = sample::element(&a, &mut r);
        let sd = spectral_decompose(&x);
        let cut = sd.eigenvalues[sd.eigenvalues.len() / 2];
        let p = sd.map(|l| if l >= cut { 1.0 } else { 0.0 });
        for (id, res) in idempotent_identities(&p) {
            prop_assert!(res <= 1e-8, "{} residual {:e}", id, res);
        }
    }

    #[test]
    fn str_closed_under_products_and_inverses((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let g = str_sample(&a, &mut r);
        let h = str_sample(&a, &mut r);
        let gh = StrElement::new(g.clone()).unwrap().compose(&StrElement::new(h).unwrap());
        prop_assert!(gh.is_ok());
        prop_assert!(str_residual(&g.inverse().unwrap()).unwrap() <= 1e-8);
    }

    #[test]
    fn str_decompose_recovers_factors((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let v = sample::cone_point(&a, &mut r);
        let p = sample::central_projection(&a, &mut r);
        let k = sample::automorphism(&a, &mut r);
        let g = v.u_op().compose(&central_symmetry_op(&p)).compose(&k);
        let d = str_decompose(&StrElement::new(g).unwrap()).unwrap();
        prop_assert!(d.v.max_abs_diff(&v) <= 1e-7 * scale(&v));
        prop_assert!(d.p.max_abs_diff(&p) <= 1e-7);
        prop_assert!(d.k.max_abs_diff(&k) <= 1e-7);
    }

    #[test]
    fn lie_exponential_lands_in_str((a, seed) in any_alg(), t in prop_oneof![Just(0.1), Just(0.5), Just(1.0)]) {
        let mut r = sample::rng(seed);
        let h = &sample::element(&a, &mut r).scale(0.3).l_op() + &sample::derivation(&a, 0.3, &mut r);
        prop_assert!(str_lie_residual(&h) <= 1e-8);
        prop_assert!(str_residual(&h.scale(t).exp()).unwrap() <= 1e-8);
    }

    #[test]
    fn homotope_jordan_identity((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let (x, y) = (sample::element(&a, &mut r), sample::element(&a, &mut r));
        let u = sample::element(&a, &mut r);
        let sd = spectral_decompose(&u);
        let singular = sd.map(|l| if l > 0.0 { l } else { 0.0 });
        for w in [u, singular] {
            let h = HomotopeAlgebra::new(w.clone());
            let d = h.jordan_identity_defect(&x, &y).unwrap();
            prop_assert!(d <= TOL * (scale(&x).powi(3) * scale(&y) * scale(&w).powi(3)));
        }
    }

    #[test]
    fn phase_gauge((n, seed) in herm_n(), theta in 0.0f64..std::f64::consts::TAU) {
        let mut r = sample::rng(seed);
        let u = sample::unitary(n, &mut r);
        let lam = Complex64::from_polar(1.0, theta);
        let base = recover_implementer(&StrElement::new(congruence_op(&u, false).unwrap()).unwrap()).unwrap();
        let turned = recover_implementer(&StrElement::new(congruence_op(&(&u * lam), false).unwrap()).unwrap()).unwrap();
        prop_assert!((&base.t - &turned.t).camax() <= 1e-8);
    }

    #[test]
    fn mixed_rigidity((n, seed) in herm_n()) {
        let mut r = sample::rng(seed);
        let t = sample::complex_gaussian(n, &mut r);
        let s = sample::complex_gaussian(n, &mut r);
        let lin = congruence_op(&t, false).unwrap();
        for cand in [&s, &t] {
            let anti = congruence_op(cand, true).unwrap();
            prop_assert!(lin.distance(&anti) / lin.norm() > 0.01);
        }
    }

    #[test]
    fn lift_is_continuous((n, seed) in herm_n()) {
        let mut r = sample::rng(seed);
        let z = sample::skew_hermitian(n, 0.05, &mut r);
        let w = sample::skew_hermitian(n, 1e-4, &mut r);
        let k = congruence_op(&skew_exp(&z), false).unwrap();
        let k2 = congruence_op(&skew_exp(&(&z + &w)), false).unwrap();
        let s = lift_automorphism(&k, 0).unwrap().s;
        let s2 = lift_automorphism(&k2, 0).unwrap().s;
        prop_assert!(phase_distance(&s, &s2) <= 10.0 * k.distance(&k2) + 1e-12);
        prop_assert!(congruence_op(&s, false).unwrap().max_abs_diff(&k) <= 1e-8);
    }

    #[test]
    fn str_as_lr_round_trip((n, seed) in herm_n()) {
        let mut r = sample::rng(seed);
        let t: CMatrix = sample::complex_gaussian(n, &mut r);
        let h = herm::lr_op(&t).unwrap();
        let back = herm::str_as_lr(&h).unwrap();
        prop_assert!(rel(&herm::lr_op(&back).unwrap(), &h) <= 1e-8);
    }

    #[test]
    fn fixture_round_trip_is_bitwise((a, seed) in any_alg()) {
        let mut r = sample::rng(seed);
        let mut f = Fixture::new(&a, seed);
        f.elements.insert("x".into(), sample::element(&a, &mut r).scale(1e-7));
        f.elements.insert("y".into(), sample::cone_point(&a, &mut r).scale(3e5));
        f.operators.insert("g".into(), sample::automorphism(&a, &mut r));
        let back = parse_fixture(&serialize_fixture(&f)).unwrap();
        prop_assert_eq!(back.seed, f.seed);
        for (name, x) in &f.elements {
            let y = back.element(name).unwrap();
            prop_assert!(x.as_slice().iter().zip(y.as_slice()).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
        let (g, h) = (f.operator("g").unwrap(), back.operator("g").unwrap());
        prop_assert!(g.matrix().iter().zip(h.matrix().iter()).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn suite_is_deterministic((a, seed) in any_alg()) {
        let one = run_suite(&a, seed, 3, TOL);
        let two = run_suite(&a, seed, 3, TOL);
        prop_assert_eq!(one.to_json(), two.to_json());
        let longer = run_suite(&a, seed, 4, TOL);
        let prefix: Vec<_> = longer.records.iter().filter(|r| r.trial < 3).cloned().collect();
        prop_assert_eq!(serde_json::to_string(&prefix).unwrap(), serde_json::to_string(&one.records).unwrap());
    }
}

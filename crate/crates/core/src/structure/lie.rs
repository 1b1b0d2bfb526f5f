use rand::Rng;

use super::membership::probe_pairs;
use crate::algebra::{Element, VOperator};
use crate::error::{JordanError, Result};
use crate::sample;
use crate::tol;

/// `2U_{x,Hx} - H U_x + U_x Hbar` with `Hbar = H - 2U_{H1,1}`.
fn lie_defect(h: &VOperator, hbar: &VOperator, x: &Element) -> VOperator {
    let hx = h.apply(x);
    let lhs = x.u_bilinear(&hx).expect("same algebra").scale(2.0);
    let ux = x.u_op();
    &(&lhs - &h.compose(&ux)) + &ux.compose(hbar)
}

/// `Hbar = H - 2U_{H1,1} = H - 2L_{H1}`.
pub fn lie_conjugate(h: &VOperator) -> VOperator {
    let h1 = h.apply(&Element::unit(h.algebra()));
    h - &h1.l_op().scale(2.0)
}

/// Lie-algebra residual of `H`, normalized by `max(1, |H|)`.
///
/// The identity is quadratic in `x`, so it is probed on basis vectors and on
/// sums `e_i + e_j` over the fixed probe pairs.
pub fn str_lie_residual(h: &VOperator) -> f64 {
    let alg = h.algebra();
    let hbar = lie_conjugate(h);
    let scale = h.norm().max(1.0);
    let basis: Vec<Element> = (0..alg.dim()).map(|i| Element::basis(alg, i)).collect();
    let mut worst = 0.0_f64;
    for e in &basis {
        worst = worst.max(lie_defect(h, &hbar, e).norm() / scale);
    }
    for (i, j) in probe_pairs(alg.dim()) {
        let x = &basis[i] + &basis[j];
        worst = worst.max(lie_defect(h, &hbar, &x).norm() / (2.0 * scale));
    }
    worst
}

/// `H = L_u + D` with `u = H(1)` and `D` a derivation.
pub fn lie_split(h: &VOperator) -> Result<(Element, VOperator)> {
    let residual = str_lie_residual(h);
    if !(residual <= tol::MEMBERSHIP) {
        return Err(JordanError::NotInLieAlgebra { residual });
    }
    let u = h.apply(&Element::unit(h.algebra()));
    let d = h - &u.l_op();
    Ok((u, d))
}

/// `max |D(x o y) - Dx o y - x o Dy|` over random pairs, scaled by operand norms.
pub fn derivation_defect(d: &VOperator, pairs: usize, rng: &mut impl Rng) -> f64 {
    let alg = d.algebra();
    let scale = d.norm().max(1.0);
    (0..pairs)
        .map(|_| {
            let x = sample::element(alg, rng);
            let y = sample::element(alg, rng);
            let lhs = d.apply(&x.jordan(&y).expect("same algebra"));
            let rhs = &d.apply(&x).jordan(&y).expect("same algebra") + &x.jordan(&d.apply(&y)).expect("same algebra");
            lhs.max_abs_diff(&rhs) / (scale * x.coord_norm().max(1.0) * y.coord_norm().max(1.0))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::structure::{is_automorphism, str_residual};

    #[test]
    fn multiplication_operators_are_in_str() {
        let mut r = sample::rng(1);
        for alg in [Algebra::sym(3).unwrap(), Algebra::herm(2).unwrap(), Algebra::spin(4).unwrap()] {
            let v = sample::element(&alg, &mut r);
            assert!(str_lie_residual(&v.l_op()) < 1e-12, "{alg}");
        }
    }

    #[test]
    fn derivations_are_in_str() {
        let mut r = sample::rng(2);
        let alg = Algebra::herm(3).unwrap();
        let d = sample::derivation(&alg, 1.0, &mut r);
        assert!(str_lie_residual(&d) < 1e-12);
    }

    #[test]
    fn random_dense_operator_is_not() {
        let mut r = sample::rng(3);
        let alg = Algebra::sym(3).unwrap();
        let m = nalgebra::DMatrix::from_fn(6, 6, |_, _| sample::normal(&mut r));
        let h = VOperator::new(&alg, m).unwrap();
        assert!(str_lie_residual(&h) > 0.01);
        assert!(matches!(lie_split(&h), Err(JordanError::NotInLieAlgebra { .. })));
    }

    #[test]
    fn split_round_trip() {
        let mut r = sample::rng(4);
        let alg = Algebra::herm(3).unwrap();
        let u = sample::element(&alg, &mut r);
        let (u2, d0) = lie_split(&u.l_op()).unwrap();
        assert!(u2.max_abs_diff(&u) < 1e-14 && d0.matrix().amax() < 1e-14);

        let d = sample::derivation(&alg, 1.0, &mut r);
        let (u0, d2) = lie_split(&d).unwrap();
        assert!(u0.coord_norm() < 1e-13 && d2.max_abs_diff(&d) < 1e-14);

        let h = &u.l_op() + &d;
        let (u3, d3) = lie_split(&h).unwrap();
        assert!(u3.max_abs_diff(&u) < 1e-13);
        assert!(d3.max_abs_diff(&d) < 1e-13);
        assert!(derivation_defect(&d3, 10, &mut r) < 1e-12);
        for t in [0.1, 0.5, 1.0] {
            assert!(is_automorphism(&d3.scale(t).exp()));
            assert!(str_residual(&h.scale(t).exp()).unwrap() < 1e-9);
        }
    }
}

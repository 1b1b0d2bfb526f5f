//! Positive cone, order, homogeneity and the retraction onto `Aut`.

use rand::Rng;

use crate::algebra::{ensure_same, Element, VOperator};
use crate::error::{JordanError, Result};
use crate::sample;
use crate::spectral::{self, spectral_decompose};
use crate::structure::{is_automorphism, str_residual};
use crate::tol;

/// `x` lies in the open cone: `min spec(x) > tol`.
pub fn in_cone(x: &Element) -> bool {
    in_cone_tol(x, tol::TOL)
}

pub fn in_cone_tol(x: &Element, tol: f64) -> bool {
    spectral_decompose(x).min() > tol
}

/// `x <= y` in the closed cone order.
pub fn order_leq(x: &Element, y: &Element) -> Result<bool> {
    ensure_same(x.algebra(), y.algebra())?;
    Ok(spectral_decompose(&(y - x)).min() >= -tol::TOL)
}

fn require_cone(x: &Element) -> Result<()> {
    let min = spectral_decompose(x).min();
    if min > tol::TOL {
        Ok(())
    } else {
        Err(JordanError::NotInCone { min_eigenvalue: min })
    }
}

/// `U_{y^{1/2}} U_{x^{-1/2}}`, mapping `x` to `y`.
pub fn transport(x: &Element, y: &Element) -> Result<VOperator> {
    ensure_same(x.algebra(), y.algebra())?;
    require_cone(x)?;
    require_cone(y)?;
    let sx = spectral::sqrt(x)?.inverse()?;
    let sy = spectral::sqrt(y)?;
    Ok(sy.u_op().compose(&sx.u_op()))
}

/// `F(g, t) = U_{exp(-t ln(g1) / 2)} g`.
pub fn cone_retraction(g: &VOperator, t: f64) -> Result<VOperator> {
    let g1 = g.apply(&Element::unit(g.algebra()));
    if !in_cone(&g1) {
        return Err(JordanError::NotConePreserving);
    }
    if !matches!(str_residual(g), Ok(r) if r <= tol::MEMBERSHIP) {
        return Err(JordanError::NotConePreserving);
    }
    let a = spectral::log(&g1)?.scale(-0.5 * t);
    Ok(spectral::exp(&a).u_op().compose(g))
}

/// `F(g, 1)`, the automorphism part of `g`.
pub fn retract_to_aut(g: &VOperator) -> Result<VOperator> {
    let k = cone_retraction(g, 1.0)?;
    if !is_automorphism(&k) {
        return Err(JordanError::NotAutomorphism);
    }
    Ok(k)
}

/// `inf { l : -l 1 <= x <= l 1 }` by bisection on the order relation.
pub fn order_unit_norm(x: &Element) -> f64 {
    let mut hi = x.coord_norm().max(1.0) * 2.0;
    let mut lo = 0.0;
    let within = |l: f64| -> bool {
        let up = spectral_decompose(&x.scale(-1.0).add_unit(l)).min();
        let down = spectral_decompose(&x.add_unit(l)).min();
        up >= 0.0 && down >= 0.0
    };
    while !within(hi) {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if within(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    hi
}

/// Test points for cone preservation: the unit and `count` random squares.
pub fn cone_test_points(alg: &crate::Algebra, count: usize, rng: &mut impl Rng) -> Vec<Element> {
    let mut pts = vec![Element::unit(alg)];
    pts.extend((0..count).map(|_| sample::element(alg, rng).square().add_unit(1e-3)));
    pts
}

/// `g` maps the unit and 32 seeded random squares into the open cone.
pub fn preserves_cone(g: &VOperator, seed: u64) -> bool {
    let mut rng = sample::rng(seed);
    cone_test_points(g.algebra(), 32, &mut rng).iter().all(|x| in_cone(&g.apply(x)))
}

/// Minimum over `ys` of the trace pairing `<x, y>`.
pub fn min_pairing(x: &Element, ys: &[Element]) -> f64 {
    ys.iter().map(|y| x.inner(y)).fold(f64::INFINITY, f64::min)
}

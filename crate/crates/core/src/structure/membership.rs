use rand::Rng;

use crate::algebra::{Algebra, Element, VOperator};
use crate::error::{JordanError, Result};
use crate::sample;
use crate::tol;

/// Fixed index pairs `(i, j)`, `i < j`, used to probe polarized identities.
///
/// Deterministic in `dim V`, of size `2 dim V` (or all pairs when fewer exist).
pub(crate) fn probe_pairs(dim: usize) -> Vec<(usize, usize)> {
    let total = dim * dim.saturating_sub(1) / 2;
    let want = (2 * dim).min(total);
    if want == total {
        return (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
    }
    let mut rng = sample::rng(0x5eed_0000 ^ dim as u64);
    let mut pairs = Vec::with_capacity(want);
    while pairs.len() < want {
        let i = rng.random_range(0..dim);
        let j = rng.random_range(0..dim);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i != j && !pairs.contains(&(i, j)) {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Residual of `U_{g x} = g U_x g^{-1} U_{g 1}` on basis vectors and probe pairs.
fn one_sided_residual(g: &VOperator, g_inv: &VOperator) -> f64 {
    let alg = g.algebra();
    let u_g1 = g.apply(&Element::unit(alg)).u_op();
    let tail = g_inv.compose(&u_g1);
    let scale = g.norm().max(1.0).powi(3);
    let basis: Vec<Element> = (0..alg.dim()).map(|i| Element::basis(alg, i)).collect();
    let images: Vec<Element> = basis.iter().map(|e| g.apply(e)).collect();
    let mut worst = 0.0_f64;
    for (e, ge) in basis.iter().zip(&images) {
        let lhs = ge.u_op();
        let rhs = g.compose(&e.u_op()).compose(&tail);
        worst = worst.max(lhs.distance(&rhs) / scale);
    }
    for (i, j) in probe_pairs(alg.dim()) {
        let lhs = images[i].u_bilinear(&images[j]).expect("same algebra");
        let rhs = g.compose(&basis[i].u_bilinear(&basis[j]).expect("same algebra")).compose(&tail);
        worst = worst.max(lhs.distance(&rhs) / scale);
    }
    worst
}

/// Structure-group residual of `g`.
///
/// Maximum over the basis and a fixed set of polarized pairs of both
/// `|U_{g x} - g U_x g^{-1} U_{g 1}|` and the same identity for `g^{-1}`,
/// each normalized by `max(1, |g|)^3` (respectively `|g^{-1}|`).
pub fn str_residual(g: &VOperator) -> Result<f64> {
    let g_inv = g.inverse()?;
    Ok(one_sided_residual(g, &g_inv).max(one_sided_residual(&g_inv, g)))
}

/// An operator certified to lie in the structure group, with its adjoint.
#[derive(Debug, Clone)]
pub struct StrElement {
    pub g: VOperator,
    /// `g(1)`.
    pub g1: Element,
    /// `g* = g^{-1} U_{g 1}`.
    pub adj: VOperator,
    pub residual: f64,
}

impl StrElement {
    /// Certify membership at the default membership threshold.
    pub fn new(g: VOperator) -> Result<Self> {
        Self::with_threshold(g, tol::MEMBERSHIP)
    }

    pub fn with_threshold(g: VOperator, threshold: f64) -> Result<Self> {
        let g_inv = g.inverse()?;
        let residual = one_sided_residual(&g, &g_inv).max(one_sided_residual(&g_inv, &g));
        if !(residual <= threshold) {
            return Err(JordanError::NotInStr { residual });
        }
        let g1 = g.apply(&Element::unit(g.algebra()));
        if !g1.is_invertible() {
            return Err(JordanError::NotInStr { residual });
        }
        let adj = g_inv.compose(&g1.u_op());
        Ok(StrElement { g, g1, adj, residual })
    }

    pub fn algebra(&self) -> &Algebra {
        self.g.algebra()
    }

    pub fn inverse(&self) -> Result<StrElement> {
        StrElement::new(self.g.inverse()?)
    }

    pub fn compose(&self, other: &StrElement) -> Result<StrElement> {
        StrElement::new(self.g.compose(&other.g))
    }
}

/// The adjoint `g* = g^{-1} U_{g 1}` of a structure-group element.
pub fn str_adjoint(g: &StrElement) -> VOperator {
    g.adj.clone()
}

/// Adjoint of an arbitrary operator, after certifying membership.
pub fn adjoint_of(g: &VOperator) -> Result<VOperator> {
    StrElement::new(g.clone()).map(|s| s.adj)
}

/// `k` is an automorphism iff it lies in the structure group and fixes the unit.
pub fn is_automorphism(g: &VOperator) -> bool {
    let alg = g.algebra();
    let one = Element::unit(alg);
    let unit_defect = g.apply(&one).max_abs_diff(&one);
    if !(unit_defect <= tol::MEMBERSHIP) {
        return false;
    }
    matches!(str_residual(g), Ok(r) if r <= tol::MEMBERSHIP)
}

/// `max |g(x o y) - g(x) o g(y)|` over random pairs, scaled by operand norms.
pub fn multiplicativity_defect(g: &VOperator, pairs: usize, rng: &mut impl Rng) -> f64 {
    let alg = g.algebra();
    let scale = g.norm().max(1.0).powi(2);
    (0..pairs)
        .map(|_| {
            let x = sample::element(alg, rng);
            let y = sample::element(alg, rng);
            let lhs = g.apply(&x.jordan(&y).expect("same algebra"));
            let rhs = g.apply(&x).jordan(&g.apply(&y)).expect("same algebra");
            lhs.max_abs_diff(&rhs) / (scale * x.coord_norm().max(1.0) * y.coord_norm().max(1.0))
        })
        .fold(0.0, f64::max)
}

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::membership::{is_automorphism, StrElement};
use super::pierce::{central_symmetry_op, centrality_defect, is_central};
use crate::algebra::{Element, VOperator};
use crate::cone::in_cone;
use crate::error::{JordanError, Result};
use crate::spectral::{self, apply_function, ScalarFn};
use crate::tol;

fn require_invertible(x: &Element) -> Result<()> {
    if x.is_invertible() {
        Ok(())
    } else {
        let min_abs = x.eigenvalues().iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
        Err(JordanError::NotInvertible { min_abs })
    }
}

/// `x = v o eps` with `v` positive and `eps` a central symmetry.
///
/// Succeeds exactly when `U_x` is a positive operator. Otherwise the error
/// carries a negative eigenvalue of `U_x`, found on the range of `2U_{p+,p-}`.
pub fn u_positive_decompose(x: &Element) -> Result<(Element, Element)> {
    require_invertible(x)?;
    let p_plus = apply_function(x, ScalarFn::ChiPlus)?;
    if !is_central(&p_plus) {
        let split = u_spectrum_split(x)?;
        let witness = split.zero.iter().copied().fold(f64::INFINITY, f64::min);
        return Err(JordanError::UxNotPositive { witness });
    }
    let p_minus = apply_function(x, ScalarFn::ChiMinus)?;
    let v = &p_plus.jordan(x)? - &p_minus.jordan(x)?;
    let eps = p_plus.scale(2.0).add_unit(-1.0);
    let min_u = spectral::symmetric_spectrum(&x.u_op())[0];
    if !(min_u > 0.0) {
        return Err(JordanError::Inconsistent(format!("chi_+(x) is central but U_x has eigenvalue {min_u:e}")));
    }
    Ok((v, eps))
}

/// Spectrum of `U_x` split along `V = J+ (+) J- (+) J0`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSplit {
    /// On the range of `U_{p+}`.
    pub plus: Vec<f64>,
    /// On the range of `U_{p-}`.
    pub minus: Vec<f64>,
    /// On the range of `2U_{p+,p-}`; non-positive when both parts are present.
    pub zero: Vec<f64>,
}

impl SpectrumSplit {
    pub fn union(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.plus.iter().chain(&self.minus).chain(&self.zero).copied().collect();
        all.sort_by(f64::total_cmp);
        all
    }
}

/// Eigenvalues of `t` restricted to the range of the orthogonal projection `proj`.
fn restricted_spectrum(t: &VOperator, proj: &VOperator) -> Vec<f64> {
    let p = proj.matrix();
    let sym = (p + p.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let cols: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    if cols.is_empty() {
        return Vec::new();
    }
    let q = DMatrix::from_fn(p.nrows(), cols.len(), |r, c| eig.eigenvectors[(r, cols[c])]);
    let restricted = q.transpose() * t.matrix() * &q;
    let restricted = (&restricted + restricted.transpose()) * 0.5;
    let mut v: Vec<f64> = restricted.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn u_spectrum_split(x: &Element) -> Result<SpectrumSplit> {
    require_invertible(x)?;
    let p_plus = apply_function(x, ScalarFn::ChiPlus)?;
    let p_minus = apply_function(x, ScalarFn::ChiMinus)?;
    let ux = x.u_op();
    Ok(SpectrumSplit {
        plus: restricted_spectrum(&ux, &p_plus.u_op()),
        minus: restricted_spectrum(&ux, &p_minus.u_op()),
        zero: restricted_spectrum(&ux, &p_plus.u_bilinear(&p_minus)?.scale(2.0)),
    })
}

/// `g = U_y k` for `g` preserving the cone: `y = sqrt(g(1))`, `k = U_y^{-1} g`.
pub fn go_decompose(g: &StrElement) -> Result<(Element, VOperator)> {
    if !in_cone(&g.g1) {
        return Err(JordanError::NotConePreserving);
    }
    let y = spectral::sqrt(&g.g1)?;
    let k = y.u_op().inverse()?.compose(&g.g);
    if !is_automorphism(&k) {
        return Err(JordanError::NotAutomorphism);
    }
    Ok((y, k))
}

/// Factorization `g = U_v S_p k`.
#[derive(Debug, Clone)]
pub struct StrDecomposition {
    /// Positive part, `v = sqrt(|g(1)|)`.
    pub v: Element,
    /// Central projection labelling the component of `g`.
    pub p: Element,
    /// Automorphism factor.
    pub k: VOperator,
}

impl StrDecomposition {
    pub fn eps(&self) -> Element {
        self.p.scale(2.0).add_unit(-1.0)
    }

    /// `S_p = L_{eps_p}`.
    pub fn s_p(&self) -> VOperator {
        central_symmetry_op(&self.p)
    }

    pub fn recompose(&self) -> VOperator {
        self.v.u_op().compose(&self.s_p()).compose(&self.k)
    }

    /// `g* = g^{-1}` holds exactly when the positive part is the unit.
    pub fn is_involutive(&self) -> bool {
        self.v.max_abs_diff(&Element::unit(self.v.algebra())) <= tol::CLUSTER
    }
}

pub fn str_decompose(g: &StrElement) -> Result<StrDecomposition> {
    let z = &g.g1;
    require_invertible(z)?;
    let p = apply_function(z, ScalarFn::ChiPlus)?;
    if !is_central(&p) {
        return Err(JordanError::CentralityViolation { commutator: centrality_defect(&p) });
    }
    let eps = p.scale(2.0).add_unit(-1.0);
    let abs_z = eps.jordan(z)?;
    let v = spectral::sqrt(&abs_z)?;
    let h = v.u_op().inverse()?.compose(&g.g);
    let k = eps.l_op().compose(&h);
    Ok(StrDecomposition { v, p, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraKind};
    use crate::sample;
    use crate::structure::central_projections;

    fn el(alg: &Algebra, c: &[f64]) -> Element {
        Element::new(alg, c.to_vec()).unwrap()
    }

    #[test]
    fn positive_and_negative_elements() {
        let mut r = sample::rng(1);
        let alg = Algebra::sym(3).unwrap();
        let v = sample::cone_point(&alg, &mut r);
        let (w, eps) = u_positive_decompose(&v).unwrap();
        assert!(w.max_abs_diff(&v) < 1e-12);
        assert!(eps.max_abs_diff(&Element::unit(&alg)) < 1e-14);
        let (w, eps) = u_positive_decompose(&v.scale(-1.0)).unwrap();
        assert!(w.max_abs_diff(&v) < 1e-12);
        assert!(eps.max_abs_diff(&Element::unit(&alg).scale(-1.0)) < 1e-14);
    }

    #[test]
    fn indefinite_diagonal_has_witness_minus_one() {
        let alg = Algebra::sym(2).unwrap();
        match u_positive_decompose(&el(&alg, &[1.0, -1.0, 0.0])) {
            Err(JordanError::UxNotPositive { witness }) => assert!((witness + 1.0).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(u_positive_decompose(&el(&alg, &[1.0, 0.0, 0.0])), Err(JordanError::NotInvertible { .. })));
    }

    #[test]
    fn blockwise_signs_in_direct_sum() {
        let mut r = sample::rng(2);
        let alg = Algebra::sum(vec![AlgebraKind::SymReal(2), AlgebraKind::SymReal(2)]).unwrap();
        let a = sample::cone_point(&Algebra::sym(2).unwrap(), &mut r);
        let b = sample::cone_point(&Algebra::sym(2).unwrap(), &mut r);
        let coords: Vec<f64> = a.as_slice().iter().copied().chain(b.as_slice().iter().map(|c| -c)).collect();
        let x = el(&alg, &coords);
        let (v, eps) = u_positive_decompose(&x).unwrap();
        let v_expect: Vec<f64> = a.as_slice().iter().chain(b.as_slice()).copied().collect();
        assert!(v.max_abs_diff(&el(&alg, &v_expect)) < 1e-12);
        assert!(eps.max_abs_diff(&el(&alg, &[1.0, 1.0, 0.0, -1.0, -1.0, 0.0])) < 1e-14);
        assert!(v.jordan(&eps).unwrap().max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn split_of_diag_one_minus_one() {
        let alg = Algebra::sym(2).unwrap();
        let s = u_spectrum_split(&el(&alg, &[1.0, -1.0, 0.0])).unwrap();
        assert_eq!(s.plus.len(), 1);
        assert_eq!(s.minus.len(), 1);
        assert_eq!(s.zero.len(), 1);
        assert!((s.plus[0] - 1.0).abs() < 1e-14);
        assert!((s.minus[0] - 1.0).abs() < 1e-14);
        assert!((s.zero[0] + 1.0).abs() < 1e-14);
        let v = sample::cone_point(&alg, &mut sample::rng(0));
        let s = u_spectrum_split(&v).unwrap();
        assert_eq!(s.plus.len(), 3);
        assert!(s.minus.is_empty() && s.zero.is_empty());
    }

    #[test]
    fn go_decompose_examples() {
        let mut r = sample::rng(3);
        let alg = Algebra::herm(3).unwrap();
        let x = sample::cone_point(&alg, &mut r);
        let (y, k) = go_decompose(&StrElement::new(x.u_op()).unwrap()).unwrap();
        assert!(y.max_abs_diff(&x) < 1e-10);
        assert!(k.max_abs_diff(&VOperator::identity(&alg)) < 1e-10);
        let aut = sample::automorphism(&alg, &mut r);
        let (y, k) = go_decompose(&StrElement::new(aut.clone()).unwrap()).unwrap();
        assert!(y.max_abs_diff(&Element::unit(&alg)) < 1e-12);
        assert!(k.max_abs_diff(&aut) < 1e-12);
        let neg = StrElement::new(VOperator::identity(&alg).scale(-1.0)).unwrap();
        assert!(matches!(go_decompose(&neg), Err(JordanError::NotConePreserving)));
    }

    #[test]
    fn minus_identity_is_s_zero() {
        let alg = Algebra::sym(3).unwrap();
        let g = StrElement::new(VOperator::identity(&alg).scale(-1.0)).unwrap();
        let d = str_decompose(&g).unwrap();
        assert!(d.v.max_abs_diff(&Element::unit(&alg)) < 1e-14);
        assert!(d.p.coord_norm() < 1e-14);
        assert!(d.k.max_abs_diff(&VOperator::identity(&alg)) < 1e-14);
        assert!(d.is_involutive());
    }

    #[test]
    fn round_trip_over_all_central_projections() {
        let mut r = sample::rng(4);
        let alg = Algebra::sum(vec![AlgebraKind::SymReal(2), AlgebraKind::SymReal(2)]).unwrap();
        for p in central_projections(&alg) {
            let v = sample::cone_point(&alg, &mut r);
            let k = sample::automorphism(&alg, &mut r);
            let g = v.u_op().compose(&central_symmetry_op(&p)).compose(&k);
            let d = str_decompose(&StrElement::new(g.clone()).unwrap()).unwrap();
            assert!(d.p.max_abs_diff(&p) < 1e-12);
            assert!(d.v.max_abs_diff(&v) < 1e-9);
            assert!(d.k.max_abs_diff(&k) < 1e-9);
            assert!(d.recompose().max_abs_diff(&g) < 1e-9);
        }
    }
}

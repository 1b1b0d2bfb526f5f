//! Homotopes `V_u` with product `x ._u y = U_{x,y}(u)`, and isotopes for invertible `u`.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{ensure_same, Algebra, Element, VOperator};
use crate::error::{JordanError, Result};
use crate::sample;
use crate::spectral::spectral_decompose;
use crate::structure::{str_decompose, u_positive_decompose, StrElement};

/// The homotope of `base` at `u`, kept as the pair `(base, u)`.
#[derive(Debug, Clone)]
pub struct HomotopeAlgebra {
    base: Algebra,
    u: Element,
    unit_u: Option<Element>,
}

impl HomotopeAlgebra {
    pub fn new(u: Element) -> Self {
        let unit_u = u.inverse().ok();
        HomotopeAlgebra { base: u.algebra().clone(), u, unit_u }
    }

    pub fn base(&self) -> &Algebra {
        &self.base
    }

    pub fn u(&self) -> &Element {
        &self.u
    }

    /// `1_u = u^{-1}`, present only for isotopes.
    pub fn unit(&self) -> Option<&Element> {
        self.unit_u.as_ref()
    }

    pub fn is_isotope(&self) -> bool {
        self.unit_u.is_some()
    }

    fn unit_or_err(&self) -> Result<&Element> {
        self.unit_u.as_ref().ok_or_else(|| JordanError::NotInvertible { min_abs: min_abs_eigen(&self.u) })
    }

    pub fn product(&self, x: &Element, y: &Element) -> Result<Element> {
        ensure_same(&self.base, x.algebra())?;
        ensure_same(&self.base, y.algebra())?;
        Ok(x.u_bilinear(y)?.apply(&self.u))
    }

    /// `x^{2_u} = U_x u`.
    pub fn square(&self, x: &Element) -> Result<Element> {
        self.product(x, x)
    }

    /// `U^u_x = U_x U_u`.
    pub fn u_op(&self, x: &Element) -> Result<VOperator> {
        ensure_same(&self.base, x.algebra())?;
        Ok(x.u_op().compose(&self.u.u_op()))
    }

    /// `L^u_x y = x ._u y`.
    pub fn l_op(&self, x: &Element) -> Result<VOperator> {
        ensure_same(&self.base, x.algebra())?;
        Ok(VOperator::from_fn(&self.base, |y| x.u_bilinear(y).expect("same algebra").apply(&self.u)))
    }

    /// Residual of the Jordan identity `(x . y) . x^2 = x . (y . x^2)` in `V_u`.
    pub fn jordan_identity_defect(&self, x: &Element, y: &Element) -> Result<f64> {
        let x2 = self.square(x)?;
        let lhs = self.product(&self.product(x, y)?, &x2)?;
        let rhs = self.product(x, &self.product(y, &x2)?)?;
        let scale = (x.coord_norm().max(1.0).powi(3)) * y.coord_norm().max(1.0) * self.u.coord_norm().max(1.0).powi(3);
        Ok(lhs.max_abs_diff(&rhs) / scale)
    }
}

fn min_abs_eigen(x: &Element) -> f64 {
    x.eigenvalues().iter().fold(f64::INFINITY, |m, l| m.min(l.abs()))
}

/// `x^{-1_u} = U_u^{-1} x^{-1}`.
pub fn isotope_inverse(h: &HomotopeAlgebra, x: &Element) -> Result<Element> {
    ensure_same(h.base(), x.algebra())?;
    h.unit_or_err()?;
    let xi = x.inverse()?;
    let uu = h.u.u_op().inverse().map_err(|_| JordanError::NotInvertible { min_abs: min_abs_eigen(&h.u) })?;
    Ok(uu.apply(&xi))
}

/// Spectrum of `w = g(z)` in the isotope `V_{g(1)^{-1}}`, with multiplicity.
///
/// With `g(1) = v^2 o eps_p` (`v` positive, `p` central) the element
/// `w - l g(1) = U_v(U_{v^{-1}} w - l eps_p)` is non-invertible exactly when
/// `l` is an eigenvalue of `eps_p o U_{v^{-1}} w` in the base algebra.
pub fn isotope_spectrum(g: &StrElement, z: &Element) -> Result<Vec<f64>> {
    ensure_same(g.algebra(), z.algebra())?;
    let w = g.g.apply(z);
    isotope_spectrum_of(g, &w)
}

/// Isotope spectrum of an arbitrary `w` in `V_{g(1)^{-1}}`.
pub fn isotope_spectrum_of(g: &StrElement, w: &Element) -> Result<Vec<f64>> {
    let d = str_decompose(g)?;
    let reduced = d.eps().jordan(&d.v.inverse()?.u_op().apply(w))?;
    Ok(spectral_decompose(&reduced).with_multiplicity())
}

/// `g(z)` lies in the isotope cone `g(Omega)`.
pub fn isotope_positive(g: &StrElement, z: &Element, tol: f64) -> Result<bool> {
    Ok(isotope_spectrum(g, z)?.iter().all(|&l| l > tol))
}

/// Outcome of the isotope-isomorphism test for `V_u`.
#[derive(Debug, Clone, Serialize)]
pub struct IsotopeIsomorphism {
    pub isomorphic: bool,
    /// `U_{v^{-1}} L_{eps_p}` with `u = v^2 o eps_p`.
    #[serde(skip)]
    pub witness: Option<VOperator>,
    /// Most negative eigenvalue of `U_u` when not isomorphic.
    pub ux_witness: Option<f64>,
}

pub fn isotope_isomorphic(u: &Element) -> Result<IsotopeIsomorphism> {
    if !u.is_invertible() {
        return Err(JordanError::NotInvertible { min_abs: min_abs_eigen(u) });
    }
    match u_positive_decompose(u) {
        Ok((w, eps)) => {
            // u = w o eps with w positive, so v = sqrt(w)
            let v = crate::spectral::sqrt(&w)?;
            let g = v.inverse()?.u_op().compose(&eps.l_op());
            Ok(IsotopeIsomorphism { isomorphic: true, witness: Some(g), ux_witness: None })
        }
        Err(JordanError::UxNotPositive { witness }) => {
            Ok(IsotopeIsomorphism { isomorphic: false, witness: None, ux_witness: Some(witness) })
        }
        Err(e) => Err(e),
    }
}

/// `max |g(x o y) - g(x) ._u g(y)|` over random pairs, scaled by operand norms.
pub fn isomorphism_defect(g: &VOperator, h: &HomotopeAlgebra, pairs: usize, rng: &mut impl Rng) -> f64 {
    let alg = h.base();
    let scale = g.norm().max(1.0).powi(2) * h.u.coord_norm().max(1.0);
    (0..pairs)
        .map(|_| {
            let x = sample::element(alg, rng);
            let y = sample::element(alg, rng);
            let lhs = g.apply(&x.jordan(&y).expect("same algebra"));
            let rhs = h.product(&g.apply(&x), &g.apply(&y)).expect("same algebra");
            lhs.max_abs_diff(&rhs) / (scale * x.coord_norm().max(1.0) * y.coord_norm().max(1.0))
        })
        .fold(0.0, f64::max)
}

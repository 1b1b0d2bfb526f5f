use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;

use super::descriptor::{Algebra, CMatrix};
use super::operator::VOperator;
use crate::error::{JordanError, Result};
use crate::tol;

/// A point of `V` given by its coordinates in the algebra's fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: Algebra,
    coords: DVector<f64>,
}

pub(crate) fn ensure_same(a: &Algebra, b: &Algebra) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(JordanError::AlgebraMismatch { left: a.to_string(), right: b.to_string() })
    }
}

impl Element {
    pub fn new(algebra: &Algebra, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(JordanError::DimensionMismatch { expected: algebra.dim(), got: coords.len() });
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(JordanError::NonFinite { index });
        }
        Ok(Self::from_vector(algebra, DVector::from_vec(coords)))
    }

    pub(crate) fn from_vector(algebra: &Algebra, coords: DVector<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Element { algebra: algebra.clone(), coords }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::from_vector(algebra, DVector::zeros(algebra.dim()))
    }

    pub fn unit(algebra: &Algebra) -> Self {
        Self::from_vector(algebra, DVector::from_column_slice(algebra.unit_coords()))
    }

    pub fn basis(algebra: &Algebra, i: usize) -> Self {
        let mut c = DVector::zeros(algebra.dim());
        c[i] = 1.0;
        Self::from_vector(algebra, c)
    }

    /// Element of a single-block matrix algebra from a Hermitian matrix.
    ///
    /// Only the Hermitian part of `m` is kept; for `SymReal` only its real part.
    pub fn from_matrix(algebra: &Algebra, m: &CMatrix) -> Result<Self> {
        let [block] = algebra.blocks() else {
            return Err(JordanError::UnsupportedAlgebra(format!("{algebra} is not a single matrix algebra")));
        };
        let super::descriptor::Simple::Matrix { n, .. } = block.simple else {
            return Err(JordanError::UnsupportedAlgebra(format!("{algebra} is not a matrix algebra")));
        };
        if m.nrows() != n || m.ncols() != n {
            return Err(JordanError::DimensionMismatch { expected: n, got: m.nrows() });
        }
        let mut c = vec![0.0; algebra.dim()];
        block.write_matrix(m, &mut c);
        Self::new(algebra, c)
    }

    /// Matrix form, for single-block matrix algebras.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        match self.algebra.blocks() {
            [block] if matches!(block.simple, super::descriptor::Simple::Matrix { .. }) => {
                Ok(block.to_matrix(self.coords.as_slice()))
            }
            _ => Err(JordanError::UnsupportedAlgebra(format!("{} is not a single matrix algebra", self.algebra))),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, a: f64) -> Element {
        Self::from_vector(&self.algebra, &self.coords * a)
    }

    /// `x + a 1`.
    pub fn add_unit(&self, a: f64) -> Element {
        let mut c = self.coords.clone();
        for (ci, ui) in c.iter_mut().zip(self.algebra.unit_coords()) {
            *ci += a * ui;
        }
        Self::from_vector(&self.algebra, c)
    }

    /// Jordan product `x o y`.
    pub fn jordan(&self, other: &Element) -> Result<Element> {
        ensure_same(&self.algebra, &other.algebra)?;
        let mut out = vec![0.0; self.algebra.dim()];
        for b in self.algebra.blocks() {
            b.product(b.slice(self.as_slice()), b.slice(other.as_slice()), b.slice_mut(&mut out));
        }
        Ok(Self::from_vector(&self.algebra, DVector::from_vec(out)))
    }

    pub fn square(&self) -> Element {
        self.jordan(self).expect("same algebra")
    }

    /// `L_x`: the multiplication operator `y -> x o y`.
    pub fn l_op(&self) -> VOperator {
        let dim = self.algebra.dim();
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        for b in self.algebra.blocks() {
            let xs = b.slice(self.as_slice());
            let mut view = m.view_mut((b.offset, b.offset), (b.dim, b.dim));
            for (&x, lk) in xs.iter().zip(b.basis_l()) {
                if x != 0.0 {
                    view += lk * x;
                }
            }
        }
        VOperator::from_matrix_unchecked(&self.algebra, m)
    }

    /// Quadratic representation `U_x = 2 L_x^2 - L_{x^2}`.
    pub fn u_op(&self) -> VOperator {
        let l = self.l_op();
        let l2 = l.compose(&l);
        &l2.scale(2.0) - &self.square().l_op()
    }

    /// `U_{x,y} = L_x L_y + L_y L_x - L_{x o y}`.
    pub fn u_bilinear(&self, other: &Element) -> Result<VOperator> {
        let xy = self.jordan(other)?;
        let lx = self.l_op();
        let ly = other.l_op();
        Ok(&(&lx.compose(&ly) + &ly.compose(&lx)) - &xy.l_op())
    }

    /// Trace form `<x, y>`.
    pub fn inner(&self, other: &Element) -> f64 {
        assert_eq!(self.algebra, other.algebra, "inner product across algebras");
        self.algebra.blocks().iter().map(|b| b.inner(b.slice(self.as_slice()), b.slice(other.as_slice()))).sum()
    }

    /// Euclidean norm of the coordinate vector (the trace-form norm on matrix blocks).
    pub fn coord_norm(&self) -> f64 {
        self.coords.norm()
    }

    /// Ascending eigenvalues with multiplicity (Jordan spectrum).
    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::spectral::raw_eigenvalues(self)
    }

    /// Order-unit norm, equal to the spectral radius.
    pub fn norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }

    pub fn is_invertible(&self) -> bool {
        let eig = self.eigenvalues();
        let min_abs = eig.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
        let scale = eig.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
        min_abs > tol::INVERTIBILITY * scale
    }

    /// Jordan inverse, computed as `U_x^{-1} x`.
    pub fn inverse(&self) -> Result<Element> {
        let eig = self.eigenvalues();
        let min_abs = eig.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
        let scale = eig.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
        if !(min_abs > tol::INVERTIBILITY * scale) {
            return Err(JordanError::NotInvertible { min_abs });
        }
        let u_inv = self.u_op().inverse().map_err(|_| JordanError::NotInvertible { min_abs })?;
        Ok(u_inv.apply(self))
    }

    /// `max_i |x_i - y_i|`.
    pub fn max_abs_diff(&self, other: &Element) -> f64 {
        (&self.coords - &other.coords).amax()
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in +");
        Element::from_vector(&self.algebra, &self.coords + &rhs.coords)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in -");
        Element::from_vector(&self.algebra, &self.coords - &rhs.coords)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::from_vector(&self.algebra, -&self.coords)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use super::descriptor::Algebra;
use super::element::{ensure_same, Element};
use crate::error::{JordanError, Result};

/// A real linear operator on `V`, as a `dim V x dim V` matrix in the fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct VOperator {
    algebra: Algebra,
    matrix: DMatrix<f64>,
}

impl VOperator {
    pub fn new(algebra: &Algebra, matrix: DMatrix<f64>) -> Result<Self> {
        let d = algebra.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(JordanError::DimensionMismatch { expected: d, got: matrix.nrows().max(matrix.ncols()) });
        }
        if let Some(index) = matrix.iter().position(|v| !v.is_finite()) {
            return Err(JordanError::NonFinite { index });
        }
        Ok(Self::from_matrix_unchecked(algebra, matrix))
    }

    pub(crate) fn from_matrix_unchecked(algebra: &Algebra, matrix: DMatrix<f64>) -> Self {
        VOperator { algebra: algebra.clone(), matrix }
    }

    pub fn identity(algebra: &Algebra) -> Self {
        Self::from_matrix_unchecked(algebra, DMatrix::identity(algebra.dim(), algebra.dim()))
    }

    pub fn zeros(algebra: &Algebra) -> Self {
        Self::from_matrix_unchecked(algebra, DMatrix::zeros(algebra.dim(), algebra.dim()))
    }

    /// Build an operator column by column from its action on basis vectors.
    pub fn from_fn(algebra: &Algebra, mut f: impl FnMut(&Element) -> Element) -> Self {
        let d = algebra.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            let image = f(&Element::basis(algebra, i));
            m.set_column(i, image.coords());
        }
        Self::from_matrix_unchecked(algebra, m)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn apply(&self, x: &Element) -> Element {
        assert_eq!(&self.algebra, x.algebra(), "operator applied across algebras");
        Element::from_vector(&self.algebra, &self.matrix * x.coords())
    }

    pub fn try_apply(&self, x: &Element) -> Result<Element> {
        ensure_same(&self.algebra, x.algebra())?;
        Ok(self.apply(x))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &VOperator) -> VOperator {
        assert_eq!(self.algebra, other.algebra, "composition across algebras");
        Self::from_matrix_unchecked(&self.algebra, &self.matrix * &other.matrix)
    }

    pub fn scale(&self, a: f64) -> VOperator {
        Self::from_matrix_unchecked(&self.algebra, &self.matrix * a)
    }

    pub fn inverse(&self) -> Result<VOperator> {
        let lu = self.matrix.clone().lu();
        let inv = lu.try_inverse().ok_or(JordanError::SingularOperator)?;
        if inv.iter().any(|v| !v.is_finite()) {
            return Err(JordanError::SingularOperator);
        }
        Ok(Self::from_matrix_unchecked(&self.algebra, inv))
    }

    /// Transpose; the adjoint for the trace form since the basis is orthogonal.
    pub fn transpose(&self) -> VOperator {
        Self::from_matrix_unchecked(&self.algebra, self.matrix.transpose())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Spectral (2-)norm.
    pub fn op_norm(&self) -> f64 {
        if self.matrix.is_empty() {
            return 0.0;
        }
        self.matrix.clone().svd(false, false).singular_values.max()
    }

    pub fn max_abs_diff(&self, other: &VOperator) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }

    /// `|self - other|_F`.
    pub fn distance(&self, other: &VOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// Matrix exponential (scaling and squaring with Pade approximants).
    pub fn exp(&self) -> VOperator {
        Self::from_matrix_unchecked(&self.algebra, self.matrix.clone().exp())
    }

    pub fn column(&self, i: usize) -> Element {
        Element::from_vector(&self.algebra, DVector::from(self.matrix.column(i)))
    }

    pub fn commutator(&self, other: &VOperator) -> VOperator {
        &self.compose(other) - &other.compose(self)
    }
}

impl Add for &VOperator {
    type Output = VOperator;
    fn add(self, rhs: &VOperator) -> VOperator {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in +");
        VOperator::from_matrix_unchecked(&self.algebra, &self.matrix + &rhs.matrix)
    }
}

impl Sub for &VOperator {
    type Output = VOperator;
    fn sub(self, rhs: &VOperator) -> VOperator {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in -");
        VOperator::from_matrix_unchecked(&self.algebra, &self.matrix - &rhs.matrix)
    }
}

impl Neg for &VOperator {
    type Output = VOperator;
    fn neg(self) -> VOperator {
        VOperator::from_matrix_unchecked(&self.algebra, -&self.matrix)
    }
}

impl Mul for &VOperator {
    type Output = VOperator;
    fn mul(self, rhs: &VOperator) -> VOperator {
        self.compose(rhs)
    }
}

impl Mul<&Element> for &VOperator {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.apply(rhs)
    }
}

//! Finite-dimensional JB-algebras and their structure group.
//!
//! Supported algebras are real symmetric and complex Hermitian matrices, spin
//! factors and finite direct sums of these. Elements and operators are stored
//! as real coordinates in a fixed basis; every operation is a pure function.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cone;
pub mod error;
pub mod fixture;
pub mod herm;
pub mod isotope;
pub mod sample;
pub mod spectral;
pub mod structure;
pub mod suite;
pub mod tol;

pub use algebra::{Algebra, AlgebraKind, CMatrix, Element, RMatrix, VOperator};
pub use error::{JordanError, Result};
pub use spectral::{apply_function, hull_check, operator_spectrum, spectral_decompose, ScalarFn, SpectralData};

//! Supported algebras and the basic Jordan operator calculus.

mod descriptor;
mod element;
mod operator;

pub(crate) use descriptor::Simple;
pub use descriptor::{Algebra, AlgebraKind, CMatrix, RMatrix};
pub(crate) use element::ensure_same;
pub use element::Element;
pub use operator::VOperator;

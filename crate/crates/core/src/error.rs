use thiserror::Error;

pub type Result<T, E = JordanError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JordanError {
    #[error("operands belong to different algebras ({left} vs {right})")]
    AlgebraMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),

    #[error("element is not invertible (min |eigenvalue| = {min_abs:e})")]
    NotInvertible { min_abs: f64 },

    #[error("function `{function}` is undefined at eigenvalue {eigenvalue:e}")]
    DomainViolation { function: &'static str, eigenvalue: f64 },

    #[error("element is not in the positive cone (min eigenvalue = {min_eigenvalue:e})")]
    NotInCone { min_eigenvalue: f64 },

    #[error("operator does not preserve the positive cone")]
    NotConePreserving,

    #[error("operator is singular")]
    SingularOperator,

    #[error("operator is not in the structure group (residual {residual:e})")]
    NotInStr { residual: f64 },

    #[error("element is not idempotent (|p^2 - p| = {defect:e})")]
    NotIdempotent { defect: f64 },

    #[error("U_x is not a positive operator: negative eigenvalue {witness:e}")]
    UxNotPositive { witness: f64 },

    #[error("projection extracted from g(1) fails the centrality test (commutator {commutator:e})")]
    CentralityViolation { commutator: f64 },

    #[error("operator is not in the structure Lie algebra (residual {residual:e})")]
    NotInLieAlgebra { residual: f64 },

    #[error("operator is not a derivation: {0}")]
    NotDerivation(String),

    #[error("least-squares solve is inconsistent (residual {residual:e})")]
    InconsistentSolve { residual: f64 },

    #[error("operator is not an automorphism")]
    NotAutomorphism,

    #[error("all sampled witness pairs commute; component undecidable")]
    UndecidableWitness,

    #[error(
        "automorphism is outside the lift neighborhood (|k - id| = {to_identity:.4}, |k - j| = {to_transpose:.4})"
    )]
    OutOfNeighborhood { to_identity: f64, to_transpose: f64 },

    #[error("lift failed verification (residual {residual:e})")]
    LiftFailure { residual: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("inconsistent classification: {0}")]
    Inconsistent(String),
}

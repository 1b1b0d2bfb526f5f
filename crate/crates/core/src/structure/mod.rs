//! The structure group `Str(V)`, its Lie algebra, Pierce decompositions and
//! the factorization `g = U_v S_p k`.

mod factor;
mod lie;
mod membership;
mod pierce;

pub use factor::{
    go_decompose, str_decompose, u_positive_decompose, u_spectrum_split, SpectrumSplit, StrDecomposition,
};
pub use lie::{derivation_defect, lie_conjugate, lie_split, str_lie_residual};
pub use membership::{adjoint_of, is_automorphism, multiplicativity_defect, str_adjoint, str_residual, StrElement};
pub use pierce::{
    central_atoms, central_projections, central_symmetry_op, centrality_defect, idempotent_identities, is_central,
    pierce_decompose, PierceDecomposition, PierceDims,
};

//! Numerical thresholds shared by every module.
//!
//! Residuals are always compared after scaling by the operand norms, so the
//! same constants apply across algebras up to `dim V = 64`.

/// Default residual tolerance.
pub const TOL: f64 = 1e-9;

/// Relative spectral cutoff below which an element counts as singular.
pub const INVERTIBILITY: f64 = 1e-8;

/// Eigenvalues closer than this (relative to `max(1, |x|)`) share one idempotent.
pub const CLUSTER: f64 = 1e-7;

/// Threshold on commutators `[L_p, L_e]` when deciding centrality.
pub const CENTRALITY: f64 = 1e-7;

/// Threshold for structure-group and Lie-algebra membership predicates.
///
/// Looser than [`TOL`]: membership is decided on operators that were
/// themselves produced by inversions and square roots.
pub const MEMBERSHIP: f64 = 1e-7;

/// Environment variable that overrides [`TOL`] in the command-line tools.
pub const TOL_ENV: &str = "JORDAN_CONE_TOL";

/// Resolve the residual tolerance: explicit value, then environment, then default.
pub fn resolve(explicit: Option<f64>) -> f64 {
    explicit
        .or_else(|| std::env::var(TOL_ENV).ok().and_then(|s| s.trim().parse().ok()))
        .filter(|t: &f64| t.is_finite() && *t > 0.0)
        .unwrap_or(TOL)
}

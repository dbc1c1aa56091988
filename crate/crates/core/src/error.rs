//! Error types shared by the solver stack.

use thiserror::Error;

/// Errors surfaced by the equilibrium solvers and field assembly.
#[derive(Debug, Error)]
pub enum GsError {
    /// The boundary map rho -> (1 + eps B(theta)) rho is not invertible.
    #[error("domain map degenerate: min(1+eps*B) = {min_scale} below 0.5")]
    MapDegenerate { min_scale: f64 },

    /// Profile does not satisfy the sign conditions of its family.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// The admissibility condition a R^2 - 3 b > 0 fails for the generic family.
    #[error("inadmissible major radius: a*R^2 - 3*b = {margin} must be positive")]
    InadmissibleR { margin: f64 },

    /// Newton iteration for the Dirichlet problem failed to converge.
    #[error("Newton diverged after {iterations} iterations, residual {residual}")]
    NewtonDiverged { iterations: usize, residual: f64 },

    /// Quasi-Newton shape iteration failed to converge.
    #[error("shape iteration diverged after {iterations} iterations: {reason}")]
    ShapeDiverged { iterations: usize, reason: String },

    /// Denominator c2 of the compatibility constant vanished.
    #[error("degenerate denominator in c_eps_B: c1 = {c1}, c2 = {c2}")]
    DegenerateDenominator { c1: f64, c2: f64 },

    /// The frozen shape linearization is singular (a R^2 = 3 b).
    #[error("shape linearization not invertible: a*R^2 - 3*b = 0")]
    NotInvertible,

    /// eps^2 F_R + Ftilde(psi) lost positivity somewhere on the domain.
    #[error("negative radicand in F(psi) at (r, z) = ({r}, {z}): {value}")]
    NegativeRadicand { r: f64, z: f64, value: f64 },

    /// Quadrature grid too coarse to resolve the boundary discontinuity.
    #[error("grid too coarse: boundary layer resolved by {cells} cells, need at least 8")]
    GridTooCoarse { cells: usize },
}

/// Crate result type.
pub type Result<V> = std::result::Result<V, GsError>;

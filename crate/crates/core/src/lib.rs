//! Function-space norms on the unit disc for finite Blaschke products and
//! rational functions without poles in the closed disc.
//!
//! The crate computes radial-weighted Bergman norms `A_p(alpha)`, the
//! derivative seminorms `A_p^1(alpha)`, Besov seminorms `B_p` (including the
//! higher-derivative branch for `p <= 1`), the Bloch norm, two computable
//! BMOA surrogates (a boundary-sup upper bound and the Garsia seminorm), and
//! the comparison integral
//!
//! ```text
//! I_{p,alpha}(T) = ∫_D (1-|u|^2)^alpha ((1-|T(u)|^2)/(1-|u|^2))^p dA(u)
//! ```
//!
//! for inner functions `T` that are finite Blaschke products (possibly times
//! a power of `z`). On top of the norms, [`verify`] packages one checker per
//! inequality relating these quantities (Dyn'kin-type bounds, Peller-type
//! inequalities with their explicit constants, Hardy's weighted inequality,
//! critical-exponent and sharpness sweeps), each producing a machine-readable
//! [`verify::CheckReport`].
//!
//! All integration goes through [`quadrature`]: Gauss-Jacobi rules in the
//! squared radius tensored with trapezoid rules on the circle, refined by
//! doubling until an a-posteriori error estimate meets the requested
//! tolerance. Grid evaluation may fan out over threads; reductions are
//! compensated and fixed-order, so results are bit-identical for any thread
//! count.

pub mod analytic;
pub mod blaschke;
pub mod norms;
pub mod quadrature;
pub mod rational;
pub mod special;
pub mod verify;

pub use analytic::{AnalyticFn, JetValue};
pub use blaschke::BlaschkeProduct;
pub use num_complex::Complex64;
pub use quadrature::{IntegrationResult, QuadratureSpec};
pub use rational::{ModelSpaceTag, RationalFunction};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An evaluation point or function parameter lies outside the domain of
    /// the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural parameter (degree, radius, node count, ...) is invalid.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// An adaptive rule hit its refinement cap before the requested relative
    /// tolerance was met.
    #[error("quadrature did not converge: error estimate {estimate:e} after {refinements} refinements")]
    NoConverge { estimate: f64, refinements: u32 },

    /// The symmetric tridiagonal eigensolver behind the Gauss rules failed.
    #[error("eigenvalue iteration failed to converge")]
    EigenFail,

    /// A function claimed to lie in a model space fails the numerical
    /// orthogonality test against `Theta * z^power`.
    #[error("model-space membership violated: |<f, Theta z^{power}>| = {inner:e}")]
    Membership { power: usize, inner: f64 },

    /// A sweep has too few (or non-increasing, or non-positive) data points
    /// to fit an exponent.
    #[error("degenerate sweep: {0}")]
    DegenerateSweep(String),

    /// Unknown check name in a manifest or on the command line.
    #[error("unknown check: {0}")]
    UnknownCheck(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

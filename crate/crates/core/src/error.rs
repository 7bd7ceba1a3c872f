//! Error taxonomy shared by every module of the crate.
//!
//! Variants correspond one-to-one to the failure modes a caller can act on;
//! the CLI maps them to distinct exit codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A deformation profile evaluated to a negative value. `f²` is a squared
    /// dressing and must be nonnegative everywhere it is used.
    #[error("deformation profile is negative at (na={na}, nb={nb}): f² = {value}")]
    NegativeDeformation { na: usize, nb: usize, value: f64 },

    /// A joint `f²(na, nb)` was requested from a per-mode (separable) profile,
    /// or a per-mode factor from a jointly-entangled one, or a Hamiltonian
    /// form was paired with a profile that cannot supply it.
    #[error("separability misuse: {0}")]
    SeparableMisuse(String),

    /// The fringe-contrast series was requested for a profile that is not
    /// declared exchange-symmetric. The scalar contrast reading assumes a
    /// symmetric profile; callers may override explicitly.
    #[error("deformation profile is not declared exchange-symmetric; contrast is complex-valued in this regime")]
    NotSymmetric,

    /// No truncation order at or below the cap meets the weight-tail target.
    #[error("truncation cap {cap} exceeded: mean occupation {alpha_sq} needs more terms for epsilon {epsilon}")]
    CapExceeded { alpha_sq: f64, epsilon: f64, cap: usize },

    /// A truncated state vector left too much probability outside the kept box.
    #[error("state truncation tail {deficit:.3e} exceeds limit {limit:.3e} at n_max {n_max}")]
    TailTooLarge { deficit: f64, limit: f64, n_max: usize },

    /// An operational contrast was requested where the total intensity vanishes.
    #[error("intensity vanishes; operational contrast is undefined")]
    ZeroIntensity,

    /// Scenario or policy parameters are outside their domain.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A deformation profile failed validation over its requested range.
    #[error("deformation validation failed: {0}")]
    ValidationFailed(String),
}

//! Interference of two-mode deformed bosonic fields prepared in coherent states.
//!
//! A deformed mode is described by dressed ladder operators `Â = â·f(n̂ₐ,n̂_b)`,
//! where the deformation profile `f` is a real function of the number operators.
//! The free Hamiltonian of two such modes is diagonal in the joint Fock basis,
//! so single-time interference observables reduce to Poisson-weighted phase
//! sums over occupation pairs.
//!
//! The crate is organised around two independent evaluation routes for the same
//! observables:
//!
//! * [`series`] sums the closed double series for the interference contrast
//!   `V(t)` and the screen intensity directly, with certified truncation.
//! * [`oracle`] evolves an explicit truncated two-mode state vector and reads
//!   the same observables from `⟨a†b⟩`, `⟨n̂ₐ⟩` and `⟨n̂_b⟩`.
//!
//! The two routes share only the deformation profile and the diagonal
//! Hamiltonian; agreement between them is the main correctness check and is
//! exercised by the acceptance suite and the `oracle-check` CLI subcommand.
//!
//! Supporting modules: [`deformation`] (profile catalogue and validation),
//! [`hamiltonian`] (diagonal energies and the phase exponent that drives the
//! fringe dynamics), [`analysis`] (operational fringe contrast and
//! collapse/revival detection).

pub mod analysis;
pub mod deformation;
pub mod error;
pub mod hamiltonian;
mod numerics;
pub mod oracle;
pub mod series;

pub use analysis::{detect_revivals, fringe_scan, FringeScan, RevivalReport};
pub use deformation::{Deformation, DeformationSpec, EntangledRule, ModeRule, ValidationReport};
pub use error::{Error, Result};
pub use hamiltonian::{DiagonalHamiltonian, HamiltonianForm};
pub use oracle::FockState2;
pub use series::{
    intensity, truncation_order, undeformed_intensity, visibility, visibility_allow_asymmetric,
    CoherentScenario, TruncationPolicy, VisibilityCurve, VisibilityPoint,
};

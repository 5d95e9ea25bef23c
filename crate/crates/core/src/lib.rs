//! Entanglement of two-qubit X-states from spin-1/2 Heisenberg chains.
//!
//! Three routes to the same number are provided and cross-checked:
//!
//! * the Hilbert-Schmidt distance from a state to the separable set,
//! * the maximal violation of a generalized Bell inequality built from the
//!   optimal witness operator,
//! * the Wootters concurrence computed from the full spin-flipped spectrum.
//!
//! The [`chain`] module produces the X-states from thermal states of the
//! isotropic Heisenberg chain by exact diagonalization; [`oracle`] holds the
//! brute-force minimizers used to audit the closed forms.

pub mod chain;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod oracle;
pub mod sweep;
pub mod verify;
pub mod xstate;

pub use chain::{Boundary, ChainSpec, ThermalChain, ThermalPoint};
pub use entanglement::{BellOperator, EntanglementReport};
pub use error::{Error, Result};
pub use linalg::{CMatrix, Eigen, HermitianMatrix};
pub use num_complex::Complex64;
pub use oracle::{MinimizationResult, PsdConstraint, SeparableFamily, WitnessAudit, XStateClass};
pub use sweep::{Spacing, SweepRecord};
pub use xstate::{Correlators, PptVerdict, XState};

//! Momentum-space operator algebra for zero-mass spin-1/2 wave equations.
//!
//! The crate builds every operator used to classify the massless Dirac
//! equation with Poincaré-invariant subsidiary conditions (chirality,
//! helicity and energy-sign projectors and their lattice), checks their
//! invariance and discrete-symmetry properties numerically, and emits
//! deterministic verification reports.

pub mod config;
pub mod discrete;
pub mod emit;
pub mod equivalence;
pub mod error;
pub mod gamma;
pub mod irrep;
pub mod matrix;
pub mod modes;
pub mod momentum;
pub mod poincare;
pub mod report;
pub mod so4;
pub mod suites;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Subspace};
pub use momentum::{Momentum3, OperatorField};
pub use report::{Check, Expectation, VerificationReport};

//! Numerical engine for spontaneously broken gauge theories.
//!
//! Given the action of a compact gauge algebra on a multiplet space and an
//! invariant Higgs potential, this crate computes the symmetry-breaking
//! spectrum (gauge-boson masses, Goldstone/Higgs split, unbroken subalgebra),
//! rotates Higgs fields into unitary gauge, checks Yukawa and fermion mass-form
//! invariance, and measures gauge covariance of discretised field operators.

pub mod breaking;
pub mod chiral;
pub mod electroweak;
pub mod error;
pub mod expm;
pub mod higgs;
pub mod lattice;
pub mod lie;
pub mod linalg;
pub mod registry;
pub mod unitary;

pub use error::{Result, SsbError};

//! Numerical toolkit for Krein spaces: angular operators of definite
//! subspaces, self-adjoint contractive extensions and the Krein interval,
//! the metric induced by a positive operator `G`, a sequence-space family of
//! partial contractions, and non-Hermitian quasi-bases with their
//! `C`-symmetries.

pub mod angular;
pub mod cli;
pub mod error;
pub mod extension;
pub mod gspace;
pub mod indefinite;
pub mod json;
pub mod linalg;
pub mod model;
pub mod quasi_basis;
pub mod sampling;
pub mod verify;

pub use error::{KreinError, Result};

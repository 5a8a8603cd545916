//! Numerical toolkit for concentrating standing waves of coupled cubic
//! elliptic systems: scalar ground states with certified exponential tails,
//! cross-peak interaction integrals and their closed-form asymptotic laws,
//! ansatz assembly with correction terms, the reduced finite-dimensional
//! peak equations, and a full-grid Newton verifier.

pub mod ansatz;
pub mod asympt;
pub mod error;
pub mod fields;
pub mod io;
pub mod model;
pub mod profile;
pub mod quad;
pub mod reduced;
pub mod solver;
pub mod verify;

pub use error::Error;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

//! Quantum Cramér-Rao type bounds and estimation strategies for displaced
//! thermal states `ρ_{ζ,N}`.
//!
//! * [`bounds`]: RLD bound, closed forms, squeezed-heterodyne trade-off.
//! * [`states`]: heterodyne / photon-counting laws and samplers.
//! * [`fock`]: truncated Fock-space oracle for the analytic claims.
//! * [`estimator`]: collective and separable protocols, Monte Carlo MSE.

pub mod bounds;
pub mod error;
pub mod estimator;
pub mod fock;
pub mod linalg;
pub mod rng;
pub mod states;

pub use error::{Error, Result};

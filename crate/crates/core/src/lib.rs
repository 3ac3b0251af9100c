//! Simulation and verification of generalized Lévy processes `s = L⁻¹w` and
//! their compound-Poisson approximations (random L-splines).
//!
//! The crate is organised bottom-up:
//!
//! - [`exponents`]: Lévy exponents, their poissonization, bounds and triplets.
//! - [`noise`]: impulsive (compound-Poisson) noise on a box, plus the
//!   reproducible RNG streams every sampler draws from.
//! - [`operators`]: the catalog of spline-admissible whitening operators with
//!   Green's functions, adjoint left inverses and discrete application.
//! - [`synthesis`]: random L-splines on grids and exact reference paths.
//! - [`verify`]: characteristic-functional estimates, analytic values,
//!   convergence studies and goodness-of-fit tests.
//!
//! Text formats (descriptors, CSV headers) live next to the types they encode
//! and are parsed by total functions that never panic on malformed input.

pub mod error;
pub mod exponents;
pub mod grid;
pub mod kv;
pub mod noise;
pub mod operators;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use exponents::{JumpLaw, LevyExponent, PoissonizedExponent};
pub use grid::{Domain, Grid};
pub use noise::{ImpulseField, RngStream};
pub use operators::OperatorSpec;
pub use synthesis::GridRealization;

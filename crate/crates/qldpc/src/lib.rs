//! Simulation toolkit for stabilizer codes over GF(2^l): finite-field and
//! symplectic machinery, sparse check matrices with CSS-style constructions,
//! a scalar-message log-domain belief propagation decoder with reference
//! decoders for cross-checking, a depolarizing-channel Monte Carlo harness,
//! and a command-line front end.

pub mod channel;
pub mod cli;
pub mod decoder;
pub mod error;
pub mod galois;
pub mod harness;
pub mod stabilizer;

pub use error::{Error, Result};

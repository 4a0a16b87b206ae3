//! Delocalised-interaction games on two-qubit resources.
//!
//! Two parties share an entangled state and each holds one mode of a probe
//! that may or may not carry a particle. They interact with the probe through
//! controlled local unitaries and then try to tell which probe state was sent.
//! This crate computes exact optimal win probabilities, the concurrence and
//! record-quality bounds, analytic tactics that reach them, numerical tactic
//! optimization, and a noisy four-qubit circuit model of the games.

pub mod circuits;
pub mod error;
pub mod games;
pub mod inequalities;
pub mod io;
pub mod measures;
pub mod nelder_mead;
pub mod optimizer;
pub mod qcore;
pub mod random;
pub mod states;
pub mod tactics;

pub use error::{Error, Result};

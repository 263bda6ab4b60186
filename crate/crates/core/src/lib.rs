//! Positive threshold networks and monotone-regular behaviors.
//!
//! [`compiler`] turns finite automata over powerset alphabets into
//! networks with nonnegative weights, [`extractor`] goes the other way, and
//! [`verifier`] checks a network against a behavior with a given delay.

pub mod automata;
pub mod cli;
pub mod compiler;
pub mod dot;
pub mod error;
pub mod extractor;
pub mod fixtures;
pub mod network;
mod par;
pub mod symbol;
pub mod verifier;

pub use error::{Error, Result};

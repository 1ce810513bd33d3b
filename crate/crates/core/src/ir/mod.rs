//! Exact data model: rationals, piecewise-linear activations, layered
//! networks, and linear specifications, plus the reference evaluator.
//!
//! All types are immutable after construction and safe to share across
//! threads; every operation here is a pure function of its inputs.

mod activation;
mod network;
mod rational;
mod spec;

pub use activation::{Activation, ActivationKind, Piece};
pub(crate) use activation::ActivationRepr;
pub use network::{Layer, Network};
pub use rational::Rational;
pub use spec::{Cmp, LinearConstraint, LinearSpec, ReachInstance};

use thiserror::Error;

/// Errors raised by construction and evaluation of the data model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("invalid activation: {0}")]
    InvalidActivation(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

//! Constraint encodings, polynomial-to-squaring basis construction,
//! positive-domain and unit-interval interpretations, and the numeric
//! identity and non-convexity checks.
//!
//! Two worlds live here and never mix: the constraint-level gadgets are
//! exact and symbolic and feed the reductions; the numeric functions
//! evaluate at high precision (96 decimal digits) for identity
//! verification only and never enter the decision path.

pub mod convexity;
pub mod encode;
pub mod identity;
pub mod interpret;
mod numeric;
pub mod poly;

pub use convexity::{build_fbar, fbar_probe, midpoint_witness, MidpointScan, MidpointWitness};
pub use encode::{encode_integer, encode_rational_coefficient, mult_from_square};
pub use identity::{verify_identity, IdentityReport, IdentityTag};
pub use interpret::{interpret_positive, interpret_unit_interval, Interpretation};
pub use numeric::NumericFn;
pub use poly::{poly_to_square, Polynomial, SquareCombination};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("integer encodings require n ≥ 1")]
    NonPositiveInteger,
    #[error("no squaring is definable from a polynomial of degree < 2")]
    DegreeTooLow,
    #[error("sample {0} lies outside the identity's valid domain")]
    OutsideDomain(String),
    #[error("invalid gadget input: {0}")]
    InvalidInput(String),
}

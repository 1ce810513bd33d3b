use serde::{Deserialize, Serialize};

use crate::ir::Rational;

/// Size accounting emitted next to every reduction output. The sizes use
/// each side's native measure (bit size of specifications plus network
/// encoding for instances and networks, variables plus constraints for
/// CSP instances); `bound_factor` is the fixed per-reduction constant
/// the output is certified against:
/// `output_size ≤ bound_factor · input_size + additive slack`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReceipt {
    pub reduction: String,
    pub input_size: u64,
    pub output_size: u64,
    pub bound_factor: Rational,
}

impl ReductionReceipt {
    pub fn new(reduction: &str, input_size: u64, output_size: u64, bound_factor: Rational) -> Self {
        ReductionReceipt {
            reduction: reduction.to_owned(),
            input_size,
            output_size,
            bound_factor,
        }
    }

    /// Checks `output_size ≤ bound_factor · input_size + additive`.
    pub fn within_bound(&self, additive: u64) -> bool {
        Rational::from_int(self.output_size as i64)
            <= &(&self.bound_factor * &Rational::from_int(self.input_size as i64))
                + &Rational::from_int(additive as i64)
    }
}

/// Fixed linearity constants, measured on the random reduction suite
/// with margin. The additive slack absorbs constant-size scaffolding on
/// near-empty inputs.
pub mod factors {
    /// Constraint encodings pay a doubling chain per coefficient bit.
    pub const REACH_TO_CSP: i64 = 24;
    /// Each constraint becomes at most one short spec row or node pair.
    pub const CSP_TO_REACH: i64 = 48;
    /// Nodes at most double and connections at most quadruple.
    pub const ELIMINATE_ID: i64 = 4;
    /// Difference network plus the fixed comparator tail.
    pub const NE_TO_REACH: i64 = 16;
    /// Indicator nodes per specification row plus input carries.
    pub const REACH_TO_NE: i64 = 24;
    /// One instance per output row, each row negated in place.
    pub const VIP_TO_REACH: i64 = 4;
    /// Two indicator layers appended to the network.
    pub const REACH_TO_VIP: i64 = 12;
    /// Composition of the equivalence and interval constructions.
    pub const NE_TO_VIP: i64 = 48;
    /// Indicator tail for both specification sides.
    pub const VIP_TO_NE: i64 = 32;
    /// Additive slack for constant scaffolding on tiny inputs.
    pub const ADDITIVE_SLACK: u64 = 2048;
}

//! Executable inter-problem reductions: every construction is a pure
//! structure-to-structure transformation with a certified size receipt,
//! and preserves answers with the polarity stated on each function.
//!
//! Strict inequalities cannot be expressed in the constraint language
//! (`≤`, addition, the unit constant) and do not occur in reachability
//! instances, whose specifications are closed LP systems; reductions
//! that normalise specifications therefore reject strict rows instead of
//! silently changing the answer.

mod csp;
mod csp_bridge;
mod equivalence;
mod id_elim;
mod interval;
mod receipt;
mod single_output;
mod support;

pub use csp::{CspConstraint, CspFunction, CspInstance, VarId};
pub use csp_bridge::{csp_to_reach, reach_to_csp};
pub use equivalence::{ne_to_reach, reach_to_ne};
pub use id_elim::{eliminate_id, eliminate_id_instance, IdElimination, OutputTerm};
pub use interval::{ne_to_vip, reach_to_vip, vip_to_ne, vip_to_reach, CovipVariant};
pub use receipt::{factors, ReductionReceipt};
pub use single_output::{ne_to_single_output, vip_to_single_output};

use thiserror::Error;

use crate::ir::IrError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("unsupported activation for this reduction: {0}")]
    UnsupportedActivation(String),
    #[error("multiplication constraints have no piecewise-linear form and cannot be translated")]
    MulUnsupported,
    #[error("strict inequality in {0} cannot be expressed in the target form")]
    StrictUnsupported(&'static str),
    #[error("invalid constraint instance: {0}")]
    InvalidCsp(String),
    #[error(transparent)]
    Ir(#[from] IrError),
}

//! Branch-and-bound decision procedures for reachability, interval
//! properties, and network equivalence over piecewise-linear networks.
//!
//! The search fixes one linear piece per activation node in topological
//! (layer-major) order. Under a partial assignment every assigned node's
//! value is an affine function of the inputs, so the relaxation at each
//! search node is an exact LP over the input variables containing the
//! input specification plus the domain constraints of all assigned
//! pieces, and nothing for unassigned nodes. Infeasible relaxations
//! prune soundly; a feasible leaf yields a rational witness.

mod affine;
mod exhaustive;
mod ne;
mod search;
mod vip;

pub use exhaustive::solve_reach_exhaustive;
pub use ne::solve_ne;
pub use vip::solve_vip;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ir::{IrError, Network, Rational, ReachInstance};

/// Search knobs. `budget` caps node expansions (piece assignments tried);
/// exceeding it aborts with [`SolveError::BudgetExhausted`] rather than
/// ever returning a wrong verdict. With `threads == 1` the search order
/// is fixed and verdicts and witnesses are deterministic; with more
/// threads the status is still deterministic but the witness may differ.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub budget: Option<u64>,
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: None,
            threads: 1,
        }
    }
}

impl SolverConfig {
    pub fn with_budget(budget: u64) -> Self {
        SolverConfig {
            budget: Some(budget),
            ..Default::default()
        }
    }
}

/// Work counters reported with every verdict.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub lp_calls: u64,
    pub nodes_expanded: u64,
}

impl SearchStats {
    pub fn absorb(&mut self, other: SearchStats) {
        self.lp_calls += other.lp_calls;
        self.nodes_expanded += other.nodes_expanded;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReachStatus {
    Sat,
    Unsat,
}

/// Reachability verdict; on `Sat` the witness satisfies the input
/// specification and its image satisfies the output specification, both
/// under exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: ReachStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Rational>>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VipStatus {
    Holds,
    Violated,
}

/// Interval-property verdict; on `Violated` the counterexample satisfies
/// the input specification while its image fails the (strictly
/// interpreted) output specification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VipVerdict {
    pub status: VipStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<Rational>>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeStatus {
    Equivalent,
    Distinct,
}

/// Equivalence verdict; on `Distinct` the two networks disagree at the
/// distinguisher input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeVerdict {
    pub status: NeStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinguisher: Option<Vec<Rational>>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("unsupported activation: {0}")]
    UnsupportedActivation(String),
    #[error("node expansion budget exhausted after {expanded} expansions")]
    BudgetExhausted { expanded: u64 },
    #[error(transparent)]
    Ir(#[from] IrError),
}

fn validate_instance(inst: &ReachInstance) -> Result<(), SolveError> {
    validate_network(&inst.network)?;
    inst.input_spec.validate()?;
    inst.output_spec.validate()?;
    if inst.input_spec.num_vars != inst.network.input_dim() {
        return Err(IrError::DimensionMismatch {
            expected: inst.network.input_dim(),
            got: inst.input_spec.num_vars,
        }
        .into());
    }
    if inst.output_spec.num_vars != inst.network.output_dim() {
        return Err(IrError::DimensionMismatch {
            expected: inst.network.output_dim(),
            got: inst.output_spec.num_vars,
        }
        .into());
    }
    Ok(())
}

fn validate_network(net: &Network) -> Result<(), SolveError> {
    for layer in net.layers() {
        for act in &layer.activations {
            act.validate().map_err(|e| {
                SolveError::UnsupportedActivation(format!("{} ({e})", act.kind().name()))
            })?;
        }
    }
    Ok(())
}

/// Decides whether some input satisfying the input specification maps to
/// an output satisfying the output specification.
pub fn solve_reach(inst: &ReachInstance, cfg: &SolverConfig) -> Result<Verdict, SolveError> {
    validate_instance(inst)?;
    let (witness, stats) = search::run(inst, cfg)?;
    let verdict = match witness {
        Some(w) => {
            debug_assert!(inst.input_spec.check(&w).unwrap());
            debug_assert!(inst
                .output_spec
                .check(&inst.network.evaluate(&w).unwrap())
                .unwrap());
            Verdict {
                status: ReachStatus::Sat,
                witness: Some(w),
                stats,
            }
        }
        None => Verdict {
            status: ReachStatus::Unsat,
            witness: None,
            stats,
        },
    };
    Ok(verdict)
}

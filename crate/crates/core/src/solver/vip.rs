use crate::ir::{LinearSpec, ReachInstance};

use super::{
    solve_reach, validate_instance, ReachStatus, SearchStats, SolveError, SolverConfig,
    VipStatus, VipVerdict,
};

/// Decides the interval property: does every input satisfying the input
/// specification map into the open output polyhedron?
///
/// Output comparators are interpreted strictly (`≤` reads as `<`); an
/// equality row demands exact equality. The property holds iff for
/// every output constraint the reachability query with the negated
/// (closed-complement) constraint is unsatisfiable; the first
/// satisfiable negation yields the counterexample.
pub fn solve_vip(inst: &ReachInstance, cfg: &SolverConfig) -> Result<VipVerdict, SolveError> {
    validate_instance(inst)?;
    let mut stats = SearchStats::default();
    for row in &inst.output_spec.constraints {
        for negated in row.complement() {
            let query = ReachInstance {
                network: inst.network.clone(),
                input_spec: inst.input_spec.clone(),
                output_spec: LinearSpec {
                    num_vars: inst.output_spec.num_vars,
                    constraints: vec![negated],
                },
            };
            let verdict = solve_reach(&query, cfg)?;
            stats.absorb(verdict.stats);
            if verdict.status == ReachStatus::Sat {
                return Ok(VipVerdict {
                    status: VipStatus::Violated,
                    counterexample: verdict.witness,
                    stats,
                });
            }
        }
    }
    Ok(VipVerdict {
        status: VipStatus::Holds,
        counterexample: None,
        stats,
    })
}

use crate::ir::{Cmp, IrError, LinearConstraint, LinearSpec, Network, Rational, ReachInstance};

use super::{
    solve_reach, validate_network, NeStatus, NeVerdict, ReachStatus, SearchStats, SolveError,
    SolverConfig,
};

/// Decides whether two networks compute the same function.
///
/// The two networks are stacked into one (depth-padded with identity
/// layers, inputs shared) and, for every output dimension `i`, two
/// reachability queries with unconstrained inputs ask whether
/// `y1_i - y2_i` can be strictly positive or strictly negative. Any
/// satisfiable query yields a distinguisher. This direct difference
/// method needs no particular activation in the networks, unlike the
/// sign-based instance construction in the reductions module.
pub fn solve_ne(n1: &Network, n2: &Network, cfg: &SolverConfig) -> Result<NeVerdict, SolveError> {
    validate_network(n1)?;
    validate_network(n2)?;
    if n1.input_dim() != n2.input_dim() {
        return Err(IrError::DimensionMismatch {
            expected: n1.input_dim(),
            got: n2.input_dim(),
        }
        .into());
    }
    if n1.output_dim() != n2.output_dim() {
        return Err(IrError::DimensionMismatch {
            expected: n1.output_dim(),
            got: n2.output_dim(),
        }
        .into());
    }
    let m = n1.output_dim();
    let stacked = Network::stacked(n1, n2)?;
    let mut stats = SearchStats::default();
    for i in 0..m {
        for positive_side in [true, false] {
            // y1_i - y2_i > 0, expressed as -(y1_i - y2_i) < 0 (and the
            // mirrored query for the negative side).
            let sign = if positive_side {
                -Rational::one()
            } else {
                Rational::one()
            };
            let mut coeffs = vec![Rational::zero(); 2 * m];
            coeffs[i] = sign.clone();
            coeffs[m + i] = -sign;
            let query = ReachInstance {
                input_spec: LinearSpec::empty(stacked.input_dim()),
                output_spec: LinearSpec {
                    num_vars: 2 * m,
                    constraints: vec![LinearConstraint::new(coeffs, Cmp::Lt, Rational::zero())],
                },
                network: stacked.clone(),
            };
            let verdict = solve_reach(&query, cfg)?;
            stats.absorb(verdict.stats);
            if verdict.status == ReachStatus::Sat {
                let d = verdict.witness.expect("sat verdict carries witness");
                debug_assert_ne!(
                    n1.evaluate(&d).unwrap(),
                    n2.evaluate(&d).unwrap(),
                    "distinguisher does not distinguish"
                );
                return Ok(NeVerdict {
                    status: NeStatus::Distinct,
                    distinguisher: Some(d),
                    stats,
                });
            }
        }
    }
    Ok(NeVerdict {
        status: NeStatus::Equivalent,
        distinguisher: None,
        stats,
    })
}

//! Truth-table splits into single-output subproblems: the multi-output
//! answer is the conjunction of the sub-answers.

use crate::ir::{LinearSpec, Network, ReachInstance};

use super::ReductionError;

/// Splits an equivalence question into one single-output pair per output
/// dimension; the original networks are equivalent iff every pair is.
pub fn ne_to_single_output(
    n1: &Network,
    n2: &Network,
) -> Result<Vec<(Network, Network)>, ReductionError> {
    if n1.output_dim() != n2.output_dim() {
        return Err(ReductionError::Ir(crate::ir::IrError::DimensionMismatch {
            expected: n1.output_dim(),
            got: n2.output_dim(),
        }));
    }
    (0..n1.output_dim())
        .map(|i| Ok((n1.project_output(i)?, n2.project_output(i)?)))
        .collect()
}

/// Splits an interval-property instance into one instance per output
/// constraint; the property holds iff it holds for every single
/// condition.
pub fn vip_to_single_output(inst: &ReachInstance) -> Vec<ReachInstance> {
    inst.output_spec
        .constraints
        .iter()
        .map(|row| ReachInstance {
            network: inst.network.clone(),
            input_spec: inst.input_spec.clone(),
            output_spec: LinearSpec {
                num_vars: inst.output_spec.num_vars,
                constraints: vec![row.clone()],
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Activation, Cmp, Layer, LinearConstraint, Rational};
    use crate::solver::{solve_ne, solve_vip, NeStatus, SolverConfig, VipStatus};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn three_output_net(third_weight: Rational) -> Network {
        Network::new(
            1,
            vec![Layer {
                weights: vec![vec![r(1, 1)], vec![r(2, 1)], vec![third_weight]],
                biases: vec![r(0, 1); 3],
                activations: vec![Activation::id(), Activation::relu(), Activation::id()],
            }],
        )
        .unwrap()
    }

    #[test]
    fn ne_split_matches_joint_answer() {
        let cfg = SolverConfig::default();
        let a = three_output_net(r(3, 1));
        let b = three_output_net(r(3, 1));
        let parts = ne_to_single_output(&a, &b).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts
            .iter()
            .all(|(x, y)| solve_ne(x, y, &cfg).unwrap().status == NeStatus::Equivalent));

        let c = three_output_net(r(4, 1));
        let parts = ne_to_single_output(&a, &c).unwrap();
        let statuses: Vec<NeStatus> = parts
            .iter()
            .map(|(x, y)| solve_ne(x, y, &cfg).unwrap().status)
            .collect();
        assert_eq!(
            statuses,
            vec![NeStatus::Equivalent, NeStatus::Equivalent, NeStatus::Distinct]
        );
    }

    #[test]
    fn vip_split_is_per_constraint() {
        let cfg = SolverConfig::default();
        let net = three_output_net(r(3, 1));
        let inst = ReachInstance::new(
            net,
            LinearSpec::new(
                1,
                vec![
                    LinearConstraint::new(vec![r(-1, 1)], Cmp::Le, r(0, 1)),
                    LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(1, 1)),
                ],
            )
            .unwrap(),
            LinearSpec::new(
                3,
                vec![
                    LinearConstraint::new(vec![r(1, 1), r(0, 1), r(0, 1)], Cmp::Lt, r(2, 1)),
                    LinearConstraint::new(vec![r(0, 1), r(1, 1), r(0, 1)], Cmp::Lt, r(3, 1)),
                    LinearConstraint::new(vec![r(0, 1), r(0, 1), r(1, 1)], Cmp::Lt, r(4, 1)),
                    LinearConstraint::new(vec![r(0, 1), r(0, 1), r(-1, 1)], Cmp::Lt, r(1, 1)),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let parts = vip_to_single_output(&inst);
        assert_eq!(parts.len(), 4);
        let joint = solve_vip(&inst, &cfg).unwrap().status;
        let all_hold = parts
            .iter()
            .all(|p| solve_vip(p, &cfg).unwrap().status == VipStatus::Holds);
        assert_eq!(joint == VipStatus::Holds, all_hold);
    }

    #[test]
    fn singleton_split_is_identity() {
        let net = Network::new(
            1,
            vec![Layer {
                weights: vec![vec![r(1, 1)]],
                biases: vec![r(0, 1)],
                activations: vec![Activation::id()],
            }],
        )
        .unwrap();
        let parts = ne_to_single_output(&net, &net).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, net);
    }
}

//! The two directions of the network/CSP correspondence.
//!
//! Forward, a reachability instance becomes a constraint instance over
//! `≤`, addition, the unit constant, and the graphs of the non-identity
//! activations: one variable per input and output node, a sum and a
//! value variable per hidden node, and doubling-chain encodings for
//! every rational coefficient, so the output is linear in the bit size
//! of the input. Backward, a constraint instance over those relations
//! (minus multiplication) becomes a one-layer reachability instance
//! whose input variables are the CSP variables.


use crate::gadgets::encode::{encode_rational_coefficient, zero_var};
use crate::ir::{
    ActivationKind, Cmp, Layer, LinearConstraint, LinearSpec, Network, Rational, ReachInstance,
};

use super::{CspConstraint, CspFunction, CspInstance, ReductionError, VarId};

/// Emits `target = Σ coeff_i · term_i + bias` as Plus/One/Leq chains.
fn encode_affine(
    csp: &mut CspInstance,
    terms: &[(Rational, VarId)],
    bias: &Rational,
    target: VarId,
) {
    let mut parts: Vec<VarId> = Vec::new();
    for (coeff, var) in terms {
        if coeff.is_zero() {
            continue;
        }
        let t = csp.fresh_var();
        encode_rational_coefficient(csp, coeff, *var, t);
        parts.push(t);
    }
    if !bias.is_zero() {
        let unit = csp.fresh_var();
        csp.push(CspConstraint::One(unit));
        let b = csp.fresh_var();
        encode_rational_coefficient(csp, bias, unit, b);
        parts.push(b);
    }
    match parts.len() {
        0 => {
            // target = 0
            csp.push(CspConstraint::Plus(target, target, target));
        }
        1 => {
            let z = zero_var(csp);
            csp.push(CspConstraint::Plus(parts[0], z, target));
        }
        _ => {
            let mut acc = parts[0];
            for (i, &p) in parts.iter().enumerate().skip(1) {
                let out = if i + 1 == parts.len() { target } else { csp.fresh_var() };
                csp.push(CspConstraint::Plus(acc, p, out));
                acc = out;
            }
        }
    }
}

/// Emits one specification row `Σ coeff_i · var_i  cmp  rhs`.
fn encode_spec_row(
    csp: &mut CspInstance,
    row: &LinearConstraint,
    vars: &[VarId],
) -> Result<(), ReductionError> {
    if row.cmp == Cmp::Lt {
        return Err(ReductionError::StrictUnsupported("specification row"));
    }
    let terms: Vec<(Rational, VarId)> = row
        .coeffs
        .iter()
        .zip(vars)
        .map(|(c, &v)| (c.clone(), v))
        .collect();
    let lhs = csp.fresh_var();
    encode_affine(csp, &terms, &Rational::zero(), lhs);
    let rhs = csp.fresh_var();
    encode_affine(csp, &[], &row.rhs, rhs);
    match row.cmp {
        Cmp::Le => csp.push(CspConstraint::Leq(lhs, rhs)),
        Cmp::Eq => {
            csp.push(CspConstraint::Leq(lhs, rhs));
            csp.push(CspConstraint::Leq(rhs, lhs));
        }
        Cmp::Lt => unreachable!(),
    }
    Ok(())
}

/// Translates a reachability instance into a satisfiability-equivalent
/// constraint instance. Strict rows are rejected: reachability
/// specifications are closed LP systems and the target language has no
/// strict order.
pub fn reach_to_csp(inst: &ReachInstance) -> Result<CspInstance, ReductionError> {
    let net = &inst.network;
    let n = net.input_dim();
    let mut csp = CspInstance::new(n);
    let input_vars: Vec<VarId> = (0..n).collect();

    let mut prev_vars = input_vars.clone();
    let mut output_vars = Vec::new();
    for (li, layer) in net.layers().iter().enumerate() {
        let last = li + 1 == net.layers().len();
        let mut layer_vars = Vec::with_capacity(layer.width());
        for (node, act) in layer.activations.iter().enumerate() {
            let terms: Vec<(Rational, VarId)> = layer.weights[node]
                .iter()
                .zip(&prev_vars)
                .map(|(c, &v)| (c.clone(), v))
                .collect();
            let is_id = act.kind() == ActivationKind::Id;
            let sum_var = csp.fresh_var();
            encode_affine(&mut csp, &terms, &layer.biases[node], sum_var);
            let value_var = if is_id {
                if last {
                    // output id node: the sum variable is the node value
                    sum_var
                } else {
                    // hidden id node: separate value variable tied to the sum
                    let v = csp.fresh_var();
                    csp.push(CspConstraint::Leq(sum_var, v));
                    csp.push(CspConstraint::Leq(v, sum_var));
                    v
                }
            } else {
                let v = csp.fresh_var();
                csp.push(CspConstraint::FnGraph(
                    CspFunction::Piecewise(act.clone()),
                    sum_var,
                    v,
                ));
                v
            };
            layer_vars.push(value_var);
        }
        if last {
            output_vars = layer_vars.clone();
        }
        prev_vars = layer_vars;
    }

    for row in &inst.input_spec.constraints {
        encode_spec_row(&mut csp, row, &input_vars)?;
    }
    for row in &inst.output_spec.constraints {
        encode_spec_row(&mut csp, row, &output_vars)?;
    }
    debug_assert!(csp.validate().is_ok());
    Ok(csp)
}

/// Translates a constraint instance over `≤`, addition, the unit
/// constant, and activation graphs into a one-layer reachability
/// instance: every CSP variable becomes an input node; every graph
/// constraint `v = f(u)` becomes an `f`-node wired to `u` and an
/// identity node wired to `v`, equated in the output specification; all
/// remaining constraints fold into the input specification.
pub fn csp_to_reach(csp: &CspInstance) -> Result<ReachInstance, ReductionError> {
    csp.validate()?;
    if csp.has_mul() {
        return Err(ReductionError::MulUnsupported);
    }
    let n = csp.num_vars.max(1);

    let mut input_rows: Vec<LinearConstraint> = Vec::new();
    let mut graph_pairs: Vec<(&CspFunction, VarId, VarId)> = Vec::new();
    for c in &csp.constraints {
        match c {
            CspConstraint::Leq(u, v) => {
                let mut coeffs = vec![Rational::zero(); n];
                coeffs[*u] += &Rational::one();
                coeffs[*v] -= &Rational::one();
                input_rows.push(LinearConstraint::new(coeffs, Cmp::Le, Rational::zero()));
            }
            CspConstraint::Plus(u, v, w) => {
                let mut coeffs = vec![Rational::zero(); n];
                coeffs[*u] += &Rational::one();
                coeffs[*v] += &Rational::one();
                coeffs[*w] -= &Rational::one();
                input_rows.push(LinearConstraint::new(coeffs, Cmp::Eq, Rational::zero()));
            }
            CspConstraint::One(u) => {
                let mut coeffs = vec![Rational::zero(); n];
                coeffs[*u] = Rational::one();
                input_rows.push(LinearConstraint::new(coeffs, Cmp::Eq, Rational::one()));
            }
            CspConstraint::Mul(..) => unreachable!("rejected above"),
            CspConstraint::FnGraph(f, u, v) => match f {
                CspFunction::Piecewise(_) => graph_pairs.push((f, *u, *v)),
                CspFunction::Square => return Err(ReductionError::MulUnsupported),
            },
        }
    }

    let mut weights = Vec::new();
    let mut biases = Vec::new();
    let mut activations = Vec::new();
    let mut output_rows = Vec::new();
    for (i, (f, u, v)) in graph_pairs.iter().enumerate() {
        let act = match f {
            CspFunction::Piecewise(a) => a.clone(),
            CspFunction::Square => unreachable!(),
        };
        let mut row_f = vec![Rational::zero(); n];
        row_f[*u] = Rational::one();
        let mut row_id = vec![Rational::zero(); n];
        row_id[*v] = Rational::one();
        weights.push(row_f);
        weights.push(row_id);
        biases.push(Rational::zero());
        biases.push(Rational::zero());
        activations.push(act);
        activations.push(crate::ir::Activation::id());
        let mut coeffs = vec![Rational::zero(); 2 * graph_pairs.len()];
        coeffs[2 * i] = Rational::one();
        coeffs[2 * i + 1] = -Rational::one();
        output_rows.push(LinearConstraint::new(coeffs, Cmp::Eq, Rational::zero()));
    }
    if graph_pairs.is_empty() {
        // the layered form needs at least one node; a zero-weight
        // identity node changes nothing
        weights.push(vec![Rational::zero(); n]);
        biases.push(Rational::zero());
        activations.push(crate::ir::Activation::id());
    }

    let output_dim = weights.len();
    let network = Network::new(
        n,
        vec![Layer {
            weights,
            biases,
            activations,
        }],
    )?;
    Ok(ReachInstance::new(
        network,
        LinearSpec::new(n, input_rows)?,
        LinearSpec::new(output_dim, output_rows)?,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Activation;
    use crate::solver::{solve_reach, ReachStatus, SolverConfig};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn single_node(weight: Rational, bias: Rational, act: Activation) -> Network {
        Network::new(
            1,
            vec![Layer {
                weights: vec![vec![weight]],
                biases: vec![bias],
                activations: vec![act],
            }],
        )
        .unwrap()
    }

    #[test]
    fn id_node_produces_no_graph_constraints() {
        let inst = ReachInstance::new(
            single_node(r(1, 1), r(0, 1), Activation::id()),
            LinearSpec::empty(1),
            LinearSpec::empty(1),
        )
        .unwrap();
        let csp = reach_to_csp(&inst).unwrap();
        assert!(!csp.has_fn_graph());
        assert!(csp
            .constraints
            .iter()
            .all(|c| matches!(c, CspConstraint::Plus(..) | CspConstraint::One(_) | CspConstraint::Leq(..))));
    }

    #[test]
    fn relu_node_produces_exactly_one_graph_constraint() {
        let inst = ReachInstance::new(
            single_node(r(1, 1), r(0, 1), Activation::relu()),
            LinearSpec::empty(1),
            LinearSpec::empty(1),
        )
        .unwrap();
        let csp = reach_to_csp(&inst).unwrap();
        let graphs: Vec<_> = csp
            .constraints
            .iter()
            .filter(|c| matches!(c, CspConstraint::FnGraph(..)))
            .collect();
        assert_eq!(graphs.len(), 1);
    }

    #[test]
    fn integer_weight_uses_short_chain() {
        // weight 5 on one edge: the coefficient chain plus the value
        // plumbing stays well under the logarithmic budget
        let inst = ReachInstance::new(
            single_node(r(5, 1), r(0, 1), Activation::id()),
            LinearSpec::empty(1),
            LinearSpec::empty(1),
        )
        .unwrap();
        let csp = reach_to_csp(&inst).unwrap();
        assert!(csp.constraints.len() <= 6, "{:?}", csp.constraints);
    }

    #[test]
    fn backward_direction_shapes() {
        // v1 = relu(v0) and nothing else
        let mut csp = CspInstance::new(2);
        csp.push(CspConstraint::FnGraph(
            CspFunction::Piecewise(Activation::relu()),
            0,
            1,
        ));
        let inst = csp_to_reach(&csp).unwrap();
        assert_eq!(inst.network.depth(), 1);
        assert_eq!(inst.network.output_dim(), 2);
        assert_eq!(inst.output_spec.constraints.len(), 1);
        assert_eq!(inst.output_spec.constraints[0].cmp, Cmp::Eq);

        // no graphs at all: id pass-through and pure input spec
        let mut plain = CspInstance::new(2);
        plain.push(CspConstraint::Leq(0, 1));
        let inst = csp_to_reach(&plain).unwrap();
        assert_eq!(inst.network.node_count(), 1);
        assert!(inst.output_spec.constraints.is_empty());
        assert_eq!(inst.input_spec.constraints.len(), 1);
    }

    #[test]
    fn mul_is_rejected() {
        let mut csp = CspInstance::new(3);
        csp.push(CspConstraint::Mul(0, 1, 2));
        assert_eq!(csp_to_reach(&csp), Err(ReductionError::MulUnsupported));
    }

    #[test]
    fn strict_rows_are_rejected() {
        let inst = ReachInstance::new(
            single_node(r(1, 1), r(0, 1), Activation::id()),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(0, 1))]).unwrap(),
            LinearSpec::empty(1),
        )
        .unwrap();
        assert!(matches!(
            reach_to_csp(&inst),
            Err(ReductionError::StrictUnsupported(_))
        ));
    }

    #[test]
    fn round_trip_preserves_the_answer_on_a_known_pair() {
        let cfg = SolverConfig::default();
        // ReLU with input x ≤ -1 and output y ≥ 1 is unreachable
        let unsat = ReachInstance::new(
            single_node(r(1, 1), r(0, 1), Activation::relu()),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(-1, 1))]).unwrap(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(-1, 1)], Cmp::Le, r(-1, 1))]).unwrap(),
        )
        .unwrap();
        // same network, output y ≤ 0 is reachable
        let sat = ReachInstance::new(
            single_node(r(1, 1), r(0, 1), Activation::relu()),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(-1, 1))]).unwrap(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(0, 1))]).unwrap(),
        )
        .unwrap();
        for (inst, expect) in [(unsat, ReachStatus::Unsat), (sat, ReachStatus::Sat)] {
            let direct = solve_reach(&inst, &cfg).unwrap();
            assert_eq!(direct.status, expect);
            let round = csp_to_reach(&reach_to_csp(&inst).unwrap()).unwrap();
            let via = solve_reach(&round, &cfg).unwrap();
            assert_eq!(via.status, expect);
        }
    }
}

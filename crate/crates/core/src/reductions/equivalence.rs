//! Reductions between network equivalence and reachability, in both
//! directions, via sign-node comparator circuits.

use crate::ir::{Cmp, LinearConstraint, LinearSpec, Network, Rational, ReachInstance};

use super::support::{normalize_ge, sign_layer, unit_row, with_input_carries};
use super::ReductionError;

/// Equivalence → reachability (complement): builds one network over the
/// merged inputs whose single output `z` is `1` exactly when the two
/// networks disagree at the input and `0` otherwise, and pairs it with
/// the output specification `z ≥ 1/2` and an empty input specification.
/// The instance is satisfiable iff the networks are *not* equivalent.
///
/// Structure: the networks run stacked (the shallower one padded with
/// identity layers); per output dimension a sign node computes
/// `y_i = sign(y1_i − y2_i)`; one sign node aggregates
/// `y = sign(Σ 2^i·y_i)`, which is `0` iff every `y_i` is `0` because
/// the weights grow faster than any cancellation among values in
/// `{-1, 0, 1}`; a final comparator pair maps `y = 0` to `z = 0` and
/// `y = ±1` to `z = 1` via `z = sign(sign(y−½) + sign(−y−½) + 2)`.
pub fn ne_to_reach(n1: &Network, n2: &Network) -> Result<ReachInstance, ReductionError> {
    let stacked = Network::stacked(n1, n2)?;
    if n1.output_dim() != n2.output_dim() {
        return Err(ReductionError::Ir(crate::ir::IrError::DimensionMismatch {
            expected: n1.output_dim(),
            got: n2.output_dim(),
        }));
    }
    let m = n1.output_dim();
    let mut layers = stacked.layers().to_vec();

    // difference signs: y_i = sign(y1_i - y2_i)
    let mut diff_w = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); 2 * m];
        row[i] = Rational::one();
        row[m + i] = -Rational::one();
        diff_w.push(row);
    }
    layers.push(sign_layer(diff_w, vec![Rational::zero(); m]));

    // aggregate: y = sign(Σ 2^(i+1) · y_i)
    let agg_row: Vec<Rational> = (0..m).map(|i| Rational::pow2(i as u32 + 1)).collect();
    layers.push(sign_layer(vec![agg_row], vec![Rational::zero()]));

    // comparator pair: p = sign(y - 1/2), q = sign(-y - 1/2)
    layers.push(sign_layer(
        vec![unit_row(1, 0, Rational::one()), unit_row(1, 0, -Rational::one())],
        vec![Rational::new(-1, 2), Rational::new(-1, 2)],
    ));
    // z = sign(p + q + 2): 0 iff y was 0, else 1
    layers.push(sign_layer(
        vec![vec![Rational::one(), Rational::one()]],
        vec![Rational::from_int(2)],
    ));

    let network = Network::new(stacked.input_dim(), layers)?;
    let out_spec = LinearSpec::new(
        1,
        vec![LinearConstraint::new(
            vec![-Rational::one()],
            Cmp::Le,
            Rational::new(-1, 2),
        )],
    )?;
    Ok(ReachInstance::new(
        network,
        LinearSpec::empty(n1.input_dim()),
        out_spec,
    )?)
}

/// Reachability → equivalence (complement): builds a pair of networks
/// that are equivalent iff the instance is unsatisfiable.
///
/// The first network carries the inputs to the top, evaluates every
/// (≥-normalised) specification row with the two-sign indicator
/// `λ_k = sign(sign(Σ a·v − c) + ½)` (so `λ_k = 1` iff the row holds),
/// and aggregates `λ = sign(Σ λ_k − M)`, which is `0` when the instance
/// constraints all hold at the input and `-1` otherwise. The second
/// network computes `sign(sign(v_1) − 2) ≡ -1`. The pair disagrees
/// somewhere iff some input makes every row hold.
pub fn reach_to_ne(inst: &ReachInstance) -> Result<(Network, Network), ReductionError> {
    let input_rows = normalize_ge(&inst.input_spec, "input specification")?;
    let output_rows = normalize_ge(&inst.output_spec, "output specification")?;
    let n = inst.network.input_dim();
    let m = inst.network.output_dim();

    let carried = with_input_carries(&inst.network);
    let top_width = m + n;
    let mut layers = carried.layers().to_vec();
    let total_rows = input_rows.len() + output_rows.len();

    if total_rows == 0 {
        // no constraints: the instance is trivially satisfiable and the
        // indicator is the constant 0
        layers.push(sign_layer(
            vec![vec![Rational::zero(); top_width]],
            vec![Rational::zero()],
        ));
    } else {
        // raw sign per row; input rows read the carried inputs
        let mut s_w = Vec::with_capacity(total_rows);
        let mut s_b = Vec::with_capacity(total_rows);
        for row in &input_rows {
            let mut w = vec![Rational::zero(); top_width];
            for (j, a) in row.coeffs.iter().enumerate() {
                w[m + j] = a.clone();
            }
            s_w.push(w);
            s_b.push(-&row.rhs);
        }
        for row in &output_rows {
            let mut w = vec![Rational::zero(); top_width];
            for (j, a) in row.coeffs.iter().enumerate() {
                w[j] = a.clone();
            }
            s_w.push(w);
            s_b.push(-&row.rhs);
        }
        layers.push(sign_layer(s_w, s_b));

        // λ_k = sign(s_k + 1/2)
        let ind_w = (0..total_rows)
            .map(|k| unit_row(total_rows, k, Rational::one()))
            .collect();
        layers.push(sign_layer(ind_w, vec![Rational::new(1, 2); total_rows]));

        // λ = sign(Σ λ_k − M)
        layers.push(sign_layer(
            vec![vec![Rational::one(); total_rows]],
            vec![-Rational::from_int(total_rows as i64)],
        ));
    }
    let indicator = Network::new(n, layers)?;

    // constant -1 companion: sign(sign(v_1) - 2)
    let constant = Network::new(
        n,
        vec![
            sign_layer(vec![unit_row(n, 0, Rational::one())], vec![Rational::zero()]),
            sign_layer(vec![vec![Rational::one()]], vec![Rational::from_int(-2)]),
        ],
    )?;
    Ok((indicator, constant))
}

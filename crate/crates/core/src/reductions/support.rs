//! Shared machinery for the indicator-network constructions: input
//! carries (so that input-side constraints can be re-evaluated at the
//! top of a layered network without skip connections) and normalisation
//! of specifications to `Σ a·v ≥ c` form.

use crate::ir::{Activation, Cmp, Layer, LinearSpec, Network, Rational};

use super::ReductionError;

/// A specification row in `coeffs · v ≥ rhs` form.
#[derive(Debug, Clone)]
pub(super) struct GeRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// Rewrites every row to `≥` form: `≤` rows are negated and equalities
/// split into two opposite rows. Strict rows have no weak `≥` form and
/// are rejected.
pub(super) fn normalize_ge(spec: &LinearSpec, what: &'static str) -> Result<Vec<GeRow>, ReductionError> {
    let mut rows = Vec::new();
    for c in &spec.constraints {
        match c.cmp {
            Cmp::Lt => return Err(ReductionError::StrictUnsupported(what)),
            Cmp::Le => rows.push(GeRow {
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
                rhs: -&c.rhs,
            }),
            Cmp::Eq => {
                rows.push(GeRow {
                    coeffs: c.coeffs.clone(),
                    rhs: c.rhs.clone(),
                });
                rows.push(GeRow {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    rhs: -&c.rhs,
                });
            }
        }
    }
    Ok(rows)
}

/// Appends `input_dim` identity nodes to every layer, each copying one
/// network input forward. In every layer the carries sit after the
/// original nodes, so in the final layer input `j` is node
/// `original_width + j`.
pub(super) fn with_input_carries(net: &Network) -> Network {
    let n = net.input_dim();
    let mut layers = Vec::with_capacity(net.depth());
    let mut prev_orig = n; // width of the original part of the previous layer
    for (li, layer) in net.layers().iter().enumerate() {
        let prev_total = if li == 0 { n } else { prev_orig + n };
        let mut weights = Vec::with_capacity(layer.width() + n);
        for row in &layer.weights {
            let mut r = row.clone();
            r.resize(prev_total, Rational::zero());
            weights.push(r);
        }
        for j in 0..n {
            let mut r = vec![Rational::zero(); prev_total];
            // layer 0 reads the input directly; later layers read the
            // previous carry block
            let src = if li == 0 { j } else { prev_orig + j };
            r[src] = Rational::one();
            weights.push(r);
        }
        let mut biases = layer.biases.clone();
        biases.extend(std::iter::repeat_with(Rational::zero).take(n));
        let mut activations = layer.activations.clone();
        activations.extend(std::iter::repeat_with(Activation::id).take(n));
        layers.push(Layer {
            weights,
            biases,
            activations,
        });
        prev_orig = layer.width();
    }
    Network::new(n, layers).expect("carry extension preserves validity")
}

/// A layer where every node is a sign node.
pub(super) fn sign_layer(weights: Vec<Vec<Rational>>, biases: Vec<Rational>) -> Layer {
    let width = biases.len();
    Layer {
        weights,
        biases,
        activations: vec![Activation::sign(); width],
    }
}

/// Unit row `e_j` of length `width`, scaled.
pub(super) fn unit_row(width: usize, j: usize, scale: Rational) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); width];
    r[j] = scale;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::LinearConstraint;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn carries_replicate_inputs() {
        let net = Network::new(
            2,
            vec![
                Layer {
                    weights: vec![vec![r(1, 1), r(1, 1)]],
                    biases: vec![r(0, 1)],
                    activations: vec![Activation::relu()],
                },
                Layer {
                    weights: vec![vec![r(2, 1)]],
                    biases: vec![r(0, 1)],
                    activations: vec![Activation::id()],
                },
            ],
        )
        .unwrap();
        let carried = with_input_carries(&net);
        let out = carried.evaluate(&[r(3, 1), r(-5, 1)]).unwrap();
        // original output, then the carried inputs
        assert_eq!(out, vec![r(0, 1), r(3, 1), r(-5, 1)]);
    }

    #[test]
    fn ge_normalisation() {
        let spec = LinearSpec::new(
            1,
            vec![
                LinearConstraint::new(vec![r(2, 1)], Cmp::Le, r(4, 1)),
                LinearConstraint::new(vec![r(1, 1)], Cmp::Eq, r(1, 1)),
            ],
        )
        .unwrap();
        let rows = normalize_ge(&spec, "test").unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].coeffs, vec![r(-2, 1)]);
        assert_eq!(rows[0].rhs, r(-4, 1));
        let strict = LinearSpec::new(
            1,
            vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(0, 1))],
        )
        .unwrap();
        assert!(normalize_ge(&strict, "test").is_err());
    }
}

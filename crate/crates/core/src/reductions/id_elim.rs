//! Replacing identity nodes by ReLU pairs.
//!
//! Every identity node is duplicated; the copy gets negated incoming and
//! outgoing weights and a negated bias, and both copies become ReLU
//! nodes. Since `t = ReLU(t) − ReLU(−t)`, downstream sums recover the
//! original value from the pair, so the transformation is exact. A pair
//! in the final layer cannot be re-merged by a ReLU-only layer (ReLU
//! outputs are nonnegative while the original value may be negative), so
//! the result carries an output map recording how original outputs read
//! off the new output layer; [`eliminate_id_instance`] folds that map
//! into the output specification, which is how the construction is used
//! at the instance level.

use crate::ir::{Activation, ActivationKind, IrError, Layer, LinearConstraint, LinearSpec, Network, Rational, ReachInstance};

use super::ReductionError;

/// How one original output is read off the transformed network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputTerm {
    /// The value of new output node `i`.
    Direct(usize),
    /// `value(i) − value(j)` for a duplicated identity node.
    Difference(usize, usize),
}

/// A ReLU-only network plus the combination map for its outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdElimination {
    pub network: Network,
    pub outputs: Vec<OutputTerm>,
}

impl IdElimination {
    /// Evaluates the transformed network and recombines pairs; agrees
    /// bit-for-bit with the original network on every input.
    pub fn evaluate(&self, input: &[Rational]) -> Result<Vec<Rational>, IrError> {
        let raw = self.network.evaluate(input)?;
        Ok(self
            .outputs
            .iter()
            .map(|t| match t {
                OutputTerm::Direct(i) => raw[*i].clone(),
                OutputTerm::Difference(i, j) => &raw[*i] - &raw[*j],
            })
            .collect())
    }

    /// Rewrites an output-specification row over the original outputs
    /// into one over the transformed outputs.
    fn rewrite_row(&self, row: &LinearConstraint, new_dim: usize) -> LinearConstraint {
        let mut coeffs = vec![Rational::zero(); new_dim];
        for (a, term) in row.coeffs.iter().zip(&self.outputs) {
            match term {
                OutputTerm::Direct(i) => coeffs[*i] += a,
                OutputTerm::Difference(i, j) => {
                    coeffs[*i] += a;
                    coeffs[*j] -= a;
                }
            }
        }
        LinearConstraint::new(coeffs, row.cmp, row.rhs.clone())
    }
}

/// Node layout of one transformed layer: for each original node, its new
/// index and whether it was duplicated.
enum Slot {
    Single(usize),
    Pair(usize, usize),
}

/// Rewrites an `{id, relu}` network into a ReLU-only one computing the
/// identical function through the returned output map. Node count at
/// most doubles and connection count at most quadruples.
pub fn eliminate_id(net: &Network) -> Result<IdElimination, ReductionError> {
    for layer in net.layers() {
        for act in &layer.activations {
            if !matches!(act.kind(), ActivationKind::Id | ActivationKind::Relu) {
                return Err(ReductionError::UnsupportedActivation(format!(
                    "identity elimination handles id and relu only, found {}",
                    act.kind().name()
                )));
            }
        }
    }

    let mut layers = Vec::with_capacity(net.depth());
    // inputs are never duplicated
    let mut prev_slots: Vec<Slot> = (0..net.input_dim()).map(Slot::Single).collect();
    let mut last_slots: Vec<Slot> = Vec::new();
    for layer in net.layers() {
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        let mut activations = Vec::new();
        let mut slots = Vec::with_capacity(layer.width());

        let expand_row = |row: &[Rational], negate: bool| -> Vec<Rational> {
            let mut out = Vec::new();
            for (w, slot) in row.iter().zip(&prev_slots) {
                let w = if negate { -w } else { w.clone() };
                match slot {
                    Slot::Single(_) => out.push(w),
                    Slot::Pair(..) => {
                        out.push(w.clone());
                        out.push(-w);
                    }
                }
            }
            out
        };

        for (node, act) in layer.activations.iter().enumerate() {
            match act.kind() {
                ActivationKind::Relu => {
                    slots.push(Slot::Single(weights.len()));
                    weights.push(expand_row(&layer.weights[node], false));
                    biases.push(layer.biases[node].clone());
                    activations.push(Activation::relu());
                }
                ActivationKind::Id => {
                    let plus = weights.len();
                    slots.push(Slot::Pair(plus, plus + 1));
                    weights.push(expand_row(&layer.weights[node], false));
                    biases.push(layer.biases[node].clone());
                    activations.push(Activation::relu());
                    weights.push(expand_row(&layer.weights[node], true));
                    biases.push(-&layer.biases[node]);
                    activations.push(Activation::relu());
                }
                _ => unreachable!("checked above"),
            }
        }
        layers.push(Layer {
            weights,
            biases,
            activations,
        });
        last_slots = slots
            .iter()
            .map(|s| match s {
                Slot::Single(i) => Slot::Single(*i),
                Slot::Pair(i, j) => Slot::Pair(*i, *j),
            })
            .collect();
        prev_slots = slots;
    }

    let outputs = last_slots
        .iter()
        .map(|s| match s {
            Slot::Single(i) => OutputTerm::Direct(*i),
            Slot::Pair(i, j) => OutputTerm::Difference(*i, *j),
        })
        .collect();
    let network = Network::new(net.input_dim(), layers)?;
    Ok(IdElimination { network, outputs })
}

/// Instance-level identity elimination: the network is rewritten and the
/// output specification is folded through the output map, so the
/// reachability answer is preserved exactly.
pub fn eliminate_id_instance(inst: &ReachInstance) -> Result<ReachInstance, ReductionError> {
    let elim = eliminate_id(&inst.network)?;
    let new_dim = elim.network.output_dim();
    let rows = inst
        .output_spec
        .constraints
        .iter()
        .map(|row| elim.rewrite_row(row, new_dim))
        .collect();
    Ok(ReachInstance::new(
        elim.network,
        inst.input_spec.clone(),
        LinearSpec::new(new_dim, rows)?,
    )?)
}

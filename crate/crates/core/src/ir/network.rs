use serde::{Deserialize, Deserializer, Serialize};

use super::rational::dot;
use super::{Activation, IrError, Rational};

/// One computation layer: `weights` has one row per node of this layer
/// and one column per node of the previous layer (or per network input
/// for the first layer).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Vec<Vec<Rational>>,
    pub biases: Vec<Rational>,
    pub activations: Vec<Activation>,
}

impl Layer {
    pub fn width(&self) -> usize {
        self.biases.len()
    }
}

/// A strictly layered feedforward network with rational weights and
/// biases and a piecewise-linear activation per node. Node `i` of a
/// layer computes `σ_i(Σ_j w_ij · prev_j + b_i)`; the final layer's
/// values are the network output.
///
/// Construction validates that dimensions chain from `input_dim` to the
/// output and that every activation satisfies the partition invariant,
/// so a `Network` in hand is always evaluable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Network {
    #[serde(rename = "inputs")]
    input_dim: usize,
    layers: Vec<Layer>,
}

impl Network {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self, IrError> {
        let net = Network { input_dim, layers };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<(), IrError> {
        let err = |m: String| Err(IrError::InvalidNetwork(m));
        if self.input_dim == 0 {
            return err("network needs at least one input".into());
        }
        if self.layers.is_empty() {
            return err("network needs at least one layer".into());
        }
        let mut prev = self.input_dim;
        for (li, layer) in self.layers.iter().enumerate() {
            let w = layer.width();
            if w == 0 {
                return err(format!("layer {li} is empty"));
            }
            if layer.weights.len() != w || layer.activations.len() != w {
                return err(format!("layer {li}: weights/biases/activations lengths disagree"));
            }
            for (ni, row) in layer.weights.iter().enumerate() {
                if row.len() != prev {
                    return err(format!(
                        "layer {li} node {ni}: expected {prev} incoming weights, got {}",
                        row.len()
                    ));
                }
            }
            for act in &layer.activations {
                act.validate()?;
            }
            prev = w;
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("validated").width()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Total number of computation nodes.
    pub fn node_count(&self) -> usize {
        self.layers.iter().map(Layer::width).sum()
    }

    /// Number of nonzero weights (connections).
    pub fn edge_count(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter())
            .flat_map(|row| row.iter())
            .filter(|w| !w.is_zero())
            .count()
    }

    /// Exact layer-by-layer evaluation.
    pub fn evaluate(&self, input: &[Rational]) -> Result<Vec<Rational>, IrError> {
        if input.len() != self.input_dim {
            return Err(IrError::DimensionMismatch {
                expected: self.input_dim,
                got: input.len(),
            });
        }
        let mut values = input.to_vec();
        for layer in &self.layers {
            let mut next = Vec::with_capacity(layer.width());
            for ((row, bias), act) in layer
                .weights
                .iter()
                .zip(&layer.biases)
                .zip(&layer.activations)
            {
                let pre = &dot(row, &values) + bias;
                next.push(act.apply(&pre));
            }
            values = next;
        }
        Ok(values)
    }

    /// Appends identity layers until the network has `depth` layers; the
    /// computed function is unchanged.
    pub fn padded_to_depth(&self, depth: usize) -> Network {
        let mut layers = self.layers.clone();
        let m = self.output_dim();
        while layers.len() < depth {
            let weights = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                        .collect()
                })
                .collect();
            layers.push(Layer {
                weights,
                biases: vec![Rational::zero(); m],
                activations: vec![Activation::id(); m],
            });
        }
        Network {
            input_dim: self.input_dim,
            layers,
        }
    }

    /// Runs two equal-depth networks side by side on shared inputs; the
    /// output is `a`'s outputs followed by `b`'s.
    pub fn stacked(a: &Network, b: &Network) -> Result<Network, IrError> {
        if a.input_dim != b.input_dim {
            return Err(IrError::DimensionMismatch {
                expected: a.input_dim,
                got: b.input_dim,
            });
        }
        let depth = a.depth().max(b.depth());
        let a = a.padded_to_depth(depth);
        let b = b.padded_to_depth(depth);
        let mut layers = Vec::with_capacity(depth);
        for (li, (la, lb)) in a.layers.iter().zip(&b.layers).enumerate() {
            let (a_prev, b_prev) = if li == 0 {
                (a.input_dim, b.input_dim)
            } else {
                (a.layers[li - 1].width(), b.layers[li - 1].width())
            };
            let mut weights = Vec::with_capacity(la.width() + lb.width());
            for row in &la.weights {
                let mut r = row.clone();
                if li > 0 {
                    r.extend(std::iter::repeat_with(Rational::zero).take(b_prev));
                }
                weights.push(r);
            }
            for row in &lb.weights {
                let mut r = if li == 0 {
                    Vec::new()
                } else {
                    vec![Rational::zero(); a_prev]
                };
                r.extend(row.iter().cloned());
                weights.push(r);
            }
            let mut biases = la.biases.clone();
            biases.extend(lb.biases.iter().cloned());
            let mut activations = la.activations.clone();
            activations.extend(lb.activations.iter().cloned());
            layers.push(Layer {
                weights,
                biases,
                activations,
            });
        }
        Network::new(a.input_dim, layers)
    }

    /// Restricts the final layer to output `index` only.
    pub fn project_output(&self, index: usize) -> Result<Network, IrError> {
        if index >= self.output_dim() {
            return Err(IrError::DimensionMismatch {
                expected: self.output_dim(),
                got: index,
            });
        }
        let mut layers = self.layers.clone();
        let last = layers.last_mut().expect("validated");
        *last = Layer {
            weights: vec![last.weights[index].clone()],
            biases: vec![last.biases[index].clone()],
            activations: vec![last.activations[index].clone()],
        };
        Ok(Network {
            input_dim: self.input_dim,
            layers,
        })
    }

    /// Total bit size of the weight/bias encoding plus node and input
    /// counts; the size measure used by reduction receipts.
    pub fn encoded_size(&self) -> u64 {
        let data: u64 = self
            .layers
            .iter()
            .flat_map(|l| l.weights.iter().flatten().chain(l.biases.iter()))
            .map(Rational::bit_size)
            .sum();
        data + self.node_count() as u64 + self.input_dim as u64
    }
}

impl<'de> Deserialize<'de> for Network {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            inputs: usize,
            layers: Vec<Layer>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Network::new(raw.inputs, raw.layers).map_err(serde::de::Error::custom)
    }
}

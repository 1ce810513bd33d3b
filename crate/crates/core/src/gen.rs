//! Deterministic random instance generation. A seed fully determines
//! the output; weights and biases are uniform rationals with bounded
//! numerator and denominator; with `planted` the input/output
//! specifications are built around a pre-drawn witness, so the instance
//! is satisfiable by construction.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::ir::{
    Activation, Cmp, Layer, LinearConstraint, LinearSpec, Network, Rational, ReachInstance,
};

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub input_dim: usize,
    pub depth: usize,
    pub width: usize,
    pub activation_set: Vec<Activation>,
    /// Inclusive bounds for weights, biases, and spec coefficients.
    pub weight_range: (Rational, Rational),
    /// Rows per specification (input and output each).
    pub constraint_count: usize,
    pub planted: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            input_dim: 2,
            depth: 2,
            width: 2,
            activation_set: vec![Activation::relu(), Activation::id()],
            weight_range: (Rational::from_int(-2), Rational::from_int(2)),
            constraint_count: 2,
            planted: false,
        }
    }
}

const MAX_DENOMINATOR: i64 = 4;

/// Uniform rational in `[lo, hi]` with denominator ≤ 4.
fn draw_rational(rng: &mut ChaCha12Rng, lo: &Rational, hi: &Rational) -> Rational {
    let den = rng.gen_range(1..=MAX_DENOMINATOR);
    let d = Rational::from_int(den);
    let lo_num = (lo * &d).ceil_int();
    let hi_num = (hi * &d).floor_int();
    let (lo_i, hi_i) = (
        lo_num.to_i64().unwrap_or(i64::MIN / 2),
        hi_num.to_i64().unwrap_or(i64::MAX / 2),
    );
    if lo_i >= hi_i {
        return Rational::new(BigInt::from(lo_i), BigInt::from(den));
    }
    Rational::new(BigInt::from(rng.gen_range(lo_i..=hi_i)), BigInt::from(den))
}

fn draw_row(rng: &mut ChaCha12Rng, cfg: &GenConfig, width: usize) -> Vec<Rational> {
    let (lo, hi) = &cfg.weight_range;
    let mut coeffs: Vec<Rational> = (0..width).map(|_| draw_rational(rng, lo, hi)).collect();
    if coeffs.iter().all(Rational::is_zero) {
        coeffs[0] = Rational::one();
    }
    coeffs
}

/// One specification side: rows are anchored at `point` when given
/// (satisfied there by construction), otherwise free.
fn draw_spec(
    rng: &mut ChaCha12Rng,
    cfg: &GenConfig,
    dim: usize,
    point: Option<&[Rational]>,
) -> LinearSpec {
    let mut rows = Vec::with_capacity(cfg.constraint_count);
    for _ in 0..cfg.constraint_count {
        let coeffs = draw_row(rng, cfg, dim);
        let eq = rng.gen_ratio(1, 5);
        let row = match point {
            Some(p) => {
                let at = crate::ir::LinearConstraint::new(coeffs.clone(), Cmp::Le, Rational::zero())
                    .eval_lhs(p);
                if eq {
                    LinearConstraint::new(coeffs, Cmp::Eq, at)
                } else {
                    let slack = draw_rational(rng, &Rational::zero(), &Rational::from_int(2));
                    LinearConstraint::new(coeffs, Cmp::Le, &at + &slack)
                }
            }
            None => {
                let (lo, hi) = &cfg.weight_range;
                let rhs = draw_rational(rng, &(lo + lo), &(hi + hi));
                let cmp = if eq { Cmp::Eq } else { Cmp::Le };
                LinearConstraint::new(coeffs, cmp, rhs)
            }
        };
        rows.push(row);
    }
    LinearSpec {
        num_vars: dim,
        constraints: rows,
    }
}

/// Generates one reachability instance; identical configurations yield
/// identical instances.
pub fn generate(cfg: &GenConfig) -> ReachInstance {
    assert!(cfg.input_dim >= 1 && cfg.depth >= 1 && cfg.width >= 1);
    assert!(!cfg.activation_set.is_empty(), "need at least one activation");
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = cfg.weight_range.clone();

    let mut layers = Vec::with_capacity(cfg.depth);
    let mut prev = cfg.input_dim;
    for _ in 0..cfg.depth {
        let width = cfg.width;
        let mut weights = Vec::with_capacity(width);
        let mut biases = Vec::with_capacity(width);
        let mut activations = Vec::with_capacity(width);
        for _ in 0..width {
            weights.push((0..prev).map(|_| draw_rational(&mut rng, &lo, &hi)).collect());
            biases.push(draw_rational(&mut rng, &lo, &hi));
            let pick = rng.gen_range(0..cfg.activation_set.len());
            activations.push(cfg.activation_set[pick].clone());
        }
        layers.push(Layer {
            weights,
            biases,
            activations,
        });
        prev = width;
    }
    let network = Network::new(cfg.input_dim, layers).expect("generated dimensions chain");

    let witness: Option<Vec<Rational>> = cfg.planted.then(|| {
        (0..cfg.input_dim)
            .map(|_| draw_rational(&mut rng, &Rational::from_int(-2), &Rational::from_int(2)))
            .collect()
    });
    let image = witness
        .as_ref()
        .map(|w| network.evaluate(w).expect("witness evaluates"));

    let input_spec = draw_spec(&mut rng, cfg, cfg.input_dim, witness.as_deref());
    let output_spec = draw_spec(&mut rng, cfg, network.output_dim(), image.as_deref());
    ReachInstance::new(network, input_spec, output_spec).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_reach, ReachStatus, SolverConfig};

    #[test]
    fn same_seed_same_instance() {
        let cfg = GenConfig {
            seed: 42,
            ..Default::default()
        };
        assert_eq!(generate(&cfg), generate(&cfg));
        let other = GenConfig {
            seed: 43,
            ..Default::default()
        };
        assert_ne!(generate(&cfg), generate(&other));
    }

    #[test]
    fn planted_instances_are_satisfiable() {
        for seed in 0..10 {
            let cfg = GenConfig {
                seed,
                planted: true,
                ..Default::default()
            };
            let inst = generate(&cfg);
            let verdict = solve_reach(&inst, &SolverConfig::default()).unwrap();
            assert_eq!(verdict.status, ReachStatus::Sat, "seed {seed}");
        }
    }
}

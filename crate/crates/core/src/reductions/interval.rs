//! Reductions between the interval property and the other two problems.

use crate::ir::{
    Activation, Cmp, Layer, LinearConstraint, LinearSpec, Network, Rational, ReachInstance,
};

use super::equivalence::ne_to_reach;
use super::support::{normalize_ge, sign_layer, unit_row, with_input_carries};
use super::ReductionError;

/// Interval property → reachability (complement): one reachability
/// instance per output constraint, with that constraint replaced by its
/// closed-complement negation (an equality contributes its two strict
/// sides as separate instances). The property holds iff every returned
/// instance is unsatisfiable; the first satisfiable one provides the
/// counterexample.
pub fn vip_to_reach(inst: &ReachInstance) -> Vec<ReachInstance> {
    let mut out = Vec::new();
    for row in &inst.output_spec.constraints {
        for negated in row.complement() {
            out.push(ReachInstance {
                network: inst.network.clone(),
                input_spec: inst.input_spec.clone(),
                output_spec: LinearSpec {
                    num_vars: inst.output_spec.num_vars,
                    constraints: vec![negated],
                },
            });
        }
    }
    out
}

/// Which activation family implements the appended indicator layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovipVariant {
    Heaviside,
    Sign,
    Relu,
}

impl CovipVariant {
    pub fn name(self) -> &'static str {
        match self {
            CovipVariant::Heaviside => "heaviside",
            CovipVariant::Sign => "sign",
            CovipVariant::Relu => "relu",
        }
    }
}

/// Rewrites every output row into `Σ a·y ≤ b` form; equalities split.
fn normalize_le(spec: &LinearSpec) -> Result<Vec<(Vec<Rational>, Rational)>, ReductionError> {
    let mut rows = Vec::new();
    for c in &spec.constraints {
        match c.cmp {
            Cmp::Lt => return Err(ReductionError::StrictUnsupported("output specification")),
            Cmp::Le => rows.push((c.coeffs.clone(), c.rhs.clone())),
            Cmp::Eq => {
                rows.push((c.coeffs.clone(), c.rhs.clone()));
                rows.push((c.coeffs.iter().map(|x| -x).collect(), -&c.rhs));
            }
        }
    }
    Ok(rows)
}

/// Strictly open interval `(lo, hi)` on a single output.
fn open_interval_spec(lo: Rational, hi: Rational) -> LinearSpec {
    LinearSpec {
        num_vars: 1,
        constraints: vec![
            // y > lo  ⇔  -y < -lo
            LinearConstraint::new(vec![-Rational::one()], Cmp::Lt, -lo),
            LinearConstraint::new(vec![Rational::one()], Cmp::Lt, hi),
        ],
    }
}

/// Reachability → interval property (complement): appends indicator
/// layers that conjoin the output constraints into one node and asks the
/// interval property of that node. The instance is satisfiable iff the
/// returned interval property is violated.
///
/// Variants: with Heaviside the conjunction is
/// `â = H(Σ_k H(b_k − Σ a·y) − K)` (`1` iff all rows hold, using
/// `H(0) = 1`) against the interval `(-1/2, 1/2)`; with sign the
/// two-node indicator `sign(sign(b_k − Σ a·y) + ½)` feeds
/// `â = sign(Σ λ_k − K)` (`0` iff all rows hold) against
/// `(-3/2, -1/2)`; with ReLU the violation magnitudes
/// `ReLU(Σ a·y − b_k)` aggregate into `â = ReLU(Σ ā_k)` (`0` iff all
/// rows hold) against `(0, ∞)`.
pub fn reach_to_vip(
    inst: &ReachInstance,
    variant: CovipVariant,
) -> Result<ReachInstance, ReductionError> {
    let rows = normalize_le(&inst.output_spec)?;
    let m = inst.network.output_dim();
    let k = rows.len();
    let mut layers = inst.network.layers().to_vec();

    let (network, out_spec) = match variant {
        CovipVariant::Heaviside => {
            if k == 0 {
                layers.push(Layer {
                    weights: vec![vec![Rational::zero(); m]],
                    biases: vec![Rational::zero()],
                    activations: vec![Activation::heaviside()],
                });
            } else {
                let mut w = Vec::with_capacity(k);
                let mut b = Vec::with_capacity(k);
                for (coeffs, rhs) in &rows {
                    w.push(coeffs.iter().map(|a| -a).collect());
                    b.push(rhs.clone());
                }
                layers.push(Layer {
                    weights: w,
                    biases: b,
                    activations: vec![Activation::heaviside(); k],
                });
                layers.push(Layer {
                    weights: vec![vec![Rational::one(); k]],
                    biases: vec![-Rational::from_int(k as i64)],
                    activations: vec![Activation::heaviside()],
                });
            }
            (
                Network::new(inst.network.input_dim(), layers)?,
                open_interval_spec(Rational::new(-1, 2), Rational::new(1, 2)),
            )
        }
        CovipVariant::Sign => {
            if k == 0 {
                layers.push(sign_layer(
                    vec![vec![Rational::zero(); m]],
                    vec![Rational::zero()],
                ));
            } else {
                let mut w = Vec::with_capacity(k);
                let mut b = Vec::with_capacity(k);
                for (coeffs, rhs) in &rows {
                    w.push(coeffs.iter().map(|a| -a).collect());
                    b.push(rhs.clone());
                }
                layers.push(sign_layer(w, b));
                let ind = (0..k).map(|i| unit_row(k, i, Rational::one())).collect();
                layers.push(sign_layer(ind, vec![Rational::new(1, 2); k]));
                layers.push(sign_layer(
                    vec![vec![Rational::one(); k]],
                    vec![-Rational::from_int(k as i64)],
                ));
            }
            (
                Network::new(inst.network.input_dim(), layers)?,
                open_interval_spec(Rational::new(-3, 2), Rational::new(-1, 2)),
            )
        }
        CovipVariant::Relu => {
            if k == 0 {
                layers.push(Layer {
                    weights: vec![vec![Rational::zero(); m]],
                    biases: vec![Rational::zero()],
                    activations: vec![Activation::relu()],
                });
            } else {
                let mut w = Vec::with_capacity(k);
                let mut b = Vec::with_capacity(k);
                for (coeffs, rhs) in &rows {
                    w.push(coeffs.clone());
                    b.push(-rhs);
                }
                layers.push(Layer {
                    weights: w,
                    biases: b,
                    activations: vec![Activation::relu(); k],
                });
                layers.push(Layer {
                    weights: vec![vec![Rational::one(); k]],
                    biases: vec![Rational::zero()],
                    activations: vec![Activation::relu()],
                });
            }
            // violations make â > 0, membership makes â = 0
            let spec = LinearSpec {
                num_vars: 1,
                constraints: vec![LinearConstraint::new(
                    vec![-Rational::one()],
                    Cmp::Lt,
                    Rational::zero(),
                )],
            };
            (Network::new(inst.network.input_dim(), layers)?, spec)
        }
    };
    Ok(ReachInstance::new(network, inst.input_spec.clone(), out_spec)?)
}

/// Equivalence → interval property: the comparator network of
/// [`ne_to_reach`] composed with the sign-variant [`reach_to_vip`]. The
/// networks are equivalent iff the resulting interval property holds.
pub fn ne_to_vip(n1: &Network, n2: &Network) -> Result<ReachInstance, ReductionError> {
    reach_to_vip(&ne_to_reach(n1, n2)?, CovipVariant::Sign)
}

/// One output row in `Σ a·v ≥ c` form with its strictness.
struct HoldRow {
    coeffs: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

/// Output rows under the interval property's strict interpretation:
/// `≤`/`<` rows must hold strictly, equalities exactly (their two weak
/// sides).
fn normalize_vip_output(spec: &LinearSpec) -> Vec<HoldRow> {
    let mut rows = Vec::new();
    for c in &spec.constraints {
        match c.cmp {
            Cmp::Le | Cmp::Lt => rows.push(HoldRow {
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
                rhs: -&c.rhs,
                strict: true,
            }),
            Cmp::Eq => {
                rows.push(HoldRow {
                    coeffs: c.coeffs.clone(),
                    rhs: c.rhs.clone(),
                    strict: false,
                });
                rows.push(HoldRow {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    rhs: -&c.rhs,
                    strict: false,
                });
            }
        }
    }
    rows
}

/// Interval property → equivalence: builds a pair that is equivalent iff
/// the property holds.
///
/// The first network computes `d = sign(b + c − ½)` where `b` is `0`
/// when the input satisfies the input specification and `-1` otherwise,
/// and `c` is `-1` when the network output lies in the open output
/// polyhedron and `1` otherwise, so `d = 1` exactly on counterexamples
/// and `-1` elsewhere. The second network is the constant `-1`. Strict
/// output rows use the strict-hold indicator `sign(s − ½)`, weak
/// (equality-derived) rows the weak indicator `sign(s + ½)`.
pub fn vip_to_ne(inst: &ReachInstance) -> Result<(Network, Network), ReductionError> {
    let input_rows = normalize_ge(&inst.input_spec, "input specification")?;
    let output_rows = normalize_vip_output(&inst.output_spec);
    let n = inst.network.input_dim();
    let m = inst.network.output_dim();
    let l = input_rows.len();
    let k = output_rows.len();

    let carried = with_input_carries(&inst.network);
    let top_width = m + n;
    let mut layers = carried.layers().to_vec();

    // raw signs s of every row: input rows over the carries, output rows
    // over the outputs; when a side is empty its aggregate is wired as a
    // constant instead.
    let total = l + k;
    let ind_width = total.max(1);
    let mut s_w = Vec::with_capacity(total);
    let mut s_b = Vec::with_capacity(total);
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
    let s_width = total.max(1);
    if total == 0 {
        s_w.push(vec![Rational::zero(); top_width]);
        s_b.push(Rational::zero());
    }
    layers.push(sign_layer(s_w, s_b));

    // per-row hold indicators: weak rows get sign(s + ½), strict rows
    // sign(s − ½); both are 1 iff the row holds in its own sense.
    let mut ind_w = Vec::with_capacity(s_width);
    let mut ind_b = Vec::with_capacity(s_width);
    for i in 0..l {
        ind_w.push(unit_row(s_width, i, Rational::one()));
        ind_b.push(Rational::new(1, 2));
    }
    for (i, row) in output_rows.iter().enumerate() {
        ind_w.push(unit_row(s_width, l + i, Rational::one()));
        ind_b.push(if row.strict {
            Rational::new(-1, 2)
        } else {
            Rational::new(1, 2)
        });
    }
    if total == 0 {
        ind_w.push(unit_row(s_width, 0, Rational::zero()));
        ind_b.push(Rational::zero());
    }
    layers.push(sign_layer(ind_w, ind_b));

    // b = sign(Σ_input λ/ℓ − 1): 0 iff the input specification holds;
    // c' = sign(Σ_output ind − k): 0 iff the output side holds.
    let mut b_row = vec![Rational::zero(); ind_width];
    let b_bias = if l == 0 {
        Rational::zero()
    } else {
        for item in b_row.iter_mut().take(l) {
            *item = Rational::new(1, l as i64);
        }
        -Rational::one()
    };
    let mut c_row = vec![Rational::zero(); ind_width];
    let c_bias = if k == 0 {
        Rational::zero()
    } else {
        for item in c_row.iter_mut().skip(l).take(k) {
            *item = Rational::one();
        }
        -Rational::from_int(k as i64)
    };
    layers.push(sign_layer(vec![b_row, c_row], vec![b_bias, c_bias]));

    // carry b, flip c' into c = sign(-c' - ½) ∈ {-1 (in B), 1 (not in B)}
    layers.push(Layer {
        weights: vec![
            unit_row(2, 0, Rational::one()),
            unit_row(2, 1, -Rational::one()),
        ],
        biases: vec![Rational::zero(), Rational::new(-1, 2)],
        activations: vec![Activation::id(), Activation::sign()],
    });

    // d = sign(b + c − ½)
    layers.push(sign_layer(
        vec![vec![Rational::one(), Rational::one()]],
        vec![Rational::new(-1, 2)],
    ));
    let witness_net = Network::new(n, layers)?;

    let constant = Network::new(
        n,
        vec![
            sign_layer(vec![unit_row(n, 0, Rational::one())], vec![Rational::zero()]),
            sign_layer(vec![vec![Rational::one()]], vec![Rational::from_int(-2)]),
        ],
    )?;
    Ok((witness_net, constant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{
        solve_ne, solve_reach, solve_vip, NeStatus, ReachStatus, SolverConfig, VipStatus,
    };

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn id_net() -> Network {
        Network::new(
            1,
            vec![Layer {
                weights: vec![vec![r(1, 1)]],
                biases: vec![r(0, 1)],
                activations: vec![Activation::id()],
            }],
        )
        .unwrap()
    }

    fn relu_net() -> Network {
        Network::new(
            1,
            vec![Layer {
                weights: vec![vec![r(1, 1)]],
                biases: vec![r(0, 1)],
                activations: vec![Activation::relu()],
            }],
        )
        .unwrap()
    }

    fn unit_box_input() -> LinearSpec {
        LinearSpec::new(
            1,
            vec![
                LinearConstraint::new(vec![r(-1, 1)], Cmp::Le, r(0, 1)),
                LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn complement_instances() {
        // output {y < 1, y > -1} gives instances {y ≥ 1} and {y ≤ -1}
        let inst = ReachInstance::new(
            id_net(),
            unit_box_input(),
            LinearSpec::new(
                1,
                vec![
                    LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(1, 1)),
                    LinearConstraint::new(vec![r(-1, 1)], Cmp::Lt, r(1, 1)),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let queries = vip_to_reach(&inst);
        assert_eq!(queries.len(), 2);
        assert_eq!(
            queries[0].output_spec.constraints[0],
            LinearConstraint::new(vec![r(-1, 1)], Cmp::Le, r(-1, 1))
        );
        assert_eq!(
            queries[1].output_spec.constraints[0],
            LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(-1, 1))
        );
        // empty output spec: no queries, property vacuously holds
        let empty = ReachInstance::new(id_net(), unit_box_input(), LinearSpec::empty(1)).unwrap();
        assert!(vip_to_reach(&empty).is_empty());
        // id net on [0,1] with y < 2: the single negation y ≥ 2 is unsat
        let inst = ReachInstance::new(
            id_net(),
            unit_box_input(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(2, 1))])
                .unwrap(),
        )
        .unwrap();
        let queries = vip_to_reach(&inst);
        assert_eq!(queries.len(), 1);
        let cfg = SolverConfig::default();
        assert_eq!(
            solve_reach(&queries[0], &cfg).unwrap().status,
            ReachStatus::Unsat
        );
    }

    fn reach_cases() -> Vec<(ReachInstance, ReachStatus)> {
        // satisfiable: relu on x ≤ 0 reaching y ≤ 0
        let sat = ReachInstance::new(
            relu_net(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(0, 1))])
                .unwrap(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(0, 1))])
                .unwrap(),
        )
        .unwrap();
        // unsatisfiable: relu on x ≤ -1 reaching y ≥ 1
        let unsat = ReachInstance::new(
            relu_net(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(-1, 1))])
                .unwrap(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(-1, 1)], Cmp::Le, r(-1, 1))])
                .unwrap(),
        )
        .unwrap();
        vec![(sat, ReachStatus::Sat), (unsat, ReachStatus::Unsat)]
    }

    #[test]
    fn covip_polarity_all_variants() {
        let cfg = SolverConfig::default();
        for (inst, expect) in reach_cases() {
            for variant in [CovipVariant::Heaviside, CovipVariant::Sign, CovipVariant::Relu] {
                let vip = reach_to_vip(&inst, variant).unwrap();
                let verdict = solve_vip(&vip, &cfg).unwrap();
                let expected = match expect {
                    ReachStatus::Sat => VipStatus::Violated,
                    ReachStatus::Unsat => VipStatus::Holds,
                };
                assert_eq!(verdict.status, expected, "variant {:?}", variant);
            }
        }
    }

    #[test]
    fn heaviside_indicator_hits_one_on_boundary() {
        // y ≤ 1 met with equality: ā = H(0) = 1, so â = 1
        let inst = ReachInstance::new(
            id_net(),
            LinearSpec::empty(1),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(1, 1))])
                .unwrap(),
        )
        .unwrap();
        let vip = reach_to_vip(&inst, CovipVariant::Heaviside).unwrap();
        assert_eq!(vip.network.evaluate(&[r(1, 1)]).unwrap(), vec![r(1, 1)]);
        assert_eq!(vip.network.evaluate(&[r(2, 1)]).unwrap(), vec![r(0, 1)]);
    }

    #[test]
    fn relu_indicator_is_zero_exactly_on_members() {
        let inst = ReachInstance::new(
            id_net(),
            LinearSpec::empty(1),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(1, 1))])
                .unwrap(),
        )
        .unwrap();
        let vip = reach_to_vip(&inst, CovipVariant::Relu).unwrap();
        assert_eq!(vip.network.evaluate(&[r(1, 1)]).unwrap(), vec![r(0, 1)]);
        assert_eq!(vip.network.evaluate(&[r(0, 1)]).unwrap(), vec![r(0, 1)]);
        assert_eq!(vip.network.evaluate(&[r(3, 1)]).unwrap(), vec![r(2, 1)]);
    }

    #[test]
    fn ne_to_vip_polarity() {
        let cfg = SolverConfig::default();
        let vip = ne_to_vip(&id_net(), &id_net()).unwrap();
        assert_eq!(solve_vip(&vip, &cfg).unwrap().status, VipStatus::Holds);
        let vip = ne_to_vip(&id_net(), &relu_net()).unwrap();
        assert_eq!(solve_vip(&vip, &cfg).unwrap().status, VipStatus::Violated);
    }

    #[test]
    fn vip_to_ne_polarity() {
        let cfg = SolverConfig::default();
        // holds: id on [0,1] stays inside (-1, 2)
        let holds = ReachInstance::new(
            id_net(),
            unit_box_input(),
            LinearSpec::new(
                1,
                vec![
                    LinearConstraint::new(vec![r(-1, 1)], Cmp::Lt, r(1, 1)),
                    LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(2, 1)),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(solve_vip(&holds, &cfg).unwrap().status, VipStatus::Holds);
        let (a, b) = vip_to_ne(&holds).unwrap();
        assert_eq!(solve_ne(&a, &b, &cfg).unwrap().status, NeStatus::Equivalent);

        // violated at the boundary: y < 1 fails at x = 1
        let violated = ReachInstance::new(
            id_net(),
            unit_box_input(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(1, 1))])
                .unwrap(),
        )
        .unwrap();
        assert_eq!(solve_vip(&violated, &cfg).unwrap().status, VipStatus::Violated);
        let (a, b) = vip_to_ne(&violated).unwrap();
        assert_eq!(solve_ne(&a, &b, &cfg).unwrap().status, NeStatus::Distinct);
        // the constant companion is -1 everywhere we sample
        for x in [-2i64, 0, 1, 5] {
            assert_eq!(b.evaluate(&[r(x, 1)]).unwrap(), vec![r(-1, 1)]);
        }
    }

    #[test]
    fn vip_to_ne_witness_values() {
        // d must be 1 exactly on counterexamples, -1 elsewhere
        let violated = ReachInstance::new(
            id_net(),
            unit_box_input(),
            LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(1, 1))])
                .unwrap(),
        )
        .unwrap();
        let (a, _) = vip_to_ne(&violated).unwrap();
        // x = 1: inside A, y = 1 breaks y < 1 → counterexample → 1
        assert_eq!(a.evaluate(&[r(1, 1)]).unwrap(), vec![r(1, 1)]);
        // x = 1/2: inside A, y < 1 holds → -1
        assert_eq!(a.evaluate(&[r(1, 2)]).unwrap(), vec![r(-1, 1)]);
        // x = 2: outside A → -1
        assert_eq!(a.evaluate(&[r(2, 1)]).unwrap(), vec![r(-1, 1)]);
    }
}

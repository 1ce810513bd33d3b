//! Primitive-positive interpretations: rewriting constraint instances
//! over all of ℝ into equisatisfiable instances whose intended domain is
//! the nonnegative reals, and from the nonnegative reals into the
//! interval `(0, 1/n]`.
//!
//! Each transformation returns the rewritten instance together with a
//! witness map that extends any satisfying assignment of the input to a
//! satisfying assignment of the output, which is how the
//! preservation contract is tested exactly. Two anchor variables (the
//! unit and, for the interval form, the reciprocal `1/n`) pin the
//! constants; anchor and helper variables may take values outside the
//! target interval, the designated representative variables stay inside
//! it.

use num_bigint::BigUint;
use num_traits::One as _;
use serde::{Deserialize, Serialize};

use crate::ir::Rational;
use crate::reductions::{CspConstraint, CspInstance, VarId};

use super::GadgetError;

/// Descriptive metadata of an interpretation: dimension, domain and
/// defining formula templates over the constraint relations, and the
/// coordinate map sending representatives back to original values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub dimension: usize,
    pub domain_formula: String,
    pub defining_formulas: Vec<(String, String)>,
    pub coordinate_map: String,
}

impl Interpretation {
    /// Pairs of nonnegative parts with product zero; `h(a, b) = a − b`.
    pub fn positive() -> Self {
        Interpretation {
            dimension: 2,
            domain_formula: "leq(zero, a) & leq(zero, b) & mul(a, b, zero)".into(),
            defining_formulas: vec![
                ("one".into(), "one(a)".into()),
                (
                    "plus".into(),
                    "exists e, t_a, t_b: plus(a1, a2, t_a) & plus(a3, e, t_a) \
                     & plus(b1, b2, t_b) & plus(b3, e, t_b) & leq(zero, e)"
                        .into(),
                ),
                (
                    "mul".into(),
                    "exists e, p11, p22, p12, p21, t_a, t_b: mul(a1, a2, p11) & mul(b1, b2, p22) \
                     & mul(a1, b2, p12) & mul(b1, a2, p21) & plus(p11, p22, t_a) & plus(a3, e, t_a) \
                     & plus(p12, p21, t_b) & plus(b3, e, t_b) & leq(zero, e)"
                        .into(),
                ),
                (
                    "leq".into(),
                    "exists s1, s2: plus(a1, b2, s1) & plus(a2, b1, s2) & leq(s1, s2)".into(),
                ),
            ],
            coordinate_map: "h(a, b) = a - b".into(),
        }
    }

    /// Reciprocals of the shift by `n`; `h(u) = 1/u − n`.
    pub fn unit_interval(n: u64) -> Self {
        Interpretation {
            dimension: 1,
            domain_formula: format!(
                "leq(zero, u) & leq(u, nu) & exists w: mul(u, w, one)  [nu = 1/{n}]"
            ),
            defining_formulas: vec![
                (
                    "one".into(),
                    format!("exists p, q: mul(u, u, p) & q = {}·p & leq(q, u) & leq(u, q)", n + 1),
                ),
                ("leq".into(), "leq(u2, u1)".into()),
                (
                    "plus".into(),
                    "exists e, m1, m2, m3, k1, k2, k3: mul(u2, e, m1) & mul(u1, e, m2) \
                     & mul(u1, u2, m3) & plus(m1, m2, m3) & mul(nu, e, k1) & mul(u3, e, k2) \
                     & mul(u3, nu, k3) & plus(k1, k2, k3)"
                        .into(),
                ),
                (
                    "mul".into(),
                    format!(
                        "exists m3, mxw, myw, r, sums: mul(u1, u2, m3) & mul(u1, u3, mxw) \
                         & mul(u2, u3, myw) & mul(m3, u3, r) & u3 + {}·r = m3 + {n}·mxw + {n}·myw",
                        n * n + n
                    ),
                ),
            ],
            coordinate_map: format!("h(u) = 1/u - {n}"),
        }
    }

    /// Checks dimension and that every formula template only references
    /// declared relations.
    pub fn validate(&self) -> Result<(), GadgetError> {
        if self.dimension == 0 {
            return Err(GadgetError::InvalidInput("interpretation dimension 0".into()));
        }
        let allowed = ["leq", "plus", "one", "mul"];
        let check = |formula: &str| -> Result<(), GadgetError> {
            let bytes = formula.as_bytes();
            for (i, &b) in bytes.iter().enumerate() {
                if b == b'(' {
                    let mut j = i;
                    while j > 0 && (bytes[j - 1] as char).is_ascii_alphanumeric() {
                        j -= 1;
                    }
                    let name = &formula[j..i];
                    if !name.is_empty()
                        && name.chars().all(|c| c.is_ascii_alphabetic())
                        && !allowed.contains(&name)
                    {
                        return Err(GadgetError::InvalidInput(format!(
                            "formula references undeclared relation `{name}`"
                        )));
                    }
                }
            }
            Ok(())
        };
        check(&self.domain_formula)?;
        for (_, f) in &self.defining_formulas {
            check(f)?;
        }
        Ok(())
    }
}

/// How one output variable's value is derived when extending a witness.
#[derive(Debug, Clone)]
enum Rule {
    /// `max(x, 0)` of an original variable.
    PosPart(VarId),
    /// `max(−x, 0)` of an original variable.
    NegPart(VarId),
    /// `1 / (x + n)` of an original variable.
    ReciprocalShift(VarId, u64),
    Constant(Rational),
    /// sum of two earlier output variables
    Sum(usize, usize),
    /// first minus second
    Diff(usize, usize),
    Product(usize, usize),
    /// `(u·v)/(u + v)`, the reciprocal of the sum of reciprocals
    Harmonic(usize, usize),
    /// `k · value`
    Scale(Rational, usize),
    /// `1 / value`
    Reciprocal(usize),
}

/// A rewritten instance plus the recipe turning any satisfying
/// assignment of the source into one of the target.
#[derive(Debug, Clone)]
pub struct InterpretedInstance {
    pub csp: CspInstance,
    pub interpretation: Interpretation,
    rules: Vec<Rule>,
}

impl InterpretedInstance {
    /// Extends a satisfying assignment of the source instance to the
    /// full variable set of the rewritten instance.
    pub fn map_witness(&self, original: &[Rational]) -> Vec<Rational> {
        let mut vals: Vec<Rational> = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let v = match rule {
                Rule::PosPart(x) => {
                    let v = &original[*x];
                    if v.is_negative() {
                        Rational::zero()
                    } else {
                        v.clone()
                    }
                }
                Rule::NegPart(x) => {
                    let v = &original[*x];
                    if v.is_negative() {
                        -v
                    } else {
                        Rational::zero()
                    }
                }
                Rule::ReciprocalShift(x, n) => {
                    (&original[*x] + &Rational::from_int(*n as i64)).recip()
                }
                Rule::Constant(c) => c.clone(),
                Rule::Sum(a, b) => &vals[*a] + &vals[*b],
                Rule::Diff(a, b) => &vals[*a] - &vals[*b],
                Rule::Product(a, b) => &vals[*a] * &vals[*b],
                Rule::Harmonic(a, b) => {
                    let p = &vals[*a] * &vals[*b];
                    let s = &vals[*a] + &vals[*b];
                    &p / &s
                }
                Rule::Scale(k, a) => k * &vals[*a],
                Rule::Reciprocal(a) => vals[*a].recip(),
            };
            vals.push(v);
        }
        vals
    }
}

fn reject_graphs(csp: &CspInstance, what: &str) -> Result<(), GadgetError> {
    if csp.has_fn_graph() {
        return Err(GadgetError::InvalidInput(format!(
            "{what} accepts only order, addition, unit, and multiplication constraints"
        )));
    }
    Ok(())
}

struct Builder {
    csp: CspInstance,
    rules: Vec<Rule>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            csp: CspInstance::new(0),
            rules: Vec::new(),
        }
    }

    fn var(&mut self, rule: Rule) -> VarId {
        let id = self.csp.fresh_var();
        self.rules.push(rule);
        id
    }

    fn push(&mut self, c: CspConstraint) {
        self.csp.push(c);
    }

    /// Emits a doubling chain for `k · base` and returns the final
    /// variable; every intermediate carries its multiplier of `base`.
    fn times(&mut self, k: &BigUint, base: VarId) -> VarId {
        if k.is_one() {
            return base;
        }
        let bits = k.bits();
        let mut cur = base;
        let mut mult = BigUint::one();
        for i in (0..bits - 1).rev() {
            mult = &mult + &mult;
            let d = self.var(Rule::Scale(big_to_rat(&mult), base));
            self.push(CspConstraint::Plus(cur, cur, d));
            cur = d;
            if k.bit(i) {
                mult = &mult + BigUint::one();
                let a = self.var(Rule::Scale(big_to_rat(&mult), base));
                self.push(CspConstraint::Plus(cur, base, a));
                cur = a;
            }
        }
        cur
    }
}

fn big_to_rat(k: &BigUint) -> Rational {
    Rational::from_int(num_bigint::BigInt::from(k.clone()))
}

/// Rewrites an instance over ℝ into one whose solutions over the
/// nonnegative reals correspond exactly: every variable becomes a pair
/// of nonnegative parts with product zero, related by
/// `h(a, b) = a − b`.
pub fn interpret_positive(csp: &CspInstance) -> Result<InterpretedInstance, GadgetError> {
    csp.validate()
        .map_err(|e| GadgetError::InvalidInput(e.to_string()))?;
    reject_graphs(csp, "the positive-domain interpretation")?;

    let mut b = Builder::new();
    let zero = b.var(Rule::Constant(Rational::zero()));
    b.push(CspConstraint::Plus(zero, zero, zero));

    let nonneg = |b: &mut Builder, v: VarId| {
        b.push(CspConstraint::Leq(zero, v));
    };

    // pair per original variable
    let mut pairs = Vec::with_capacity(csp.num_vars);
    for x in 0..csp.num_vars {
        let a = b.var(Rule::PosPart(x));
        let neg = b.var(Rule::NegPart(x));
        nonneg(&mut b, a);
        nonneg(&mut b, neg);
        b.push(CspConstraint::Mul(a, neg, zero));
        pairs.push((a, neg));
    }

    for c in &csp.constraints {
        match c {
            CspConstraint::One(x) => {
                b.push(CspConstraint::One(pairs[*x].0));
            }
            CspConstraint::Leq(x, y) => {
                let s1 = b.var(Rule::Sum(pairs[*x].0, pairs[*y].1));
                nonneg(&mut b, s1);
                b.push(CspConstraint::Plus(pairs[*x].0, pairs[*y].1, s1));
                let s2 = b.var(Rule::Sum(pairs[*y].0, pairs[*x].1));
                nonneg(&mut b, s2);
                b.push(CspConstraint::Plus(pairs[*y].0, pairs[*x].1, s2));
                b.push(CspConstraint::Leq(s1, s2));
            }
            CspConstraint::Plus(x, y, w) => {
                let (ax, bx) = pairs[*x];
                let (ay, by) = pairs[*y];
                let (aw, bw) = pairs[*w];
                let ta = b.var(Rule::Sum(ax, ay));
                nonneg(&mut b, ta);
                b.push(CspConstraint::Plus(ax, ay, ta));
                let eps = b.var(Rule::Diff(ta, aw));
                nonneg(&mut b, eps);
                b.push(CspConstraint::Plus(aw, eps, ta));
                let tb = b.var(Rule::Sum(bx, by));
                nonneg(&mut b, tb);
                b.push(CspConstraint::Plus(bx, by, tb));
                b.push(CspConstraint::Plus(bw, eps, tb));
            }
            CspConstraint::Mul(x, y, w) => {
                let (ax, bx) = pairs[*x];
                let (ay, by) = pairs[*y];
                let (aw, bw) = pairs[*w];
                let p11 = b.var(Rule::Product(ax, ay));
                b.push(CspConstraint::Mul(ax, ay, p11));
                let p22 = b.var(Rule::Product(bx, by));
                b.push(CspConstraint::Mul(bx, by, p22));
                let p12 = b.var(Rule::Product(ax, by));
                b.push(CspConstraint::Mul(ax, by, p12));
                let p21 = b.var(Rule::Product(bx, ay));
                b.push(CspConstraint::Mul(bx, ay, p21));
                for p in [p11, p22, p12, p21] {
                    nonneg(&mut b, p);
                }
                let ta = b.var(Rule::Sum(p11, p22));
                nonneg(&mut b, ta);
                b.push(CspConstraint::Plus(p11, p22, ta));
                let eps = b.var(Rule::Diff(ta, aw));
                nonneg(&mut b, eps);
                b.push(CspConstraint::Plus(aw, eps, ta));
                let tb = b.var(Rule::Sum(p12, p21));
                nonneg(&mut b, tb);
                b.push(CspConstraint::Plus(p12, p21, tb));
                b.push(CspConstraint::Plus(bw, eps, tb));
            }
            CspConstraint::FnGraph(..) => unreachable!("rejected above"),
        }
    }

    debug_assert!(b.csp.validate().is_ok());
    Ok(InterpretedInstance {
        csp: b.csp,
        interpretation: Interpretation::positive(),
        rules: b.rules,
    })
}

/// Rewrites an instance whose intended domain is the nonnegative reals
/// into one whose representative variables live in `(0, 1/n]`, via
/// `u = 1/(x + n)`: the shift by `n` composed with the reciprocal map.
/// Addition turns into the three-product identity
/// `u_y·e + u_x·e = u_x·u_y` (twice, through the helper `e`),
/// multiplication into the corresponding shifted product identity, and
/// order reverses.
pub fn interpret_unit_interval(
    csp: &CspInstance,
    n: u64,
) -> Result<InterpretedInstance, GadgetError> {
    if n == 0 {
        return Err(GadgetError::NonPositiveInteger);
    }
    csp.validate()
        .map_err(|e| GadgetError::InvalidInput(e.to_string()))?;
    reject_graphs(csp, "the unit-interval interpretation")?;

    let big_n = BigUint::from(n);
    let mut b = Builder::new();
    let zero = b.var(Rule::Constant(Rational::zero()));
    b.push(CspConstraint::Plus(zero, zero, zero));
    let one = b.var(Rule::Constant(Rational::one()));
    b.push(CspConstraint::One(one));
    // nu = 1/n, pinned exactly by n·nu = 1
    let nu = b.var(Rule::Constant(Rational::new(1, n as i64)));
    let n_nu = b.times(&big_n, nu);
    b.push(CspConstraint::Leq(n_nu, one));
    b.push(CspConstraint::Leq(one, n_nu));

    // representative per original variable, pinned to (0, 1/n]
    let mut reps = Vec::with_capacity(csp.num_vars);
    for x in 0..csp.num_vars {
        let u = b.var(Rule::ReciprocalShift(x, n));
        b.push(CspConstraint::Leq(zero, u));
        b.push(CspConstraint::Leq(u, nu));
        let w = b.var(Rule::Reciprocal(u));
        b.push(CspConstraint::Mul(u, w, one));
        reps.push(u);
    }

    for c in &csp.constraints {
        match c {
            CspConstraint::One(x) => {
                // (n+1)·u² = u with u > 0 pins u = 1/(n+1)
                let u = reps[*x];
                let p = b.var(Rule::Product(u, u));
                b.push(CspConstraint::Mul(u, u, p));
                let q = b.times(&(&big_n + BigUint::one()), p);
                b.push(CspConstraint::Leq(q, u));
                b.push(CspConstraint::Leq(u, q));
            }
            CspConstraint::Leq(x, y) => {
                // x ≤ y reverses under reciprocals of positive shifts
                b.push(CspConstraint::Leq(reps[*y], reps[*x]));
            }
            CspConstraint::Plus(x, y, w) => {
                let (ux, uy, uw) = (reps[*x], reps[*y], reps[*w]);
                // e represents x + y + 2n, the sum of the two shifted
                // addends; first the three-product identity against ux
                // and uy, then against uw and the constant shift
                let e = b.var(Rule::Harmonic(ux, uy));
                let m1 = b.var(Rule::Product(uy, e));
                b.push(CspConstraint::Mul(uy, e, m1));
                let m2 = b.var(Rule::Product(ux, e));
                b.push(CspConstraint::Mul(ux, e, m2));
                let m3 = b.var(Rule::Product(ux, uy));
                b.push(CspConstraint::Mul(ux, uy, m3));
                b.push(CspConstraint::Plus(m1, m2, m3));
                let k1 = b.var(Rule::Product(nu, e));
                b.push(CspConstraint::Mul(nu, e, k1));
                let k2 = b.var(Rule::Product(uw, e));
                b.push(CspConstraint::Mul(uw, e, k2));
                let k3 = b.var(Rule::Product(uw, nu));
                b.push(CspConstraint::Mul(uw, nu, k3));
                b.push(CspConstraint::Plus(k1, k2, k3));
            }
            CspConstraint::Mul(x, y, w) => {
                // u_w + (n² + n)·u_xu_yu_w = u_xu_y + n·u_xu_w + n·u_yu_w
                let (ux, uy, uw) = (reps[*x], reps[*y], reps[*w]);
                let m3 = b.var(Rule::Product(ux, uy));
                b.push(CspConstraint::Mul(ux, uy, m3));
                let mxw = b.var(Rule::Product(ux, uw));
                b.push(CspConstraint::Mul(ux, uw, mxw));
                let myw = b.var(Rule::Product(uy, uw));
                b.push(CspConstraint::Mul(uy, uw, myw));
                let r = b.var(Rule::Product(m3, uw));
                b.push(CspConstraint::Mul(m3, uw, r));
                let a1 = b.times(&(&big_n * &big_n + &big_n), r);
                let lhs = b.var(Rule::Sum(uw, a1));
                b.push(CspConstraint::Plus(uw, a1, lhs));
                let b1 = b.times(&big_n, mxw);
                let b2 = b.times(&big_n, myw);
                let t1 = b.var(Rule::Sum(m3, b1));
                b.push(CspConstraint::Plus(m3, b1, t1));
                b.push(CspConstraint::Plus(t1, b2, lhs));
            }
            CspConstraint::FnGraph(..) => unreachable!("rejected above"),
        }
    }

    debug_assert!(b.csp.validate().is_ok());
    Ok(InterpretedInstance {
        csp: b.csp,
        interpretation: Interpretation::unit_interval(n),
        rules: b.rules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// x + y = z ∧ x = 1, satisfiable over ℝ with y free.
    fn plus_one_instance() -> CspInstance {
        let mut csp = CspInstance::new(3);
        csp.push(CspConstraint::Plus(0, 1, 2));
        csp.push(CspConstraint::One(0));
        csp
    }

    #[test]
    fn positive_forward_witness_checks() {
        let csp = plus_one_instance();
        let out = interpret_positive(&csp).unwrap();
        // original witness x = 1, y = -3, z = -2 (negative parts in play)
        let witness = out.map_witness(&[r(1, 1), r(-3, 1), r(-2, 1)]);
        assert!(out.csp.check_assignment(&witness).unwrap());
        // another with everything positive
        let witness = out.map_witness(&[r(1, 1), r(2, 1), r(3, 1)]);
        assert!(out.csp.check_assignment(&witness).unwrap());
    }

    #[test]
    fn positive_multiplication_gadget() {
        let mut csp = CspInstance::new(3);
        csp.push(CspConstraint::Mul(0, 1, 2));
        let out = interpret_positive(&csp).unwrap();
        for (x, y) in [(r(3, 2), r(-4, 1)), (r(0, 1), r(7, 1)), (r(-2, 3), r(-3, 5))] {
            let z = &x * &y;
            let witness = out.map_witness(&[x.clone(), y.clone(), z]);
            assert!(out.csp.check_assignment(&witness).unwrap(), "x={x} y={y}");
            // and a wrong product breaks it
            let bad = out.map_witness(&[x.clone(), y.clone(), &(&x * &y) + &r(1, 1)]);
            assert!(!out.csp.check_assignment(&bad).unwrap());
        }
    }

    #[test]
    fn unit_interval_forward_witness_checks() {
        for n in [1u64, 2, 3, 7] {
            let csp = plus_one_instance();
            let out = interpret_unit_interval(&csp, n).unwrap();
            // over ℝ⁺: x = 1, y = 4, z = 5
            let witness = out.map_witness(&[r(1, 1), r(4, 1), r(5, 1)]);
            assert!(out.csp.check_assignment(&witness).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn unit_interval_addition_identity_at_reciprocals() {
        // 2 + 3 = 5 transformed: representatives 1/(n+2), 1/(n+3), 1/(n+5)
        // satisfy the emitted constraints for several n
        let mut csp = CspInstance::new(3);
        csp.push(CspConstraint::Plus(0, 1, 2));
        for n in [1u64, 4, 10] {
            let out = interpret_unit_interval(&csp, n).unwrap();
            let witness = out.map_witness(&[r(2, 1), r(3, 1), r(5, 1)]);
            // representative slots are allocated right after the anchors
            let ni = n as i64;
            assert!(witness.contains(&r(1, ni + 2)));
            assert!(witness.contains(&r(1, ni + 3)));
            assert!(witness.contains(&r(1, ni + 5)));
            assert!(out.csp.check_assignment(&witness).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn unit_interval_multiplication_maps_to_products() {
        let mut csp = CspInstance::new(3);
        csp.push(CspConstraint::Mul(0, 1, 2));
        for n in [1u64, 2, 5] {
            let out = interpret_unit_interval(&csp, n).unwrap();
            for (x, y) in [(r(2, 1), r(3, 1)), (r(0, 1), r(4, 1)), (r(1, 2), r(6, 1))] {
                let z = &x * &y;
                let witness = out.map_witness(&[x.clone(), y.clone(), z]);
                assert!(out.csp.check_assignment(&witness).unwrap(), "n={n} x={x} y={y}");
                let bad = out.map_witness(&[x.clone(), y.clone(), &(&x * &y) + &r(1, 1)]);
                assert!(!out.csp.check_assignment(&bad).unwrap());
            }
        }
    }

    #[test]
    fn graphs_rejected_and_metadata_validates() {
        let mut csp = CspInstance::new(2);
        csp.push(CspConstraint::FnGraph(
            crate::reductions::CspFunction::Square,
            0,
            1,
        ));
        assert!(interpret_positive(&csp).is_err());
        assert!(interpret_unit_interval(&csp, 2).is_err());
        assert!(interpret_unit_interval(&CspInstance::new(1), 0).is_err());

        Interpretation::positive().validate().unwrap();
        Interpretation::unit_interval(3).validate().unwrap();
        let bad = Interpretation {
            dimension: 1,
            domain_formula: "sqrt(a)".into(),
            defining_formulas: vec![],
            coordinate_map: "h(a) = a".into(),
        };
        assert!(bad.validate().is_err());
    }
}

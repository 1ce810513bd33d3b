use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ir::{Activation, ActivationRepr, Rational};

use super::ReductionError;

pub type VarId = usize;

/// A function usable in a graph constraint. Piecewise-linear activations
/// are the solvable case; `Square` exists for the multiplication gadget
/// and never reaches the network translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CspFunction {
    Piecewise(Activation),
    Square,
}

impl CspFunction {
    pub fn apply(&self, x: &Rational) -> Rational {
        match self {
            CspFunction::Piecewise(act) => act.apply(x),
            CspFunction::Square => x * x,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CspFunction::Piecewise(act) => act.kind().name(),
            CspFunction::Square => "square",
        }
    }
}

impl Serialize for CspFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            CspFunction::Square => serializer.serialize_str("square"),
            CspFunction::Piecewise(act) => act.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for CspFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ActivationRepr::deserialize(deserializer)?;
        if let ActivationRepr::Tag(tag) = &repr {
            if tag == "square" {
                return Ok(CspFunction::Square);
            }
        }
        Activation::from_repr(repr)
            .map(CspFunction::Piecewise)
            .map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// One constraint over real-valued variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CspConstraint {
    /// `u ≤ v`
    Leq(VarId, VarId),
    /// `u + v = w`
    Plus(VarId, VarId, VarId),
    /// `u = 1`
    One(VarId),
    /// `u · v = w`; gadget bookkeeping only, rejected by the network
    /// translation.
    Mul(VarId, VarId, VarId),
    /// `v = f(u)`
    FnGraph(CspFunction, VarId, VarId),
}

impl CspConstraint {
    pub fn holds_at(&self, vals: &[Rational]) -> bool {
        match self {
            CspConstraint::Leq(u, v) => vals[*u] <= vals[*v],
            CspConstraint::Plus(u, v, w) => &vals[*u] + &vals[*v] == vals[*w],
            CspConstraint::One(u) => vals[*u] == Rational::one(),
            CspConstraint::Mul(u, v, w) => &vals[*u] * &vals[*v] == vals[*w],
            CspConstraint::FnGraph(f, u, v) => f.apply(&vals[*u]) == vals[*v],
        }
    }

    pub fn max_var(&self) -> VarId {
        match *self {
            CspConstraint::Leq(u, v) => u.max(v),
            CspConstraint::Plus(u, v, w) | CspConstraint::Mul(u, v, w) => u.max(v).max(w),
            CspConstraint::One(u) => u,
            CspConstraint::FnGraph(_, u, v) => u.max(v),
        }
    }
}

/// A conjunction of constraints over `num_vars` real variables; the
/// interchange form for the constraint encodings and the network
/// bridge. Size is counted as variables plus constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CspInstance {
    #[serde(rename = "vars")]
    pub num_vars: usize,
    pub constraints: Vec<CspConstraint>,
}

impl CspInstance {
    pub fn new(num_vars: usize) -> Self {
        CspInstance {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn fresh_var(&mut self) -> VarId {
        let id = self.num_vars;
        self.num_vars += 1;
        id
    }

    pub fn push(&mut self, c: CspConstraint) {
        self.constraints.push(c);
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        for (i, c) in self.constraints.iter().enumerate() {
            if c.max_var() >= self.num_vars {
                return Err(ReductionError::InvalidCsp(format!(
                    "constraint {i} references variable {} of {}",
                    c.max_var(),
                    self.num_vars
                )));
            }
            if let CspConstraint::FnGraph(CspFunction::Piecewise(act), _, _) = c {
                act.validate()
                    .map_err(|e| ReductionError::InvalidCsp(format!("constraint {i}: {e}")))?;
            }
        }
        Ok(())
    }

    /// Exact satisfaction check of a full assignment.
    pub fn check_assignment(&self, vals: &[Rational]) -> Result<bool, ReductionError> {
        if vals.len() != self.num_vars {
            return Err(ReductionError::InvalidCsp(format!(
                "assignment has {} values for {} variables",
                vals.len(),
                self.num_vars
            )));
        }
        Ok(self.constraints.iter().all(|c| c.holds_at(vals)))
    }

    pub fn has_mul(&self) -> bool {
        self.constraints
            .iter()
            .any(|c| matches!(c, CspConstraint::Mul(..)))
    }

    pub fn has_square(&self) -> bool {
        self.constraints
            .iter()
            .any(|c| matches!(c, CspConstraint::FnGraph(CspFunction::Square, _, _)))
    }

    pub fn has_fn_graph(&self) -> bool {
        self.constraints
            .iter()
            .any(|c| matches!(c, CspConstraint::FnGraph(..)))
    }

    /// Variables plus constraints.
    pub fn size_metric(&self) -> u64 {
        self.num_vars as u64 + self.constraints.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn assignment_checks() {
        let mut csp = CspInstance::new(3);
        csp.push(CspConstraint::One(0));
        csp.push(CspConstraint::Plus(0, 0, 1));
        csp.push(CspConstraint::Mul(1, 1, 2));
        assert!(csp
            .check_assignment(&[r(1, 1), r(2, 1), r(4, 1)])
            .unwrap());
        assert!(!csp
            .check_assignment(&[r(1, 1), r(2, 1), r(5, 1)])
            .unwrap());
        let sq = CspConstraint::FnGraph(CspFunction::Square, 0, 1);
        assert!(sq.holds_at(&[r(3, 2), r(9, 4)]));
        let relu = CspConstraint::FnGraph(CspFunction::Piecewise(Activation::relu()), 0, 1);
        assert!(relu.holds_at(&[r(-2, 1), r(0, 1)]));
    }

    #[test]
    fn validation() {
        let mut csp = CspInstance::new(1);
        csp.push(CspConstraint::Plus(0, 0, 5));
        assert!(csp.validate().is_err());
    }

    #[test]
    fn serde_round_trip() {
        let mut csp = CspInstance::new(4);
        csp.push(CspConstraint::Leq(0, 1));
        csp.push(CspConstraint::Plus(0, 1, 2));
        csp.push(CspConstraint::One(3));
        csp.push(CspConstraint::Mul(0, 1, 3));
        csp.push(CspConstraint::FnGraph(
            CspFunction::Piecewise(Activation::relu()),
            0,
            1,
        ));
        csp.push(CspConstraint::FnGraph(CspFunction::Square, 1, 2));
        let json = serde_json::to_string(&csp).unwrap();
        let back: CspInstance = serde_json::from_str(&json).unwrap();
        assert_eq!(csp, back);
        assert!(json.contains("\"square\""));
        assert!(json.contains("\"one\""));
    }
}

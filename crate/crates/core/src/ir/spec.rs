use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::dot;
use super::{IrError, Network, Rational};

/// Comparator of a linear constraint. Serialises as `"<="`, `"<"`, `"="`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Le,
    Lt,
    Eq,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Eq => "=",
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Cmp::Lt)
    }
}

impl Serialize for Cmp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Cmp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        match s.as_str() {
            "<=" => Ok(Cmp::Le),
            "<" => Ok(Cmp::Lt),
            "=" => Ok(Cmp::Eq),
            other => Err(serde::de::Error::custom(format!(
                "unknown comparator `{other}` (expected \"<=\", \"<\" or \"=\")"
            ))),
        }
    }
}

/// One row `coeffs · x  cmp  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, cmp: Cmp, rhs: Rational) -> Self {
        LinearConstraint { coeffs, cmp, rhs }
    }

    pub fn eval_lhs(&self, point: &[Rational]) -> Rational {
        dot(&self.coeffs, point)
    }

    /// Exact truth value at `point`; length is the caller's business.
    pub fn holds_at(&self, point: &[Rational]) -> bool {
        let lhs = self.eval_lhs(point);
        match self.cmp {
            Cmp::Le => lhs <= self.rhs,
            Cmp::Lt => lhs < self.rhs,
            Cmp::Eq => lhs == self.rhs,
        }
    }

    /// Closed-complement negation, as a disjunction of rows. A strict row
    /// negates to one weak row, a weak row to one strict row, and an
    /// equality to its two strict sides.
    pub fn complement(&self) -> Vec<LinearConstraint> {
        let neg_coeffs: Vec<Rational> = self.coeffs.iter().map(|c| -c).collect();
        let neg_rhs = -&self.rhs;
        match self.cmp {
            // a·x ≤ b  becomes  a·x > b, i.e. -a·x < -b
            Cmp::Le => vec![LinearConstraint::new(neg_coeffs, Cmp::Lt, neg_rhs)],
            // a·x < b  becomes  a·x ≥ b, i.e. -a·x ≤ -b
            Cmp::Lt => vec![LinearConstraint::new(neg_coeffs, Cmp::Le, neg_rhs)],
            // a·x = b  becomes  a·x < b  or  a·x > b
            Cmp::Eq => vec![
                LinearConstraint::new(self.coeffs.clone(), Cmp::Lt, self.rhs.clone()),
                LinearConstraint::new(neg_coeffs, Cmp::Lt, neg_rhs),
            ],
        }
    }

    pub fn bit_size(&self) -> u64 {
        self.coeffs.iter().map(Rational::bit_size).sum::<u64>() + self.rhs.bit_size()
    }
}

/// Conjunction of linear constraints over `num_vars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSpec {
    #[serde(rename = "vars")]
    pub num_vars: usize,
    pub constraints: Vec<LinearConstraint>,
}

impl LinearSpec {
    pub fn new(num_vars: usize, constraints: Vec<LinearConstraint>) -> Result<Self, IrError> {
        let spec = LinearSpec {
            num_vars,
            constraints,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// No constraints: satisfied everywhere.
    pub fn empty(num_vars: usize) -> Self {
        LinearSpec {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), IrError> {
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(IrError::InvalidSpec(format!(
                    "constraint {i}: expected {} coefficients, got {}",
                    self.num_vars,
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    /// True iff every constraint holds at `point`, with exact comparison.
    pub fn check(&self, point: &[Rational]) -> Result<bool, IrError> {
        if point.len() != self.num_vars {
            return Err(IrError::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        Ok(self.constraints.iter().all(|c| c.holds_at(point)))
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.cmp.is_strict())
    }

    pub fn bit_size(&self) -> u64 {
        self.constraints
            .iter()
            .map(LinearConstraint::bit_size)
            .sum::<u64>()
            + self.num_vars as u64
    }
}

/// A reachability instance: network plus input and output specifications
/// over its input and output variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachInstance {
    pub network: Network,
    pub input_spec: LinearSpec,
    pub output_spec: LinearSpec,
}

impl ReachInstance {
    pub fn new(
        network: Network,
        input_spec: LinearSpec,
        output_spec: LinearSpec,
    ) -> Result<Self, IrError> {
        input_spec.validate()?;
        output_spec.validate()?;
        if input_spec.num_vars != network.input_dim() {
            return Err(IrError::DimensionMismatch {
                expected: network.input_dim(),
                got: input_spec.num_vars,
            });
        }
        if output_spec.num_vars != network.output_dim() {
            return Err(IrError::DimensionMismatch {
                expected: network.output_dim(),
                got: output_spec.num_vars,
            });
        }
        Ok(ReachInstance {
            network,
            input_spec,
            output_spec,
        })
    }

    /// Size of the instance: specification bit sizes plus the network
    /// encoding size. The measure used by reduction receipts.
    pub fn size_metric(&self) -> u64 {
        self.input_spec.bit_size() + self.output_spec.bit_size() + self.network.encoded_size()
    }
}

impl<'de> Deserialize<'de> for ReachInstance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            network: Network,
            input_spec: LinearSpec,
            output_spec: LinearSpec,
        }
        let raw = Raw::deserialize(deserializer)?;
        ReachInstance::new(raw.network, raw.input_spec, raw.output_spec)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn check_spec_examples() {
        // {x <= 1} at x = 1
        let le = LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(1, 1))]).unwrap();
        assert!(le.check(&[r(1, 1)]).unwrap());
        // {x < 1} at x = 1 fails strictly
        let lt = LinearSpec::new(1, vec![LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(1, 1))]).unwrap();
        assert!(!lt.check(&[r(1, 1)]).unwrap());
        // {x + y = 1, x >= 0} at (1/3, 2/3)
        let spec = LinearSpec::new(
            2,
            vec![
                LinearConstraint::new(vec![r(1, 1), r(1, 1)], Cmp::Eq, r(1, 1)),
                LinearConstraint::new(vec![r(-1, 1), r(0, 1)], Cmp::Le, r(0, 1)),
            ],
        )
        .unwrap();
        assert!(spec.check(&[r(1, 3), r(2, 3)]).unwrap());
        assert!(spec.check(&[r(1, 2)]).is_err());
    }

    #[test]
    fn complements() {
        let le = LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(1, 1));
        let c = le.complement();
        assert_eq!(c, vec![LinearConstraint::new(vec![r(-1, 1)], Cmp::Lt, r(-1, 1))]);
        let eq = LinearConstraint::new(vec![r(1, 1)], Cmp::Eq, r(0, 1));
        assert_eq!(eq.complement().len(), 2);
        // complement is disjoint from the original and covers the rest of ℝ
        for x in [-2i64, -1, 0, 1, 2] {
            let p = [r(x, 1)];
            let in_orig = le.holds_at(&p);
            let in_comp = le.complement().iter().any(|c| c.holds_at(&p));
            assert!(in_orig ^ in_comp);
        }
    }

    #[test]
    fn serde_rejects_bad_dims() {
        let json = r#"{"vars":2,"constraints":[{"coeffs":["1"],"cmp":"<=","rhs":"0"}]}"#;
        let spec: LinearSpec = serde_json::from_str(json).unwrap();
        assert!(spec.validate().is_err());
    }
}

//! Exact feasibility decisions for conjunctions of linear constraints
//! over the rationals, including strict inequalities, with rational
//! witnesses.
//!
//! By LP theory, a system with rational data that has any real solution
//! also has a rational one, so returning exact witnesses loses nothing.
//! The solver is a Phase-I simplex on rationals; strict rows are handled
//! by a symbolic infinitesimal (`< b` becomes `≤ b − ε` over
//! lexicographically ordered pairs), which avoids guessing any concrete
//! small ε. No objective optimisation is exposed: feasibility plus
//! witness is the entire contract.

mod eps;
pub mod fm;
mod simplex;

pub use eps::EpsRational;

use serde::{Deserialize, Serialize};

use crate::ir::{IrError, LinearConstraint, LinearSpec, Rational};

/// A feasibility problem: `num_vars` free real variables and a
/// conjunction of linear constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpProblem {
    pub num_vars: usize,
    pub constraints: Vec<LinearConstraint>,
}

impl LpProblem {
    pub fn new(num_vars: usize, constraints: Vec<LinearConstraint>) -> Result<Self, IrError> {
        let p = LpProblem {
            num_vars,
            constraints,
        };
        p.validate()?;
        Ok(p)
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

    pub fn check(&self, point: &[Rational]) -> Result<bool, IrError> {
        if point.len() != self.num_vars {
            return Err(IrError::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        Ok(self.constraints.iter().all(|c| c.holds_at(point)))
    }
}

impl From<LinearSpec> for LpProblem {
    fn from(spec: LinearSpec) -> Self {
        LpProblem {
            num_vars: spec.num_vars,
            constraints: spec.constraints,
        }
    }
}

impl From<&LinearSpec> for LpProblem {
    fn from(spec: &LinearSpec) -> Self {
        LpProblem {
            num_vars: spec.num_vars,
            constraints: spec.constraints.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Feasible,
    Infeasible,
}

/// Outcome of a feasibility query; `witness` is present exactly on
/// `Feasible` and satisfies every constraint under exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpVerdict {
    pub status: LpStatus,
    pub witness: Option<Vec<Rational>>,
}

impl LpVerdict {
    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }
}

/// Decides feasibility of `p` and produces a rational witness on the
/// feasible side. An empty constraint list is feasible with the zero
/// vector. Deterministic: repeated calls return identical witnesses.
pub fn feasible(p: &LpProblem) -> LpVerdict {
    debug_assert!(p.validate().is_ok(), "LpProblem not validated");
    feasible_rows(p.num_vars, &p.constraints)
}

/// [`feasible`] over a borrowed row slice; hot path for the solver,
/// which rebuilds constraint stacks in place.
pub fn feasible_rows(num_vars: usize, rows: &[LinearConstraint]) -> LpVerdict {
    match simplex::solve(num_vars, rows) {
        Some(witness) => {
            debug_assert!(
                rows.iter().all(|c| c.holds_at(&witness)),
                "simplex produced a witness violating its own constraints"
            );
            LpVerdict {
                status: LpStatus::Feasible,
                witness: Some(witness),
            }
        }
        None => LpVerdict {
            status: LpStatus::Infeasible,
            witness: None,
        },
    }
}

/// Elementwise [`feasible`], order preserved. The solver is pure and
/// reentrant, so callers may also shard batches across threads.
pub fn feasible_batch(ps: &[LpProblem]) -> Vec<LpVerdict> {
    ps.iter().map(feasible).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Cmp;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn row(coeffs: &[(i64, i64)], cmp: Cmp, rhs: (i64, i64)) -> LinearConstraint {
        LinearConstraint::new(
            coeffs.iter().map(|&(n, d)| r(n, d)).collect(),
            cmp,
            r(rhs.0, rhs.1),
        )
    }

    #[test]
    fn contradictory_weak_rows() {
        // x <= 1 and -x <= -2 (i.e. x >= 2)
        let p = LpProblem::new(
            1,
            vec![row(&[(1, 1)], Cmp::Le, (1, 1)), row(&[(-1, 1)], Cmp::Le, (-2, 1))],
        )
        .unwrap();
        assert_eq!(feasible(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn strict_feasible_returns_negative_witness() {
        let p = LpProblem::new(1, vec![row(&[(1, 1)], Cmp::Lt, (0, 1))]).unwrap();
        let v = feasible(&p);
        assert!(v.is_feasible());
        let w = v.witness.unwrap();
        assert!(w[0].is_negative());
    }

    #[test]
    fn mixed_system_with_equality() {
        // 2x + 3y = 5, x >= 0, y >= 0, x < 1; Fourier-Motzkin by hand:
        // y = (5 - 2x)/3, x ∈ [0, 1) works, e.g. (0, 5/3).
        let p = LpProblem::new(
            2,
            vec![
                row(&[(2, 1), (3, 1)], Cmp::Eq, (5, 1)),
                row(&[(-1, 1), (0, 1)], Cmp::Le, (0, 1)),
                row(&[(0, 1), (-1, 1)], Cmp::Le, (0, 1)),
                row(&[(1, 1), (0, 1)], Cmp::Lt, (1, 1)),
            ],
        )
        .unwrap();
        let v = feasible(&p);
        assert!(v.is_feasible());
        assert!(p.check(v.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn empty_problem_is_feasible_at_zero() {
        let p = LpProblem::new(3, vec![]).unwrap();
        let v = feasible(&p);
        assert_eq!(v.witness.unwrap(), vec![r(0, 1), r(0, 1), r(0, 1)]);
    }

    #[test]
    fn strict_boundary_infeasible() {
        // x < 0 and x > 0
        let p = LpProblem::new(
            1,
            vec![row(&[(1, 1)], Cmp::Lt, (0, 1)), row(&[(-1, 1)], Cmp::Lt, (0, 1))],
        )
        .unwrap();
        assert_eq!(feasible(&p).status, LpStatus::Infeasible);
        // x < 1 and x >= 1
        let q = LpProblem::new(
            1,
            vec![row(&[(1, 1)], Cmp::Lt, (1, 1)), row(&[(-1, 1)], Cmp::Le, (-1, 1))],
        )
        .unwrap();
        assert_eq!(feasible(&q).status, LpStatus::Infeasible);
    }

    #[test]
    fn open_but_nonempty_sliver() {
        // 0 < x < 1/1000000 needs an ε-aware witness
        let p = LpProblem::new(
            1,
            vec![
                row(&[(-1, 1)], Cmp::Lt, (0, 1)),
                row(&[(1, 1)], Cmp::Lt, (1, 1000000)),
            ],
        )
        .unwrap();
        let v = feasible(&p);
        assert!(v.is_feasible());
        assert!(p.check(v.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn degenerate_rows() {
        let p = LpProblem::new(1, vec![row(&[(0, 1)], Cmp::Lt, (0, 1))]).unwrap();
        assert_eq!(feasible(&p).status, LpStatus::Infeasible);
        let q = LpProblem::new(1, vec![row(&[(0, 1)], Cmp::Le, (0, 1))]).unwrap();
        assert!(feasible(&q).is_feasible());
        let s = LpProblem::new(1, vec![row(&[(0, 1)], Cmp::Eq, (1, 2))]).unwrap();
        assert_eq!(feasible(&s).status, LpStatus::Infeasible);
    }

    #[test]
    fn batch_keeps_order_and_is_deterministic() {
        let a = LpProblem::new(1, vec![row(&[(1, 1)], Cmp::Le, (0, 1))]).unwrap();
        let b = LpProblem::new(
            1,
            vec![row(&[(1, 1)], Cmp::Lt, (0, 1)), row(&[(-1, 1)], Cmp::Lt, (0, 1))],
        )
        .unwrap();
        let out = feasible_batch(&[a.clone(), b, a.clone()]);
        assert_eq!(out[0].status, LpStatus::Feasible);
        assert_eq!(out[1].status, LpStatus::Infeasible);
        assert_eq!(out[2].status, LpStatus::Feasible);
        assert_eq!(out[0], out[2]);
        assert!(feasible_batch(&[]).is_empty());
        // identical witnesses across repeated calls
        assert_eq!(feasible(&a), feasible(&a));
    }

    #[test]
    fn equality_pinning() {
        // x + y = 1, x - y = 0 → (1/2, 1/2)
        let p = LpProblem::new(
            2,
            vec![
                row(&[(1, 1), (1, 1)], Cmp::Eq, (1, 1)),
                row(&[(1, 1), (-1, 1)], Cmp::Eq, (0, 1)),
            ],
        )
        .unwrap();
        let v = feasible(&p);
        assert_eq!(v.witness.unwrap(), vec![r(1, 2), r(1, 2)]);
    }
}

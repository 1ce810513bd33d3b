//! Fourier–Motzkin elimination as an independent feasibility
//! cross-check. Exponential in the number of variables; intended for
//! small systems (a handful of variables) where it double-checks the
//! simplex path through entirely different algebra.

use std::collections::HashSet;

use crate::ir::{Cmp, Rational};

use super::{LpProblem, LpStatus};

#[derive(Clone, PartialEq, Eq, Hash)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

impl Row {
    /// Scale so the first nonzero coefficient has absolute value one;
    /// canonical form for duplicate elimination.
    fn normalized(mut self) -> Row {
        if let Some(pivot) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let s = pivot.abs().recip();
            for c in &mut self.coeffs {
                if !c.is_zero() {
                    *c = &*c * &s;
                }
            }
            self.rhs = &self.rhs * &s;
        }
        self
    }
}

/// Decides feasibility of `p` by eliminating variables one at a time.
pub fn fourier_motzkin_feasible(p: &LpProblem) -> LpStatus {
    // Everything becomes `coeffs·x ≤ rhs` or `coeffs·x < rhs`;
    // equalities split into two opposite weak rows.
    let mut rows: Vec<Row> = Vec::new();
    for c in &p.constraints {
        match c.cmp {
            Cmp::Le | Cmp::Lt => rows.push(Row {
                coeffs: c.coeffs.clone(),
                rhs: c.rhs.clone(),
                strict: c.cmp == Cmp::Lt,
            }),
            Cmp::Eq => {
                rows.push(Row {
                    coeffs: c.coeffs.clone(),
                    rhs: c.rhs.clone(),
                    strict: false,
                });
                rows.push(Row {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    rhs: -&c.rhs,
                    strict: false,
                });
            }
        }
    }

    for _ in 0..p.num_vars {
        // Eliminate the variable minimising the lower×upper blow-up.
        let live: Vec<usize> = (0..rows.first().map_or(0, |r| r.coeffs.len()))
            .filter(|&j| rows.iter().any(|r| !r.coeffs[j].is_zero()))
            .collect();
        let Some(&var) = live.iter().min_by_key(|&&j| {
            let lower = rows.iter().filter(|r| r.coeffs[j].is_negative()).count();
            let upper = rows.iter().filter(|r| r.coeffs[j].is_positive()).count();
            lower * upper
        }) else {
            break;
        };

        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut rest = Vec::new();
        for r in rows {
            if r.coeffs[var].is_positive() {
                upper.push(r);
            } else if r.coeffs[var].is_negative() {
                lower.push(r);
            } else {
                rest.push(r);
            }
        }
        let mut seen: HashSet<Row> = rest.iter().cloned().map(Row::normalized).collect();
        let mut next = rest;
        for lo in &lower {
            for up in &upper {
                // up scaled by -lo.coeffs[var] (> 0) plus lo scaled by
                // up.coeffs[var] (> 0) cancels `var`.
                let a = -&lo.coeffs[var];
                let b = up.coeffs[var].clone();
                let coeffs: Vec<Rational> = up
                    .coeffs
                    .iter()
                    .zip(&lo.coeffs)
                    .map(|(u, l)| &(&a * u) + &(&b * l))
                    .collect();
                let rhs = &(&a * &up.rhs) + &(&b * &lo.rhs);
                let row = Row {
                    coeffs,
                    rhs,
                    strict: lo.strict || up.strict,
                };
                if seen.insert(row.clone().normalized()) {
                    next.push(row);
                }
            }
        }
        rows = next;
    }

    for r in &rows {
        debug_assert!(r.coeffs.iter().all(Rational::is_zero));
        let ok = if r.strict {
            r.rhs.is_positive()
        } else {
            !r.rhs.is_negative()
        };
        if !ok {
            return LpStatus::Infeasible;
        }
    }
    LpStatus::Feasible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::LinearConstraint;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn agrees_on_basics() {
        let p = LpProblem::new(
            2,
            vec![
                LinearConstraint::new(vec![r(1, 1), r(1, 1)], Cmp::Le, r(1, 1)),
                LinearConstraint::new(vec![r(-1, 1), r(0, 1)], Cmp::Le, r(0, 1)),
                LinearConstraint::new(vec![r(0, 1), r(-1, 1)], Cmp::Le, r(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(fourier_motzkin_feasible(&p), LpStatus::Feasible);

        let q = LpProblem::new(
            1,
            vec![
                LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(0, 1)),
                LinearConstraint::new(vec![r(-1, 1)], Cmp::Lt, r(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(fourier_motzkin_feasible(&q), LpStatus::Infeasible);
    }

    #[test]
    fn strictness_matters() {
        // x <= 0 ∧ x >= 0 is feasible; making either strict empties it.
        let weak = LpProblem::new(
            1,
            vec![
                LinearConstraint::new(vec![r(1, 1)], Cmp::Le, r(0, 1)),
                LinearConstraint::new(vec![r(-1, 1)], Cmp::Le, r(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(fourier_motzkin_feasible(&weak), LpStatus::Feasible);
        let half_strict = LpProblem::new(
            1,
            vec![
                LinearConstraint::new(vec![r(1, 1)], Cmp::Lt, r(0, 1)),
                LinearConstraint::new(vec![r(-1, 1)], Cmp::Le, r(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(fourier_motzkin_feasible(&half_strict), LpStatus::Infeasible);
    }
}

//! Reference decision procedure: enumerate every activation phase
//! pattern, turn each into one exact LP over the inputs, and accept iff
//! some pattern's LP is feasible. Exponential in the number of
//! multi-piece nodes; it exists as an oracle for the branch-and-bound
//! search and for desk-scale experiments, not for real workloads.

use crate::ir::{Cmp, LinearConstraint, Rational, ReachInstance};
use crate::lp;

use super::affine::AffineForm;
use super::{validate_instance, ReachStatus, SearchStats, SolveError, Verdict};

pub fn solve_reach_exhaustive(inst: &ReachInstance) -> Result<Verdict, SolveError> {
    validate_instance(inst)?;
    let net = &inst.network;
    let n = net.input_dim();

    let radix: Vec<usize> = net
        .layers()
        .iter()
        .flat_map(|l| l.activations.iter().map(|a| a.piece_count()))
        .collect();
    let mut pattern = vec![0usize; radix.len()];
    let mut lp_calls = 0u64;
    let input_forms: Vec<AffineForm> = (0..n).map(|j| AffineForm::input(n, j)).collect();

    loop {
        // Fix the pattern, compose the network into one affine map per
        // node, and gather the cell constraints as we go.
        let mut rows: Vec<LinearConstraint> = inst.input_spec.constraints.clone();
        let mut prev = input_forms.clone();
        let mut idx = 0;
        for layer in net.layers() {
            let mut cur = Vec::with_capacity(layer.width());
            for ((weights, bias), act) in layer
                .weights
                .iter()
                .zip(&layer.biases)
                .zip(&layer.activations)
            {
                let refs: Vec<&AffineForm> = prev.iter().collect();
                let s = AffineForm::combine(weights, &refs, bias, n);
                let piece = &act.pieces()[pattern[idx]];
                idx += 1;
                match (&piece.lo, &piece.hi) {
                    (Some(lo), Some(hi)) if lo == hi => {
                        rows.push(LinearConstraint::new(
                            s.coeffs.clone(),
                            Cmp::Eq,
                            lo - &s.constant,
                        ));
                    }
                    (lo, hi) => {
                        if let Some(v) = lo {
                            rows.push(LinearConstraint::new(
                                s.coeffs.iter().map(|c| -c).collect(),
                                if piece.lo_closed { Cmp::Le } else { Cmp::Lt },
                                &s.constant - v,
                            ));
                        }
                        if let Some(v) = hi {
                            rows.push(LinearConstraint::new(
                                s.coeffs.clone(),
                                if piece.hi_closed { Cmp::Le } else { Cmp::Lt },
                                v - &s.constant,
                            ));
                        }
                    }
                }
                cur.push(s.scale_shift(&piece.slope, &piece.intercept));
            }
            prev = cur;
        }
        for c in &inst.output_spec.constraints {
            let refs: Vec<&AffineForm> = prev.iter().collect();
            let g = AffineForm::combine(&c.coeffs, &refs, &Rational::zero(), n);
            rows.push(LinearConstraint::new(g.coeffs, c.cmp, &c.rhs - &g.constant));
        }

        lp_calls += 1;
        let verdict = lp::feasible_rows(n, &rows);
        if let Some(witness) = verdict.witness {
            return Ok(Verdict {
                status: ReachStatus::Sat,
                witness: Some(witness),
                stats: SearchStats {
                    lp_calls,
                    nodes_expanded: 0,
                },
            });
        }

        // Advance the mixed-radix pattern counter.
        let mut carry = pattern.len();
        for i in (0..pattern.len()).rev() {
            pattern[i] += 1;
            if pattern[i] < radix[i] {
                carry = i;
                break;
            }
            pattern[i] = 0;
        }
        if carry == pattern.len() {
            return Ok(Verdict {
                status: ReachStatus::Unsat,
                witness: None,
                stats: SearchStats {
                    lp_calls,
                    nodes_expanded: 0,
                },
            });
        }
    }
}

//! Phase-I simplex over exact rationals, extended to strict inequalities
//! through the symbolic-infinitesimal right-hand sides of
//! [`EpsRational`]. Bland's rule is used for both pivot choices, which
//! guarantees termination and makes verdicts and witnesses deterministic.

use crate::ir::{Cmp, LinearConstraint, Rational};

use super::eps::EpsRational;

/// Feasibility core. Returns an exact witness when the system has a real
/// solution, `None` otherwise.
pub(crate) fn solve(num_vars: usize, constraints: &[LinearConstraint]) -> Option<Vec<Rational>> {
    let n = num_vars;

    // Rows with an all-zero coefficient vector are decided immediately by
    // comparing 0 against the right-hand side.
    let mut rows = Vec::new();
    for c in constraints {
        if c.coeffs.iter().all(Rational::is_zero) {
            let ok = match c.cmp {
                Cmp::Le => !c.rhs.is_negative(),
                Cmp::Lt => c.rhs.is_positive(),
                Cmp::Eq => c.rhs.is_zero(),
            };
            if !ok {
                return None;
            }
        } else {
            rows.push(c);
        }
    }
    if rows.is_empty() {
        return Some(vec![Rational::zero(); n]);
    }

    let m = rows.len();
    let num_slacks = rows.iter().filter(|c| c.cmp != Cmp::Eq).count();
    // Columns: positive parts, negative parts, slacks, then artificials
    // (allocated only for rows that cannot start on their slack).
    let slack_base = 2 * n;
    let art_base = slack_base + num_slacks;

    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<EpsRational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificial_rows: Vec<usize> = Vec::new();

    let mut next_slack = slack_base;
    let mut next_art = art_base;
    for c in &rows {
        let mut b = EpsRational::from_real(c.rhs.clone());
        if c.cmp == Cmp::Lt {
            b.eps = -Rational::one();
        }
        let negate = b.is_negative();
        let sig = if negate { -Rational::one() } else { Rational::one() };
        let mut row = vec![Rational::zero(); art_base];
        for (j, a) in c.coeffs.iter().enumerate() {
            if !a.is_zero() {
                row[j] = &sig * a;
                row[n + j] = -&row[j];
            }
        }
        if negate {
            b = -b;
        }
        let mut basic_col = None;
        if c.cmp != Cmp::Eq {
            row[next_slack] = sig.clone();
            if !negate {
                basic_col = Some(next_slack);
            }
            next_slack += 1;
        }
        let basic = match basic_col {
            Some(col) => col,
            None => {
                artificial_rows.push(tableau.len());
                let col = next_art;
                next_art += 1;
                col
            }
        };
        basis.push(basic);
        tableau.push(row);
        rhs.push(b);
    }
    let num_cols = next_art;
    for row in &mut tableau {
        row.resize(num_cols, Rational::zero());
    }
    for (pos, &ri) in artificial_rows.iter().enumerate() {
        tableau[ri][art_base + pos] = Rational::one();
    }

    // Phase-I objective: minimize the sum of artificial variables.
    // `reduced` holds reduced costs; `value` the current objective.
    let mut reduced = vec![Rational::zero(); num_cols];
    for col in reduced.iter_mut().skip(art_base) {
        *col = Rational::one();
    }
    let mut value = EpsRational::zero();
    for &ri in &artificial_rows {
        for j in 0..num_cols {
            if !tableau[ri][j].is_zero() {
                let t = tableau[ri][j].clone();
                reduced[j] -= &t;
            }
        }
        value += &rhs[ri];
    }

    loop {
        // Bland: entering column is the smallest index with negative
        // reduced cost.
        let Some(enter) = (0..num_cols).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        // Ratio test over positive pivot candidates; ties resolved by the
        // smallest basic variable index.
        let mut leave: Option<(usize, EpsRational)> = None;
        for i in 0..m {
            let a = &tableau[i][enter];
            if a.is_positive() {
                let ratio = rhs[i].div_rational(a);
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < *best || (ratio == *best && basis[i] < basis[*best_i]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (pivot_row, _) = leave.expect("phase-I objective is bounded below; a pivot row must exist");
        pivot(
            &mut tableau,
            &mut rhs,
            &mut reduced,
            &mut value,
            &mut basis,
            pivot_row,
            enter,
        );
    }

    if !value.is_zero() {
        debug_assert!(!value.is_negative(), "phase-I objective went negative");
        return None;
    }

    // Read off the variable pairs and collapse ε to a concrete rational
    // small enough to keep every constraint satisfied.
    let col_value = |col: usize| -> EpsRational {
        basis
            .iter()
            .position(|&b| b == col)
            .map(|i| rhs[i].clone())
            .unwrap_or_else(EpsRational::zero)
    };
    let pairs: Vec<EpsRational> = (0..n)
        .map(|j| &col_value(j) - &col_value(n + j))
        .collect();
    Some(concretize(constraints, &pairs))
}

#[allow(clippy::too_many_arguments)]
fn pivot(
    tableau: &mut [Vec<Rational>],
    rhs: &mut [EpsRational],
    reduced: &mut [Rational],
    value: &mut EpsRational,
    basis: &mut [usize],
    row: usize,
    col: usize,
) {
    let p = tableau[row][col].clone();
    for x in tableau[row].iter_mut() {
        if !x.is_zero() {
            *x = &*x / &p;
        }
    }
    rhs[row] = rhs[row].div_rational(&p);
    for i in 0..tableau.len() {
        if i == row {
            continue;
        }
        let f = tableau[i][col].clone();
        if f.is_zero() {
            continue;
        }
        for j in 0..tableau[i].len() {
            if !tableau[row][j].is_zero() {
                let t = &f * &tableau[row][j];
                tableau[i][j] -= &t;
            }
        }
        let t = rhs[row].scale(&f);
        rhs[i] -= &t;
    }
    let f = reduced[col].clone();
    if !f.is_zero() {
        for j in 0..reduced.len() {
            if !tableau[row][j].is_zero() {
                let t = &f * &tableau[row][j];
                reduced[j] -= &t;
            }
        }
        let t = rhs[row].scale(&f);
        *value += &t;
    }
    basis[row] = col;
}

/// Substitutes a concrete positive ε into the symbolic witness. Every
/// constraint's slack is affine in ε; ε is capped so that all slacks stay
/// nonnegative, which keeps strict rows strictly satisfied.
fn concretize(constraints: &[LinearConstraint], pairs: &[EpsRational]) -> Vec<Rational> {
    let p: Vec<&Rational> = pairs.iter().map(|e| &e.real).collect();
    let q: Vec<&Rational> = pairs.iter().map(|e| &e.eps).collect();
    let mut cap = Rational::one();
    for c in constraints {
        let mut lhs_p = Rational::zero();
        let mut lhs_q = Rational::zero();
        for (j, a) in c.coeffs.iter().enumerate() {
            if !a.is_zero() {
                lhs_p += &(a * p[j]);
                lhs_q += &(a * q[j]);
            }
        }
        match c.cmp {
            Cmp::Eq => {
                debug_assert_eq!(lhs_p, c.rhs, "equality violated in symbolic witness");
                debug_assert!(lhs_q.is_zero(), "equality carries ε in symbolic witness");
            }
            Cmp::Le | Cmp::Lt => {
                let gamma = if c.cmp == Cmp::Lt {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                let u = &c.rhs - &lhs_p;
                let v = -&gamma - &lhs_q;
                if v.is_negative() {
                    debug_assert!(u.is_positive(), "lex-feasible slack must have positive real part");
                    cap = cap.min(&u / &-&v);
                }
            }
        }
    }
    pairs.iter().map(|e| e.at(&cap)).collect()
}

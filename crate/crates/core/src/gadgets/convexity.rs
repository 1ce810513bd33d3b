//! Midpoint non-convexity witnesses and the folded function built from
//! them.
//!
//! A function that is affine on `[a, b]` satisfies
//! `f((c+d)/2) = (f(c)+f(d))/2` for all `c, d` in the interval; any
//! rational pair violating the relation witnesses non-affineness. The
//! scan walks dyadic rational pairs breadth-first by depth and returns
//! the first witness, which makes results deterministic. From a witness
//! the fold `f̄(x) = f̂(x) + f̂(1−x) − f̂(0) − f̂(1)` (with `f̂` the
//! rescaling of `f` sending `0 ↦ c`, `1 ↦ d`) vanishes at both endpoints
//! exactly and is bounded away from zero at `x = 1/2`.

use serde::{Deserialize, Serialize};

use crate::ir::Rational;

use super::numeric::{Evaluator, NumericFn};
use super::GadgetError;

/// Anything below this is considered evaluation noise at the working
/// precision of 320 bits (≈ 1e-96); a generous nine orders of headroom.
fn precision_floor() -> Rational {
    Rational::new(
        num_bigint::BigInt::from(1),
        num_bigint::BigInt::from(10u32).pow(45),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MidpointWitness {
    pub c: Rational,
    pub d: Rational,
    /// `|f((c+d)/2) − (f(c)+f(d))/2|`, reported lossily.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum MidpointScan {
    Witness(MidpointWitness),
    /// The scan exhausted all pairs up to the depth limit, consistent
    /// with `f` being affine on the interval.
    NoWitness,
}

/// Searches `[a, b]` for rationals `c < d` with
/// `f((c+d)/2) ≠ (f(c)+f(d))/2`, scanning dyadic pairs breadth-first up
/// to `max_depth` and accepting gaps at least ten times the precision
/// floor. The first witness wins.
pub fn midpoint_witness(
    f: &NumericFn,
    a: &Rational,
    b: &Rational,
    max_depth: u32,
) -> Result<MidpointScan, GadgetError> {
    if a >= b {
        return Err(GadgetError::InvalidInput(format!(
            "need a < b, got [{a}, {b}]"
        )));
    }
    let mut ev = Evaluator::new();
    let threshold = {
        let floor = ev.rational(&precision_floor());
        let ten = ev.small(10);
        ev.mul(&ten, &floor)
    };
    let span = b - a;
    let half = Rational::new(1, 2);
    for depth in 0..=max_depth {
        let cells = 1u64 << depth.min(62);
        let step = &span / &Rational::from_int(cells as i64);
        let point = |k: u64| -> Rational { a + &(&step * &Rational::from_int(k as i64)) };
        for i in 0..cells {
            for j in (i + 1)..=cells {
                // only pairs touching a point new at this depth, so the
                // scan is breadth-first without repeats
                if depth > 0 && i % 2 == 0 && j % 2 == 0 {
                    continue;
                }
                let c = point(i);
                let d = point(j);
                let mid = &(&c + &d) * &half;
                let f_mid = f.eval_rational(&mid, &mut ev);
                let f_c = f.eval_rational(&c, &mut ev);
                let f_d = f.eval_rational(&d, &mut ev);
                let avg = {
                    let s = ev.add(&f_c, &f_d);
                    let two = ev.small(2);
                    ev.div(&s, &two)
                };
                let gap = ev.sub(&f_mid, &avg).abs();
                if gap > threshold {
                    return Ok(MidpointScan::Witness(MidpointWitness {
                        c,
                        d,
                        gap: ev.to_f64(&gap),
                    }));
                }
            }
        }
    }
    Ok(MidpointScan::NoWitness)
}

/// Builds `f̄` from a midpoint witness `(c, d)`: rescale `f` so that the
/// witness pair sits at `0` and `1`, then fold. `f̄(0) = f̄(1) = 0`
/// exactly (the fold telescopes) while `f̄(1/2)` equals twice the
/// witness gap of the rescaled function and is therefore nonzero.
pub fn build_fbar(f: &NumericFn, c: &Rational, d: &Rational) -> Result<NumericFn, GadgetError> {
    if c == d {
        return Err(GadgetError::InvalidInput(
            "degenerate witness: c = d".into(),
        ));
    }
    Ok(NumericFn::MidpointFold {
        inner: Box::new(NumericFn::Rescaled {
            inner: Box::new(f.clone()),
            start: c.clone(),
            end: d.clone(),
        }),
    })
}

/// Numeric report on a folded function: values at `0`, `1`, and `1/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbarProbe {
    pub at_zero: f64,
    pub at_one: f64,
    pub at_half: f64,
    pub endpoint_zeros_exact: bool,
}

pub fn fbar_probe(fbar: &NumericFn) -> FbarProbe {
    let mut ev = Evaluator::new();
    let zero = ev.small(0);
    let one = ev.small(1);
    let half = ev.rational(&Rational::new(1, 2));
    let v0 = fbar.eval(&zero, &mut ev);
    let v1 = fbar.eval(&one, &mut ev);
    let vh = fbar.eval(&half, &mut ev);
    FbarProbe {
        endpoint_zeros_exact: v0.is_zero() && v1.is_zero(),
        at_zero: ev.to_f64(&v0),
        at_one: ev.to_f64(&v1),
        at_half: ev.to_f64(&vh),
    }
}

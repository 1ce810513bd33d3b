//! High-precision numeric functions for identity verification and
//! non-convexity scans. Everything here evaluates at 320 bits
//! (≈ 96 decimal digits) and stays strictly outside the decision path:
//! no value computed here ever reaches the exact solver.

use std::fmt;
use std::str::FromStr;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::ir::Rational;

use super::GadgetError;

pub(crate) const PRECISION_BITS: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

/// Evaluation context: precision, rounding, and the constants cache.
pub(crate) struct Evaluator {
    cc: Consts,
}

impl Evaluator {
    pub fn new() -> Self {
        Evaluator {
            cc: Consts::new().expect("constants cache"),
        }
    }

    fn bigint(&mut self, i: &BigInt) -> BigFloat {
        match i.to_i128() {
            Some(v) => BigFloat::from_i128(v, PRECISION_BITS),
            None => BigFloat::parse(&i.to_string(), Radix::Dec, PRECISION_BITS, RM, &mut self.cc),
        }
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let num = self.bigint(r.numer());
        let den = self.bigint(r.denom());
        num.div(&den, PRECISION_BITS, RM)
    }

    pub fn small(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, PRECISION_BITS)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, PRECISION_BITS, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, PRECISION_BITS, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, PRECISION_BITS, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, PRECISION_BITS, RM)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PRECISION_BITS, RM, &mut self.cc)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PRECISION_BITS, RM, &mut self.cc)
    }

    pub fn atan(&mut self, x: &BigFloat) -> BigFloat {
        x.atan(PRECISION_BITS, RM, &mut self.cc)
    }

    pub fn acos(&mut self, x: &BigFloat) -> BigFloat {
        x.acos(PRECISION_BITS, RM, &mut self.cc)
    }

    pub fn cos(&mut self, x: &BigFloat) -> BigFloat {
        x.cos(PRECISION_BITS, RM, &mut self.cc)
    }

    pub fn sin(&mut self, x: &BigFloat) -> BigFloat {
        x.sin(PRECISION_BITS, RM, &mut self.cc)
    }

    pub fn tanh(&mut self, x: &BigFloat) -> BigFloat {
        x.tanh(PRECISION_BITS, RM, &mut self.cc)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(PRECISION_BITS, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(PRECISION_BITS, RM)
    }

    /// Lossy view for reports.
    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        let s = x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_default();
        s.parse().unwrap_or(f64::NAN)
    }

    /// Relative error `|a−b| / max(|a|, |b|)`, falling back to the
    /// absolute difference when both sides are tiny.
    pub fn rel_err(&mut self, a: &BigFloat, b: &BigFloat) -> f64 {
        let diff = self.sub(a, b).abs();
        let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
        let floor = self.rational(&Rational::new(1i64, 1_000_000_000_000_000_000i64));
        if scale < floor {
            self.to_f64(&diff)
        } else {
            let q = self.div(&diff, &scale);
            self.to_f64(&q)
        }
    }
}

/// A real function evaluable at high precision. The plain tags are the
/// verification targets; `Affine`, `Rescaled`, and `MidpointFold` are
/// the composition forms the non-convexity construction produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericFn {
    /// `e^x`
    Exp,
    /// natural logarithm, `x > 0`
    Log,
    Arctan,
    /// `π/2 − arctan x`
    Arccot,
    /// `cos x / sin x`
    Cot,
    /// `e^{−x²}`
    Gaussian,
    Cos,
    Arccos,
    /// `x²`
    Square,
    /// `1 / (1 + e^{−x})`
    Sigmoid,
    Tanh,
    /// `x / (1 + e^{−x})`
    Silu,
    /// `x / √(1 + x²)`
    Isru,
    /// `slope·x + intercept`
    Affine { slope: Rational, intercept: Rational },
    /// `inner(start + x·(end − start))`: precomposition with the affine
    /// map sending `0 ↦ start`, `1 ↦ end`.
    Rescaled {
        inner: Box<NumericFn>,
        start: Rational,
        end: Rational,
    },
    /// `inner(x) + inner(1−x) − inner(0) − inner(1)`.
    MidpointFold { inner: Box<NumericFn> },
}

impl NumericFn {
    pub(crate) fn eval(&self, x: &BigFloat, ev: &mut Evaluator) -> BigFloat {
        match self {
            NumericFn::Exp => ev.exp(x),
            NumericFn::Log => ev.ln(x),
            NumericFn::Arctan => ev.atan(x),
            NumericFn::Arccot => {
                let half_pi = {
                    let pi = ev.pi();
                    let two = ev.small(2);
                    ev.div(&pi, &two)
                };
                let at = ev.atan(x);
                ev.sub(&half_pi, &at)
            }
            NumericFn::Cot => {
                let c = ev.cos(x);
                let s = ev.sin(x);
                ev.div(&c, &s)
            }
            NumericFn::Gaussian => {
                let sq = ev.mul(x, x);
                ev.exp(&sq.neg())
            }
            NumericFn::Cos => ev.cos(x),
            NumericFn::Arccos => ev.acos(x),
            NumericFn::Square => ev.mul(x, x),
            NumericFn::Sigmoid => {
                let e = ev.exp(&x.neg());
                let one = ev.small(1);
                let den = ev.add(&one, &e);
                ev.div(&one, &den)
            }
            NumericFn::Tanh => ev.tanh(x),
            NumericFn::Silu => {
                let e = ev.exp(&x.neg());
                let one = ev.small(1);
                let den = ev.add(&one, &e);
                ev.div(x, &den)
            }
            NumericFn::Isru => {
                let one = ev.small(1);
                let sq = ev.mul(x, x);
                let den = ev.sqrt(&ev.add(&one, &sq));
                ev.div(x, &den)
            }
            NumericFn::Affine { slope, intercept } => {
                let s = ev.rational(slope);
                let b = ev.rational(intercept);
                let sx = ev.mul(&s, x);
                ev.add(&sx, &b)
            }
            NumericFn::Rescaled { inner, start, end } => {
                let a = ev.rational(start);
                let span = ev.rational(&(end - start));
                let arg = {
                    let t = ev.mul(&span, x);
                    ev.add(&a, &t)
                };
                inner.eval(&arg, ev)
            }
            NumericFn::MidpointFold { inner } => {
                let one = ev.small(1);
                let zero = ev.small(0);
                let at_x = inner.eval(x, ev);
                let at_1mx = inner.eval(&ev.sub(&one, x), ev);
                let at_0 = inner.eval(&zero, ev);
                let at_1 = inner.eval(&one, ev);
                let s = ev.add(&at_x, &at_1mx);
                let t = ev.add(&at_0, &at_1);
                ev.sub(&s, &t)
            }
        }
    }

    /// Evaluates at a rational point.
    pub(crate) fn eval_rational(&self, x: &Rational, ev: &mut Evaluator) -> BigFloat {
        let xf = ev.rational(x);
        self.eval(&xf, ev)
    }

    pub fn name(&self) -> String {
        match self {
            NumericFn::Exp => "exp".into(),
            NumericFn::Log => "log".into(),
            NumericFn::Arctan => "arctan".into(),
            NumericFn::Arccot => "arccot".into(),
            NumericFn::Cot => "cot".into(),
            NumericFn::Gaussian => "gaussian".into(),
            NumericFn::Cos => "cos".into(),
            NumericFn::Arccos => "arccos".into(),
            NumericFn::Square => "square".into(),
            NumericFn::Sigmoid => "sigmoid".into(),
            NumericFn::Tanh => "tanh".into(),
            NumericFn::Silu => "silu".into(),
            NumericFn::Isru => "isru".into(),
            NumericFn::Affine { slope, intercept } => format!("affine:{slope}:{intercept}"),
            NumericFn::Rescaled { inner, start, end } => {
                format!("rescaled({}, {start}, {end})", inner.name())
            }
            NumericFn::MidpointFold { inner } => format!("midpoint_fold({})", inner.name()),
        }
    }
}

impl fmt::Display for NumericFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for NumericFn {
    type Err = GadgetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f = match s {
            "exp" => NumericFn::Exp,
            "log" => NumericFn::Log,
            "arctan" => NumericFn::Arctan,
            "arccot" => NumericFn::Arccot,
            "cot" => NumericFn::Cot,
            "gaussian" => NumericFn::Gaussian,
            "cos" => NumericFn::Cos,
            "arccos" => NumericFn::Arccos,
            "square" => NumericFn::Square,
            "sigmoid" => NumericFn::Sigmoid,
            "tanh" => NumericFn::Tanh,
            "silu" => NumericFn::Silu,
            "isru" => NumericFn::Isru,
            other => {
                // affine:slope:intercept
                let mut parts = other.split(':');
                match (parts.next(), parts.next(), parts.next(), parts.next()) {
                    (Some("affine"), Some(a), Some(b), None) => NumericFn::Affine {
                        slope: a
                            .parse()
                            .map_err(|_| GadgetError::InvalidInput(format!("bad slope in `{other}`")))?,
                        intercept: b
                            .parse()
                            .map_err(|_| GadgetError::InvalidInput(format!("bad intercept in `{other}`")))?,
                    },
                    _ => {
                        return Err(GadgetError::InvalidInput(format!(
                            "unknown numeric function `{other}`"
                        )))
                    }
                }
            }
        };
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(ev: &mut Evaluator, a: &BigFloat, b: &BigFloat) {
        let err = ev.rel_err(a, b);
        assert!(err < 1e-80, "rel err {err}");
    }

    #[test]
    fn elementary_values() {
        let mut ev = Evaluator::new();
        // ln 4 = 2 ln 2
        let two = ev.small(2);
        let four = ev.small(4);
        let l2 = NumericFn::Log.eval(&two, &mut ev);
        let l4 = NumericFn::Log.eval(&four, &mut ev);
        let two_l2 = ev.mul(&ev.small(2), &l2);
        assert_close(&mut ev, &two_l2, &l4);
        // arccot(1) = π/4
        let one = ev.small(1);
        let ac = NumericFn::Arccot.eval(&one, &mut ev);
        let pi = ev.pi();
        let q = ev.div(&pi, &ev.small(4));
        assert_close(&mut ev, &ac, &q);
        // sigmoid(0) = 1/2, tanh(0) = 0
        let zero = ev.small(0);
        let s = NumericFn::Sigmoid.eval(&zero, &mut ev);
        let half = ev.rational(&Rational::new(1, 2));
        assert_close(&mut ev, &s, &half);
        assert!(NumericFn::Tanh.eval(&zero, &mut ev).is_zero());
        // isru(1) = 1/√2
        let i = NumericFn::Isru.eval(&one, &mut ev);
        let r2 = ev.sqrt(&ev.small(2));
        let inv = ev.div(&one, &r2);
        assert_close(&mut ev, &i, &inv);
    }

    #[test]
    fn composition_forms() {
        let mut ev = Evaluator::new();
        // rescaling square from [0,1] to [2,4]: at x=1/2 we get 3² = 9
        let f = NumericFn::Rescaled {
            inner: Box::new(NumericFn::Square),
            start: Rational::from_int(2),
            end: Rational::from_int(4),
        };
        let half = ev.rational(&Rational::new(1, 2));
        let v = f.eval(&half, &mut ev);
        let nine = ev.small(9);
        assert_close(&mut ev, &v, &nine);
        // the fold of any function vanishes at the endpoints exactly
        let fold = NumericFn::MidpointFold {
            inner: Box::new(NumericFn::Sigmoid),
        };
        let zero = ev.small(0);
        let one = ev.small(1);
        assert!(fold.eval(&zero, &mut ev).is_zero());
        assert!(fold.eval(&one, &mut ev).is_zero());
    }

    #[test]
    fn parsing() {
        assert_eq!("tanh".parse::<NumericFn>().unwrap(), NumericFn::Tanh);
        let aff: NumericFn = "affine:2:3".parse().unwrap();
        assert_eq!(
            aff,
            NumericFn::Affine {
                slope: Rational::from_int(2),
                intercept: Rational::from_int(3)
            }
        );
        assert!("sin".parse::<NumericFn>().is_err());
    }
}

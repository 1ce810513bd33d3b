//! Exact univariate polynomials over the rationals and the reduction of
//! any degree-≥2 polynomial to the squaring function.
//!
//! The construction walks the degree down: shifting the argument by a
//! natural number and subtracting the original kills the leading term
//! while the next coefficient survives (it grows linearly in the shift),
//! so rescaling yields a monic polynomial of degree one less, still
//! expressed as a combination of integer shifts of the input. Iterating
//! to degree two gives a combination equal to `x²` up to an affine
//! correction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::ir::Rational;

use super::GadgetError;

/// Dense polynomial; `coeffs[i]` is the degree-`i` coefficient and the
/// top coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    /// `x²`, the target of the basis construction.
    pub fn square() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new(
            (0..len)
                .map(|i| &self.coeff(i) + &other.coeff(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `p(x + k)` by binomial expansion.
    pub fn shift_arg(&self, k: u64) -> Self {
        let kq = Rational::from_int(k as i64);
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // a·(x+k)^i distributes over out[0..=i]
            let mut kpow = Rational::one();
            for j in (0..=i).rev() {
                let b = binomial(BigInt::from(i), BigInt::from(j));
                out[j] += &(&(a * &Rational::from_int(b)) * &kpow);
                kpow = &kpow * &kq;
            }
        }
        Polynomial::new(out)
    }
}

/// A certified representation `x² = Σ scaleⱼ · p(x + shiftⱼ)
/// + affine_x·x + affine_const` for the input polynomial `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareCombination {
    /// Shift/scale pairs, ordered by shift.
    pub terms: Vec<(u64, Rational)>,
    pub affine_x: Rational,
    pub affine_const: Rational,
}

impl SquareCombination {
    /// Expands the combination applied to `p`; equals `x²` exactly when
    /// the combination was produced for `p`.
    pub fn expand(&self, p: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::new(vec![self.affine_const.clone(), self.affine_x.clone()]);
        for (shift, scale) in &self.terms {
            acc = acc.add(&p.shift_arg(*shift).scale(scale));
        }
        acc
    }
}

/// Tracks a polynomial together with its expression as a combination of
/// integer shifts of the original input.
#[derive(Clone)]
struct Tracked {
    poly: Polynomial,
    combo: BTreeMap<u64, Rational>,
}

impl Tracked {
    fn shift(&self, k: u64) -> Tracked {
        Tracked {
            poly: self.poly.shift_arg(k),
            combo: self
                .combo
                .iter()
                .map(|(s, c)| (s + k, c.clone()))
                .collect(),
        }
    }

    fn sub(&self, other: &Tracked) -> Tracked {
        let mut combo = self.combo.clone();
        for (s, c) in &other.combo {
            let e = combo.entry(*s).or_insert_with(Rational::zero);
            *e -= c;
            if e.is_zero() {
                combo.remove(s);
            }
        }
        Tracked {
            poly: self.poly.sub(&other.poly),
            combo,
        }
    }

    fn scale(&self, k: &Rational) -> Tracked {
        Tracked {
            poly: self.poly.scale(k),
            combo: self.combo.iter().map(|(s, c)| (*s, c * k)).collect(),
        }
    }
}

/// Expresses `x²` as a rational combination of integer shifts of `p`
/// plus an affine correction. Requires degree ≥ 2; non-monic inputs are
/// normalised by their leading coefficient (the scales absorb it).
pub fn poly_to_square(p: &Polynomial) -> Result<SquareCombination, GadgetError> {
    let Some(degree) = p.degree() else {
        return Err(GadgetError::DegreeTooLow);
    };
    if degree < 2 {
        return Err(GadgetError::DegreeTooLow);
    }
    let lead = p.leading_coeff().expect("nonzero by degree check");
    let mut cur = Tracked {
        poly: p.scale(&lead.recip()),
        combo: BTreeMap::from([(0u64, lead.recip())]),
    };

    while cur.poly.degree().expect("stays nonzero") > 2 {
        let d = cur.poly.degree().unwrap();
        // scan k = 1, 2, … and take the first difference whose next
        // coefficient survives; k = 1 always works (the coefficient is
        // d·k for a monic polynomial) but the scan mirrors the
        // construction as stated
        let mut k = 1u64;
        let next = loop {
            let diff = cur.shift(k).sub(&cur);
            if !diff.poly.coeff(d - 1).is_zero() {
                break diff;
            }
            k += 1;
        };
        debug_assert_eq!(next.poly.degree(), Some(d - 1));
        let c = next.poly.coeff(d - 1);
        cur = next.scale(&c.recip());
    }

    // cur is monic of degree two: x² + αx + β; subtract the affine tail
    let alpha = cur.poly.coeff(1);
    let beta = cur.poly.coeff(0);
    let combination = SquareCombination {
        terms: cur.combo.into_iter().collect(),
        affine_x: -alpha,
        affine_const: -beta,
    };
    debug_assert_eq!(combination.expand(p), Polynomial::square());
    Ok(combination)
}

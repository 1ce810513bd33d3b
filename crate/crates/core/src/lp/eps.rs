use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::ir::Rational;

/// A number of the form `real + eps·ε` where ε is a positive
/// infinitesimal: the value order is lexicographic in `(real, eps)`.
///
/// Strict inequalities are solved by replacing `< b` with `≤ b − ε`; the
/// simplex then runs over these pairs unchanged, because pivot elements
/// stay plain rationals and only right-hand sides carry an ε part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsRational {
    pub real: Rational,
    pub eps: Rational,
}

impl EpsRational {
    pub fn zero() -> Self {
        EpsRational {
            real: Rational::zero(),
            eps: Rational::zero(),
        }
    }

    pub fn from_real(real: Rational) -> Self {
        EpsRational {
            real,
            eps: Rational::zero(),
        }
    }

    pub fn new(real: Rational, eps: Rational) -> Self {
        EpsRational { real, eps }
    }

    pub fn is_zero(&self) -> bool {
        self.real.is_zero() && self.eps.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        *self < EpsRational::zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        EpsRational {
            real: &self.real * k,
            eps: &self.eps * k,
        }
    }

    /// Division by a plain rational; the quotient stays in ℚ[ε].
    pub fn div_rational(&self, k: &Rational) -> Self {
        EpsRational {
            real: &self.real / k,
            eps: &self.eps / k,
        }
    }

    /// The concrete value at `ε = at`.
    pub fn at(&self, at: &Rational) -> Rational {
        &self.real + &(&self.eps * at)
    }
}

impl PartialOrd for EpsRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.real
            .cmp(&other.real)
            .then_with(|| self.eps.cmp(&other.eps))
    }
}

impl Add<&EpsRational> for &EpsRational {
    type Output = EpsRational;
    fn add(self, rhs: &EpsRational) -> EpsRational {
        EpsRational {
            real: &self.real + &rhs.real,
            eps: &self.eps + &rhs.eps,
        }
    }
}

impl Sub<&EpsRational> for &EpsRational {
    type Output = EpsRational;
    fn sub(self, rhs: &EpsRational) -> EpsRational {
        EpsRational {
            real: &self.real - &rhs.real,
            eps: &self.eps - &rhs.eps,
        }
    }
}

impl AddAssign<&EpsRational> for EpsRational {
    fn add_assign(&mut self, rhs: &EpsRational) {
        self.real += &rhs.real;
        self.eps += &rhs.eps;
    }
}

impl SubAssign<&EpsRational> for EpsRational {
    fn sub_assign(&mut self, rhs: &EpsRational) {
        self.real -= &rhs.real;
        self.eps -= &rhs.eps;
    }
}

impl Neg for EpsRational {
    type Output = EpsRational;
    fn neg(self) -> EpsRational {
        EpsRational {
            real: -self.real,
            eps: -self.eps,
        }
    }
}

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            write!(f, "{}", self.real)
        } else {
            write!(f, "{} + {}ε", self.real, self.eps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn lexicographic_order() {
        let a = EpsRational::new(r(1, 1), r(-100, 1));
        let b = EpsRational::new(r(1, 1), r(0, 1));
        let c = EpsRational::new(r(2, 1), r(-1, 1));
        assert!(a < b);
        assert!(b < c);
        assert!(a < c);
        // ε beats any real tie but no real gap
        assert!(EpsRational::new(r(0, 1), r(1, 1)) > EpsRational::zero());
        assert!(EpsRational::new(r(0, 1), r(1, 1)) < EpsRational::from_real(r(1, 1000000)));
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = EpsRational::new(r(1, 2), r(-1, 1));
        let b = EpsRational::new(r(1, 2), r(2, 1));
        assert_eq!(&a + &b, EpsRational::new(r(1, 1), r(1, 1)));
        assert_eq!(a.scale(&r(2, 1)), EpsRational::new(r(1, 1), r(-2, 1)));
        assert_eq!(a.div_rational(&r(1, 2)), EpsRational::new(r(1, 1), r(-2, 1)));
        assert_eq!(a.at(&r(1, 4)), r(1, 4));
    }
}

use crate::ir::Rational;

/// An affine function of the network inputs, `coeffs · x + constant`.
/// Once a piece is fixed for every node on a path, each node value is
/// exactly such a form, so the search works in input space only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct AffineForm {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineForm {
    /// The `j`-th input variable of an `n`-input network.
    pub fn input(n: usize, j: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[j] = Rational::one();
        AffineForm {
            coeffs,
            constant: Rational::zero(),
        }
    }

    /// `Σ w_i · forms_i + bias`.
    pub fn combine(weights: &[Rational], forms: &[&AffineForm], bias: &Rational, n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n];
        let mut constant = bias.clone();
        for (w, f) in weights.iter().zip(forms) {
            if w.is_zero() {
                continue;
            }
            for (acc, c) in coeffs.iter_mut().zip(&f.coeffs) {
                if !c.is_zero() {
                    *acc += &(w * c);
                }
            }
            constant += &(w * &f.constant);
        }
        AffineForm { coeffs, constant }
    }

    /// `slope · self + intercept`.
    pub fn scale_shift(&self, slope: &Rational, intercept: &Rational) -> Self {
        AffineForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| if c.is_zero() { Rational::zero() } else { slope * c })
                .collect(),
            constant: &(slope * &self.constant) + intercept,
        }
    }

    #[cfg(test)]
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (c, v) in self.coeffs.iter().zip(x) {
            if !c.is_zero() {
                acc += &(c * v);
            }
        }
        acc
    }
}

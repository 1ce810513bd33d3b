use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{IrError, Rational};

/// One linear cell of a piecewise-linear function: on the interval
/// described by `lo`/`hi` (with `None` for an unbounded end) the function
/// is `slope·x + intercept`. A degenerate point cell `[v, v]` is legal
/// and carries both endpoints closed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: Option<Rational>,
    pub lo_closed: bool,
    pub hi: Option<Rational>,
    pub hi_closed: bool,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    /// Single cell covering all of ℝ.
    pub fn full(slope: Rational, intercept: Rational) -> Self {
        Piece {
            lo: None,
            lo_closed: false,
            hi: None,
            hi_closed: false,
            slope,
            intercept,
        }
    }

    pub fn bounded(
        lo: Option<(Rational, bool)>,
        hi: Option<(Rational, bool)>,
        slope: Rational,
        intercept: Rational,
    ) -> Self {
        let (lo, lo_closed) = match lo {
            Some((v, c)) => (Some(v), c),
            None => (None, false),
        };
        let (hi, hi_closed) = match hi {
            Some((v, c)) => (Some(v), c),
            None => (None, false),
        };
        Piece {
            lo,
            lo_closed,
            hi,
            hi_closed,
            slope,
            intercept,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            None => true,
            Some(lo) => {
                if self.lo_closed {
                    x >= lo
                } else {
                    x > lo
                }
            }
        };
        let below = match &self.hi {
            None => true,
            Some(hi) => {
                if self.hi_closed {
                    x <= hi
                } else {
                    x < hi
                }
            }
        };
        above && below
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &(&self.slope * x) + &self.intercept
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a == b)
    }

    fn validate(&self) -> Result<(), IrError> {
        let err = |m: &str| Err(IrError::InvalidActivation(m.to_owned()));
        if self.lo.is_none() && self.lo_closed {
            return err("unbounded lower end must be open");
        }
        if self.hi.is_none() && self.hi_closed {
            return err("unbounded upper end must be open");
        }
        if let (Some(lo), Some(hi)) = (&self.lo, &self.hi) {
            if lo > hi {
                return err("piece has lo > hi");
            }
            if lo == hi && !(self.lo_closed && self.hi_closed) {
                return err("point piece must be closed on both ends");
            }
        }
        Ok(())
    }
}

/// Name tags for the supported activation shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActivationKind {
    Id,
    Relu,
    LeakyRelu,
    Heaviside,
    Sign,
    Abs,
    HardSigmoid,
    Custom,
}

impl ActivationKind {
    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::Id => "id",
            ActivationKind::Relu => "relu",
            ActivationKind::LeakyRelu => "leaky_relu",
            ActivationKind::Heaviside => "heaviside",
            ActivationKind::Sign => "sign",
            ActivationKind::Abs => "abs",
            ActivationKind::HardSigmoid => "hard_sigmoid",
            ActivationKind::Custom => "custom",
        }
    }
}

/// A piecewise-linear activation: an ordered list of pieces that are
/// pairwise disjoint and cover ℝ exactly, so every real lies in exactly
/// one piece.
///
/// Builtin tags expand to fixed piece lists. Step functions take the
/// conventions `H(0) = 1` and `sign(0) = 0`; discontinuities are realised
/// with half-open pieces, and `sign` carries the point piece `[0, 0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activation {
    kind: ActivationKind,
    params: Vec<Rational>,
    pieces: Vec<Piece>,
}

impl Activation {
    pub fn id() -> Self {
        Activation {
            kind: ActivationKind::Id,
            params: vec![],
            pieces: vec![Piece::full(Rational::one(), Rational::zero())],
        }
    }

    /// `max(0, x)`: zero on `(-∞, 0)`, identity on `[0, ∞)`.
    pub fn relu() -> Self {
        Activation {
            kind: ActivationKind::Relu,
            params: vec![],
            pieces: vec![
                Piece::bounded(None, Some((Rational::zero(), false)), Rational::zero(), Rational::zero()),
                Piece::bounded(Some((Rational::zero(), true)), None, Rational::one(), Rational::zero()),
            ],
        }
    }

    /// `x` for `x ≥ 0`, `α·x` for `x < 0`.
    pub fn leaky_relu(alpha: Rational) -> Self {
        Activation {
            kind: ActivationKind::LeakyRelu,
            pieces: vec![
                Piece::bounded(None, Some((Rational::zero(), false)), alpha.clone(), Rational::zero()),
                Piece::bounded(Some((Rational::zero(), true)), None, Rational::one(), Rational::zero()),
            ],
            params: vec![alpha],
        }
    }

    /// Step function with `H(0) = 1`.
    pub fn heaviside() -> Self {
        Activation {
            kind: ActivationKind::Heaviside,
            params: vec![],
            pieces: vec![
                Piece::bounded(None, Some((Rational::zero(), false)), Rational::zero(), Rational::zero()),
                Piece::bounded(Some((Rational::zero(), true)), None, Rational::zero(), Rational::one()),
            ],
        }
    }

    /// Signum with `sign(0) = 0`, realised with the point piece `[0, 0]`.
    pub fn sign() -> Self {
        Activation {
            kind: ActivationKind::Sign,
            params: vec![],
            pieces: vec![
                Piece::bounded(None, Some((Rational::zero(), false)), Rational::zero(), -Rational::one()),
                Piece::bounded(
                    Some((Rational::zero(), true)),
                    Some((Rational::zero(), true)),
                    Rational::zero(),
                    Rational::zero(),
                ),
                Piece::bounded(Some((Rational::zero(), false)), None, Rational::zero(), Rational::one()),
            ],
        }
    }

    pub fn abs() -> Self {
        Activation {
            kind: ActivationKind::Abs,
            params: vec![],
            pieces: vec![
                Piece::bounded(None, Some((Rational::zero(), false)), -Rational::one(), Rational::zero()),
                Piece::bounded(Some((Rational::zero(), true)), None, Rational::one(), Rational::zero()),
            ],
        }
    }

    /// Saturating ramp: `-1` for `x < -α`, `x/α` on `[-α, α]`, `1` for
    /// `x > α`. Requires `α > 0`.
    pub fn hard_sigmoid(alpha: Rational) -> Result<Self, IrError> {
        if !alpha.is_positive() {
            return Err(IrError::InvalidActivation(format!(
                "hard_sigmoid needs a positive parameter, got {alpha}"
            )));
        }
        let slope = alpha.recip();
        Ok(Activation {
            kind: ActivationKind::HardSigmoid,
            pieces: vec![
                Piece::bounded(None, Some((-&alpha, false)), Rational::zero(), -Rational::one()),
                Piece::bounded(Some((-&alpha, true)), Some((alpha.clone(), true)), slope, Rational::zero()),
                Piece::bounded(Some((alpha.clone(), false)), None, Rational::zero(), Rational::one()),
            ],
            params: vec![alpha],
        })
    }

    /// Arbitrary piece list; call [`Activation::validate`] before use.
    pub fn custom(pieces: Vec<Piece>) -> Self {
        Activation {
            kind: ActivationKind::Custom,
            params: vec![],
            pieces,
        }
    }

    pub fn kind(&self) -> ActivationKind {
        self.kind
    }

    pub fn params(&self) -> &[Rational] {
        &self.params
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Checks the partition invariant: pieces sorted, pairwise disjoint,
    /// and covering ℝ exactly.
    pub fn validate(&self) -> Result<(), IrError> {
        let err = |m: String| Err(IrError::InvalidActivation(m));
        if self.pieces.is_empty() {
            return err("activation has no pieces".into());
        }
        for p in &self.pieces {
            p.validate()?;
        }
        if self.pieces[0].lo.is_some() {
            return err("first piece must be unbounded below".into());
        }
        if self.pieces[self.pieces.len() - 1].hi.is_some() {
            return err("last piece must be unbounded above".into());
        }
        for (a, b) in self.pieces.iter().zip(self.pieces.iter().skip(1)) {
            match (&a.hi, &b.lo) {
                (Some(hi), Some(lo)) => {
                    if hi != lo {
                        return err(format!("gap or overlap between pieces at {hi} vs {lo}"));
                    }
                    if a.hi_closed == b.lo_closed {
                        return err(format!("boundary {hi} owned by both or neither piece"));
                    }
                }
                _ => return err("interior piece with unbounded end".into()),
            }
        }
        Ok(())
    }

    /// Index of the unique piece containing `x`.
    pub fn piece_index_of(&self, x: &Rational) -> usize {
        self.pieces
            .iter()
            .position(|p| p.contains(x))
            .expect("activation pieces do not cover input; activation was not validated")
    }

    /// Evaluates the activation at `x` via its unique containing piece.
    pub fn apply(&self, x: &Rational) -> Rational {
        self.pieces[self.piece_index_of(x)].eval(x)
    }
}

/// Wire representation: builtins serialise as their tag (plus params
/// where applicable), custom activations as an explicit piece list.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum ActivationRepr {
    Tag(String),
    Full {
        name: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<Rational>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        pieces: Vec<Piece>,
    },
}

impl Activation {
    pub(crate) fn to_repr(&self) -> ActivationRepr {
        match self.kind {
            ActivationKind::Custom => ActivationRepr::Full {
                name: "custom".into(),
                params: vec![],
                pieces: self.pieces.clone(),
            },
            k if self.params.is_empty() => ActivationRepr::Tag(k.name().into()),
            k => ActivationRepr::Full {
                name: k.name().into(),
                params: self.params.clone(),
                pieces: vec![],
            },
        }
    }

    pub(crate) fn from_repr(repr: ActivationRepr) -> Result<Self, IrError> {
        let (name, params, pieces) = match repr {
            ActivationRepr::Tag(name) => (name, vec![], vec![]),
            ActivationRepr::Full { name, params, pieces } => (name, params, pieces),
        };
        let one_param = |params: Vec<Rational>| -> Result<Rational, IrError> {
            let mut it = params.into_iter();
            match (it.next(), it.next()) {
                (Some(p), None) => Ok(p),
                _ => Err(IrError::InvalidActivation(
                    "expected exactly one parameter".into(),
                )),
            }
        };
        let no_params = |params: &[Rational], act: Activation| -> Result<Activation, IrError> {
            if params.is_empty() {
                Ok(act)
            } else {
                Err(IrError::InvalidActivation(format!(
                    "{} takes no parameters",
                    act.kind.name()
                )))
            }
        };
        let act = match name.as_str() {
            "id" => no_params(&params, Activation::id())?,
            "relu" => no_params(&params, Activation::relu())?,
            "heaviside" => no_params(&params, Activation::heaviside())?,
            "sign" => no_params(&params, Activation::sign())?,
            "abs" => no_params(&params, Activation::abs())?,
            "leaky_relu" => Activation::leaky_relu(one_param(params)?),
            "hard_sigmoid" => Activation::hard_sigmoid(one_param(params)?)?,
            "custom" => {
                let act = Activation::custom(pieces);
                act.validate()?;
                act
            }
            other => {
                return Err(IrError::InvalidActivation(format!(
                    "unknown activation tag `{other}`"
                )))
            }
        };
        Ok(act)
    }
}

impl Serialize for Activation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Activation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ActivationRepr::deserialize(deserializer)?;
        Activation::from_repr(repr).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn builtin_values() {
        // relu clamps negatives
        assert_eq!(Activation::relu().apply(&r(-3, 1)), Rational::zero());
        assert_eq!(Activation::relu().apply(&r(5, 2)), r(5, 2));
        // point piece at zero
        assert_eq!(Activation::sign().apply(&Rational::zero()), Rational::zero());
        assert_eq!(Activation::sign().apply(&r(-1, 7)), r(-1, 1));
        assert_eq!(Activation::sign().apply(&r(1, 9)), Rational::one());
        // leaky slope below zero
        assert_eq!(Activation::leaky_relu(r(1, 2)).apply(&r(-4, 1)), r(-2, 1));
        // H(0) = 1 by convention
        assert_eq!(Activation::heaviside().apply(&Rational::zero()), Rational::one());
        assert_eq!(Activation::heaviside().apply(&r(-1, 100)), Rational::zero());
        assert_eq!(Activation::abs().apply(&r(-7, 3)), r(7, 3));
        let hs = Activation::hard_sigmoid(r(1, 2)).unwrap();
        assert_eq!(hs.apply(&r(-1, 2)), -Rational::one());
        assert_eq!(hs.apply(&r(1, 4)), r(1, 2));
        assert_eq!(hs.apply(&r(3, 1)), Rational::one());
    }

    #[test]
    fn builtins_validate() {
        for act in [
            Activation::id(),
            Activation::relu(),
            Activation::leaky_relu(r(1, 2)),
            Activation::heaviside(),
            Activation::sign(),
            Activation::abs(),
            Activation::hard_sigmoid(r(1, 4)).unwrap(),
        ] {
            act.validate().unwrap_or_else(|e| panic!("{}: {e}", act.kind().name()));
        }
    }

    #[test]
    fn invalid_partitions_rejected() {
        // gap between pieces
        let gap = Activation::custom(vec![
            Piece::bounded(None, Some((r(0, 1), false)), Rational::zero(), Rational::zero()),
            Piece::bounded(Some((r(1, 1), true)), None, Rational::one(), Rational::zero()),
        ]);
        assert!(gap.validate().is_err());
        // boundary owned by both sides
        let overlap = Activation::custom(vec![
            Piece::bounded(None, Some((r(0, 1), true)), Rational::zero(), Rational::zero()),
            Piece::bounded(Some((r(0, 1), true)), None, Rational::one(), Rational::zero()),
        ]);
        assert!(overlap.validate().is_err());
        // point piece must be closed
        let open_point = Piece {
            lo: Some(r(0, 1)),
            lo_closed: true,
            hi: Some(r(0, 1)),
            hi_closed: false,
            slope: Rational::zero(),
            intercept: Rational::zero(),
        };
        assert!(open_point.validate().is_err());
        assert!(Activation::hard_sigmoid(r(-1, 2)).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let acts = vec![
            Activation::relu(),
            Activation::leaky_relu(r(1, 2)),
            Activation::sign(),
            Activation::custom(vec![
                Piece::bounded(None, Some((r(1, 3), true)), r(2, 1), r(0, 1)),
                Piece::bounded(Some((r(1, 3), false)), None, r(0, 1), r(2, 3)),
            ]),
        ];
        for act in acts {
            let json = serde_json::to_string(&act).unwrap();
            let back: Activation = serde_json::from_str(&json).unwrap();
            assert_eq!(act, back, "{json}");
        }
        assert_eq!(serde_json::to_string(&Activation::relu()).unwrap(), "\"relu\"");
        assert!(serde_json::from_str::<Activation>("\"sigmoid\"").is_err());
    }
}

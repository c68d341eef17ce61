//! Lifts of orientation-preserving circle homeomorphisms.
//!
//! A [`Lift`] is a strictly increasing map of the real line commuting with
//! `x -> x + 1`. Lifts are kept as expression trees over three kinds of
//! primitive (rigid rotations, piecewise-linear maps and projective boundary
//! actions of `SL(2, R)`), so composition, inversion and powers are exact
//! operations and evaluation is the only numerical step.
//!
//! [`CircleMap`] is a circle homeomorphism represented by its standard lift,
//! the one with `f(0) - 0` in `[0, 1)`.

mod mobius;
mod pl;
mod rotation;

use alloc::sync::Arc;
use alloc::vec::Vec;

pub use mobius::{
    mat_inv, mat_mul, mobius_classify, normalize, rotation_matrix, Matrix2, MobiusClass,
    MobiusKind, MobiusMap, DEFAULT_TRACE_EPS, DET_TOLERANCE,
};
pub use pl::PlMap;
pub use rotation::{
    displacement_range, rotation_number, translation_number, translation_number_with,
    Enclosure, Estimate, TranslationConfig,
};

/// Errors raised while building or analysing lifts.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LiftError {
    /// Breakpoints of a piecewise-linear map fail to increase at `index`.
    #[error("piecewise-linear data not strictly increasing at breakpoint {index}")]
    NonMonotonePl {
        /// Offending breakpoint.
        index: usize,
    },
    /// Matrix determinant too far from one.
    #[error("matrix determinant {det} is not 1")]
    SingularMatrix {
        /// The determinant found.
        det: f64,
    },
    /// The iteration cap was reached before the enclosure was narrow enough.
    #[error("no enclosure of width <= tolerance within {iterations} iterations (width {width})")]
    IterationLimit {
        /// Iterations performed.
        iterations: u64,
        /// Width reached.
        width: f64,
    },
    /// A tolerance or size parameter outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Node of a lift expression tree.
#[derive(Clone, Debug)]
pub enum LiftNode {
    /// `x -> x + alpha`.
    Rotation(f64),
    /// Piecewise-linear primitive.
    Pl(PlMap),
    /// Boundary action of a determinant-one matrix.
    Mobius(MobiusMap),
    /// `outer o inner`.
    Compose(Lift, Lift),
    /// `x -> inner(x) + k`.
    Translate(i64, Lift),
}

#[derive(Debug)]
struct Node {
    kind: LiftNode,
    // number of primitive evaluations performed by one call
    cost: u64,
    translation: Option<f64>,
    // product of the projective matrices, when every leaf has one
    matrix: Option<Matrix2>,
}

/// An element of the universal cover of `Homeo+(S^1)`.
#[derive(Clone, Debug)]
pub struct Lift(Arc<Node>);

impl Lift {
    fn from_kind(kind: LiftNode) -> Self {
        let (cost, translation) = match &kind {
            LiftNode::Rotation(a) => (1, Some(*a)),
            LiftNode::Pl(p) => (1, p.as_translation()),
            LiftNode::Mobius(m) => (1, m.as_translation()),
            LiftNode::Compose(a, b) => (
                a.0.cost.saturating_add(b.0.cost),
                a.0.translation.zip(b.0.translation).map(|(s, t)| s + t),
            ),
            LiftNode::Translate(k, a) => (a.0.cost, a.0.translation.map(|s| s + *k as f64)),
        };
        let matrix = match &kind {
            LiftNode::Rotation(a) => Some(rotation_matrix(core::f64::consts::PI * a)),
            LiftNode::Pl(_) => None,
            LiftNode::Mobius(m) => Some(*m.matrix()),
            LiftNode::Compose(a, b) => a.0.matrix.zip(b.0.matrix).map(|(x, y)| mat_mul(&x, &y)),
            LiftNode::Translate(_, a) => a.0.matrix,
        };
        Self(Arc::new(Node {
            kind,
            cost,
            translation,
            matrix,
        }))
    }

    /// The identity of `R`.
    pub fn identity() -> Self {
        Self::rotation(0.0)
    }

    /// `x -> x + alpha`.
    pub fn rotation(alpha: f64) -> Self {
        Self::from_kind(LiftNode::Rotation(alpha))
    }

    /// `x -> x + k`.
    pub fn int_translation(k: i64) -> Self {
        Self::identity().translate(k)
    }

    /// Piecewise-linear lift; see [`PlMap`].
    pub fn pl(breakpoints: Vec<(f64, f64)>, shift: i64) -> Result<Self, LiftError> {
        Ok(Self::from_kind(LiftNode::Pl(PlMap::new(breakpoints, shift)?)))
    }

    /// Boundary action of `matrix` on `RP^1`, with integer branch `branch`.
    pub fn mobius(matrix: Matrix2, branch: i64) -> Result<Self, LiftError> {
        Ok(Self::from_kind(LiftNode::Mobius(MobiusMap::new(
            matrix, branch,
        )?)))
    }

    /// The root node.
    pub fn node(&self) -> &LiftNode {
        &self.0.kind
    }

    /// Primitive evaluations per call of [`Lift::eval`].
    pub fn cost(&self) -> u64 {
        self.0.cost
    }

    /// `Some(c)` when the tree is, symbolically, the translation by `c`.
    pub fn as_translation(&self) -> Option<f64> {
        self.0.translation
    }

    /// Evaluates the lift at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.0.kind {
            LiftNode::Rotation(a) => x + a,
            LiftNode::Pl(p) => p.eval(x),
            LiftNode::Mobius(m) => m.eval(x),
            LiftNode::Compose(outer, inner) => outer.eval(inner.eval(x)),
            LiftNode::Translate(k, a) => a.eval(x) + *k as f64,
        }
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &Lift) -> Lift {
        Self::from_kind(LiftNode::Compose(self.clone(), inner.clone()))
    }

    /// `x -> self(x) + k`.
    pub fn translate(&self, k: i64) -> Lift {
        if k == 0 {
            return self.clone();
        }
        match &self.0.kind {
            LiftNode::Translate(j, a) if j + k == 0 => a.clone(),
            LiftNode::Translate(j, a) => Self::from_kind(LiftNode::Translate(j + k, a.clone())),
            _ => Self::from_kind(LiftNode::Translate(k, self.clone())),
        }
    }

    /// Inverse, pushed down to the primitives.
    pub fn inverse(&self) -> Lift {
        match &self.0.kind {
            LiftNode::Rotation(a) => Self::rotation(-a),
            LiftNode::Pl(p) => Self::from_kind(LiftNode::Pl(p.inverse())),
            LiftNode::Mobius(m) => Self::from_kind(LiftNode::Mobius(m.inverse())),
            LiftNode::Compose(a, b) if Arc::ptr_eq(&a.0, &b.0) => {
                let ai = a.inverse();
                ai.compose(&ai)
            }
            LiftNode::Compose(a, b) => b.inverse().compose(&a.inverse()),
            LiftNode::Translate(k, a) => a.inverse().translate(-k),
        }
    }

    /// `self^k` by repeated squaring; the tree has depth `O(log |k|)`.
    pub fn power(&self, k: i64) -> Lift {
        if k < 0 {
            return self.inverse().power(-k);
        }
        let mut result: Option<Lift> = None;
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.compose(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        result.unwrap_or_else(Lift::identity)
    }

    /// The matrix whose boundary action this lift covers, when the tree is
    /// built from Möbius maps and rotations only.
    pub fn projective_matrix(&self) -> Option<Matrix2> {
        self.0.matrix
    }

    /// `[self, other] = self o other o self^-1 o other^-1`.
    pub fn commutator(&self, other: &Lift) -> Lift {
        self.compose(other)
            .compose(&self.inverse())
            .compose(&other.inverse())
    }
}

/// Group operations available through [`lift_algebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftOp {
    /// Composite of all arguments, `args[0] o args[1] o ...`.
    Compose,
    /// Inverse of the single argument.
    Inverse,
    /// `k`-th power of the single argument.
    Power(i64),
}

/// Group structure of the universal cover, as a single entry point.
pub fn lift_algebra(op: LiftOp, args: &[Lift]) -> Result<Lift, LiftError> {
    match op {
        LiftOp::Compose => {
            let mut it = args.iter();
            let first = it
                .next()
                .ok_or(LiftError::InvalidArgument("compose needs at least one lift"))?;
            Ok(it.fold(first.clone(), |acc, f| acc.compose(f)))
        }
        LiftOp::Inverse | LiftOp::Power(_) => {
            let [f] = args else {
                return Err(LiftError::InvalidArgument("expected exactly one lift"));
            };
            Ok(match op {
                LiftOp::Inverse => f.inverse(),
                LiftOp::Power(k) => f.power(k),
                LiftOp::Compose => unreachable!(),
            })
        }
    }
}

/// Evaluates `lift` at `x`.
pub fn evaluate(lift: &Lift, x: f64) -> f64 {
    lift.eval(x)
}

/// The integer translate of `lift` with `g(x0) - x0` in `[0, 1)`.
pub fn standard_lift(lift: &Lift, x0: f64) -> Lift {
    let d = lift.eval(x0) - x0;
    let mut k = -(libm::floor(d) as i64);
    // guard against rounding right at an integer
    let shifted = d + k as f64;
    if shifted >= 1.0 {
        k -= 1;
    } else if shifted < 0.0 {
        k += 1;
    }
    lift.translate(k)
}

/// A circle homeomorphism, stored through its standard lift at `0`.
#[derive(Clone, Debug)]
pub struct CircleMap {
    lift: Lift,
}

impl CircleMap {
    /// The circle map covered by `lift` (any lift will do).
    pub fn new(lift: &Lift) -> Self {
        Self {
            lift: standard_lift(lift, 0.0),
        }
    }

    /// The identity of the circle.
    pub fn identity() -> Self {
        Self::new(&Lift::identity())
    }

    /// Rigid rotation by `alpha` (mod 1).
    pub fn rotation(alpha: f64) -> Self {
        Self::new(&Lift::rotation(alpha))
    }

    /// Canonical lift, `f(0)` in `[0, 1)`.
    pub fn lift(&self) -> &Lift {
        &self.lift
    }

    /// Standard lift at basepoint `x0`.
    pub fn lift_at(&self, x0: f64) -> Lift {
        standard_lift(&self.lift, x0)
    }

    /// Whether the stored lift is the one normalized at `0`; always true.
    pub fn is_normalized(&self) -> bool {
        let y = self.lift.eval(0.0);
        (0.0..1.0).contains(&y)
    }

    /// `self o other`.
    pub fn compose(&self, other: &CircleMap) -> CircleMap {
        Self::new(&self.lift.compose(&other.lift))
    }

    /// Inverse map.
    pub fn inverse(&self) -> CircleMap {
        Self::new(&self.lift.inverse())
    }

    /// `n`-th power.
    pub fn power(&self, n: i64) -> CircleMap {
        Self::new(&self.lift.power(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sample_lifts() -> Vec<Lift> {
        vec![
            Lift::rotation(0.37),
            Lift::pl(vec![(0.0, 0.1), (0.3, 0.2), (0.7, 0.95)], -1).unwrap(),
            Lift::mobius([[2.0, 1.0], [1.0, 1.0]], 0).unwrap(),
            Lift::mobius(rotation_matrix(2.0), 3).unwrap(),
        ]
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&Lift::rotation(0.25), 0.5), 0.75);
        let pl = Lift::pl(vec![(0.0, 0.0), (0.5, 0.25)], 0).unwrap();
        assert_eq!(evaluate(&pl, 0.25), 0.125);
        let id = Lift::mobius([[1.0, 0.0], [0.0, 1.0]], 0).unwrap();
        for i in 0..50 {
            let x = -3.0 + i as f64 * 0.13;
            assert!((evaluate(&id, x) - x).abs() < 1e-14);
        }
    }

    #[test]
    fn algebra_examples() {
        let c = lift_algebra(LiftOp::Compose, &[Lift::rotation(0.3), Lift::rotation(0.4)]).unwrap();
        let inv = lift_algebra(LiftOp::Inverse, &[Lift::rotation(0.3)]).unwrap();
        for i in 0..20 {
            let x = i as f64 * 0.21 - 2.0;
            assert!((c.eval(x) - (x + 0.7)).abs() < 1e-12);
            assert!((inv.eval(x) - (x - 0.3)).abs() < 1e-12);
        }
        for f in sample_lifts() {
            let id = lift_algebra(LiftOp::Power(0), &[f]).unwrap();
            assert_eq!(id.eval(0.42), 0.42);
        }
        assert!(lift_algebra(LiftOp::Compose, &[]).is_err());
        assert!(lift_algebra(LiftOp::Inverse, &[Lift::identity(), Lift::identity()]).is_err());
    }

    #[test]
    fn powers_and_inverses_agree_with_iteration() {
        for f in sample_lifts() {
            let p = f.power(7);
            let q = f.power(-5);
            for i in 0..30 {
                let x = i as f64 * 0.077 - 1.0;
                let mut y = x;
                for _ in 0..7 {
                    y = f.eval(y);
                }
                assert!((p.eval(x) - y).abs() < 1e-10);
                let back = f.power(5).eval(q.eval(x));
                assert!((back - x).abs() < 1e-10);
                assert!((f.compose(&f.inverse()).eval(x) - x).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn power_tree_is_logarithmic() {
        let f = Lift::mobius([[2.0, 1.0], [1.0, 1.0]], 0).unwrap();
        let p = f.power(1 << 20);
        assert_eq!(p.cost(), 1 << 20);
        let pi = p.inverse();
        assert_eq!(pi.cost(), 1 << 20);
    }

    #[test]
    fn standard_lift_examples() {
        let a = standard_lift(&Lift::rotation(1.3), 0.0);
        assert!((a.eval(0.0) - 0.3).abs() < 1e-12);
        let b = standard_lift(&Lift::identity(), 0.0);
        assert_eq!(b.eval(0.6), 0.6);
        let c = standard_lift(&Lift::rotation(-0.25), 0.0);
        assert_eq!(c.eval(0.0), 0.75);
        for f in sample_lifts() {
            for x0 in [0.0, 0.3, -2.7] {
                let g = standard_lift(&f, x0);
                let d = g.eval(x0) - x0;
                assert!((0.0..1.0).contains(&d));
            }
            assert!(CircleMap::new(&f).is_normalized());
        }
    }

    #[test]
    fn translation_detection() {
        let f = Lift::rotation(0.3).compose(&Lift::int_translation(2)).inverse();
        assert!((f.as_translation().unwrap() + 2.3).abs() < 1e-15);
        let g = Lift::pl(vec![(0.0, 0.25), (0.5, 0.75)], 1).unwrap();
        assert_eq!(g.as_translation(), Some(1.25));
        assert!(sample_lifts()[2].as_translation().is_none());
        let r = Lift::mobius(rotation_matrix(0.5), 2).unwrap();
        assert!((r.as_translation().unwrap() - (2.0 + 0.5 / core::f64::consts::PI)).abs() < 1e-15);
    }
}

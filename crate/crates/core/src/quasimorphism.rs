//! Quasimorphisms on free groups: Rolli quasimorphisms, defect lower bounds
//! and homogenization with an explicit error term.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::words::{ball_size, ball_with_budget, Word, WordError};

/// Errors raised by quasimorphism routines.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum QuasiError {
    /// The word lives in a free group of the wrong rank.
    #[error("expected a word of rank {expected}, got rank {found}")]
    RankMismatch {
        /// Required rank.
        expected: u32,
        /// Rank of the word supplied.
        found: u32,
    },
    /// The pair enumeration exceeds the budget.
    #[error("ball of radius {radius} gives {pairs} pairs, over the budget {budget}")]
    BallTooLarge {
        /// Requested radius.
        radius: usize,
        /// Number of pairs.
        pairs: u128,
        /// Configured budget.
        budget: u128,
    },
    /// `D / n <= tol` was not reached below the power cap.
    #[error("homogenization needs n > {cap} to reach the tolerance")]
    IterationLimit {
        /// Largest power allowed.
        cap: u64,
    },
    /// Invalid parameter.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    /// Word construction failed.
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An odd bounded function on the integers with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct OddSequence {
    support: BTreeMap<u64, f64>,
    bound: f64,
}

impl OddSequence {
    /// The sequence with `alpha(n) = values[n]` for the listed `n > 0`, zero
    /// elsewhere on the positives, extended by `alpha(-n) = -alpha(n)`.
    pub fn new(values: impl IntoIterator<Item = (u64, f64)>) -> Result<Self, QuasiError> {
        let mut support = BTreeMap::new();
        for (n, v) in values {
            if n == 0 {
                return Err(QuasiError::InvalidArgument("alpha(0) is forced to be 0"));
            }
            if !v.is_finite() {
                return Err(QuasiError::InvalidArgument("alpha must be finite"));
            }
            if v != 0.0 {
                support.insert(n, v);
            }
        }
        let bound = support.values().fold(0.0_f64, |b, v| b.max(v.abs()));
        Ok(Self { support, bound })
    }

    /// `alpha(1) = 1`, `alpha(-1) = -1`, zero elsewhere.
    pub fn unit_sign() -> Self {
        Self::new([(1, 1.0)]).expect("valid sequence")
    }

    /// `alpha(n) = sign(n)` for `|n| <= cutoff`, zero beyond.
    pub fn truncated_sign(cutoff: u64) -> Self {
        Self::new((1..=cutoff).map(|n| (n, 1.0))).expect("valid sequence")
    }

    /// Value at `n`.
    pub fn at(&self, n: i64) -> f64 {
        let v = self.support.get(&n.unsigned_abs()).copied().unwrap_or(0.0);
        if n < 0 {
            -v
        } else {
            v
        }
    }

    /// `max |alpha|`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// The nonzero values at positive integers.
    pub fn support(&self) -> &BTreeMap<u64, f64> {
        &self.support
    }
}

/// `sum_j alpha(n_j)` over the syllables `s_{i_j}^{n_j}` of a rank-2 word.
pub fn rolli_eval(alpha: &OddSequence, w: &Word) -> Result<f64, QuasiError> {
    if w.rank() != 2 {
        return Err(QuasiError::RankMismatch {
            expected: 2,
            found: w.rank(),
        });
    }
    Ok(w.syllables().iter().map(|s| alpha.at(s.exponent)).sum())
}

type Evaluator = Arc<dyn Fn(&Word) -> f64 + Send + Sync>;

/// A real function on a free group, with an optional known defect bound.
#[derive(Clone)]
pub struct Quasimorphism {
    evaluator: Evaluator,
    defect_bound: Option<f64>,
    label: String,
    rank: u32,
}

impl fmt::Debug for Quasimorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quasimorphism")
            .field("label", &self.label)
            .field("rank", &self.rank)
            .field("defect_bound", &self.defect_bound)
            .finish()
    }
}

impl Quasimorphism {
    /// Wraps an arbitrary evaluator on words of rank `rank`.
    pub fn from_fn(
        label: impl Into<String>,
        rank: u32,
        defect_bound: Option<f64>,
        f: impl Fn(&Word) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            evaluator: Arc::new(f),
            defect_bound,
            label: label.into(),
            rank,
        }
    }

    /// The Rolli quasimorphism `f_alpha` on `F_2`.
    pub fn rolli(alpha: OddSequence) -> Self {
        let label = alloc::format!("rolli{:?}", alpha.support);
        Self::from_fn(label, 2, None, move |w| {
            w.syllables().iter().map(|s| alpha.at(s.exponent)).sum()
        })
    }

    /// The homomorphism sending `s_i` to `weights[i - 1]`.
    pub fn homomorphism(weights: Vec<f64>) -> Self {
        let rank = weights.len() as u32;
        let label = alloc::format!("hom{:?}", weights);
        Self::from_fn(label, rank, Some(0.0), move |w| {
            w.syllables()
                .iter()
                .map(|s| weights[s.generator as usize - 1] * s.exponent as f64)
                .sum()
        })
    }

    /// The constant function `c`, whose coboundary is constant `c`.
    pub fn constant(rank: u32, c: f64) -> Self {
        Self::from_fn(alloc::format!("const({c})"), rank, Some(c.abs()), move |_| c)
    }

    /// Evaluates at `w`.
    pub fn eval(&self, w: &Word) -> f64 {
        (self.evaluator)(w)
    }

    /// Known upper bound on the defect, if any.
    pub fn defect_bound(&self) -> Option<f64> {
        self.defect_bound
    }

    /// Human-readable name.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Rank of the free group it is defined on.
    pub fn rank(&self) -> u32 {
        self.rank
    }
}

/// `f(g1) + f(g2) - f(g1 g2)`.
pub fn bar_coboundary(f: &Quasimorphism, g1: &Word, g2: &Word) -> f64 {
    f.eval(g1) + f.eval(g2) - f.eval(&g1.mul(g2))
}

/// Largest coboundary found over a ball, with a pair attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectBound {
    /// `max |bar_coboundary|` over the ball.
    pub value: f64,
    /// A pair attaining the maximum (absent when the maximum is 0).
    pub witness: Option<(Word, Word)>,
    /// Radius of the ball.
    pub radius: usize,
}

/// Largest radius accepted by [`defect_lower_bound`].
pub const MAX_DEFECT_RADIUS: usize = 8;

/// Default budget on enumerated pairs.
pub const DEFAULT_PAIR_BUDGET: u128 = 10_000_000;

/// Lower bound for the defect from all pairs of words of length `<= radius`.
pub fn defect_lower_bound(f: &Quasimorphism, radius: usize) -> Result<DefectBound, QuasiError> {
    defect_lower_bound_with_budget(f, radius, DEFAULT_PAIR_BUDGET)
}

/// [`defect_lower_bound`] with an explicit pair budget.
pub fn defect_lower_bound_with_budget(
    f: &Quasimorphism,
    radius: usize,
    budget: u128,
) -> Result<DefectBound, QuasiError> {
    if radius == 0 || radius > MAX_DEFECT_RADIUS {
        return Err(QuasiError::InvalidArgument("radius must lie in 1..=8"));
    }
    let n = ball_size(f.rank, radius);
    let pairs = n.saturating_mul(n);
    if pairs > budget {
        return Err(QuasiError::BallTooLarge {
            radius,
            pairs,
            budget,
        });
    }
    let words = ball_with_budget(f.rank, radius, budget)?;
    let values: Vec<f64> = words.iter().map(|w| f.eval(w)).collect();
    let mut best = DefectBound {
        value: 0.0,
        witness: None,
        radius,
    };
    for (g1, v1) in words.iter().zip(&values) {
        for (g2, v2) in words.iter().zip(&values) {
            let d = (v1 + v2 - f.eval(&g1.mul(g2))).abs();
            if d > best.value {
                best.value = d;
                best.witness = Some((g1.clone(), g2.clone()));
            }
        }
    }
    Ok(best)
}

/// Approximation of the homogenization `lim f(g^n) / n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homogenized {
    /// `f(g^n) / n`.
    pub value: f64,
    /// `D / n`, a bound on the distance to the limit when `D` bounds the defect.
    pub err: f64,
    /// The power used.
    pub n: u64,
}

/// Largest power tried by [`homogenize`].
pub const MAX_HOMOGENIZE_POWER: u64 = 1 << 24;

/// Evaluates `f(g^n) / n` for the first power of two `n` with `D / n <= tol`.
///
/// The error bound is only as good as `defect`: it is a certificate when
/// `defect >= D(f)`.
pub fn homogenize(
    f: &Quasimorphism,
    g: &Word,
    defect: f64,
    tol: f64,
) -> Result<Homogenized, QuasiError> {
    if !(tol > 0.0) {
        return Err(QuasiError::InvalidArgument("tolerance must be positive"));
    }
    if !(defect >= 0.0) {
        return Err(QuasiError::InvalidArgument("defect must be nonnegative"));
    }
    let mut n: u64 = 1;
    while defect / n as f64 > tol {
        if n >= MAX_HOMOGENIZE_POWER {
            return Err(QuasiError::IterationLimit {
                cap: MAX_HOMOGENIZE_POWER,
            });
        }
        n *= 2;
    }
    let power = g.pow(n as i64);
    Ok(Homogenized {
        value: f.eval(&power) / n as f64,
        err: defect / n as f64,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::reduce_word;

    fn w(letters: &[i32]) -> Word {
        reduce_word(2, letters).unwrap()
    }

    #[test]
    fn rolli_examples() {
        let sign = OddSequence::truncated_sign(8);
        assert_eq!(rolli_eval(&sign, &w(&[1, 1, 1, -2, -2])).unwrap(), 0.0);
        let unit = OddSequence::unit_sign();
        for k in 0..6 {
            assert_eq!(rolli_eval(&unit, &w(&[1, 2]).pow(k)).unwrap(), 2.0 * k as f64);
        }
        assert_eq!(rolli_eval(&unit, &Word::empty(2)).unwrap(), 0.0);
        let r3 = reduce_word(3, &[1]).unwrap();
        assert!(matches!(
            rolli_eval(&unit, &r3),
            Err(QuasiError::RankMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn coboundary_examples() {
        let hom = Quasimorphism::homomorphism(alloc::vec![1.0, 0.0]);
        assert_eq!(bar_coboundary(&hom, &w(&[1, 2, 1]), &w(&[-1, -1, 2])), 0.0);
        let c = Quasimorphism::constant(2, 1.5);
        assert_eq!(bar_coboundary(&c, &w(&[1]), &w(&[2])), 1.5);
        let f = Quasimorphism::rolli(OddSequence::unit_sign());
        assert_eq!(bar_coboundary(&f, &w(&[1, 2]), &w(&[-2, 1])), 2.0);
    }

    #[test]
    fn defect_bounds() {
        let hom = Quasimorphism::homomorphism(alloc::vec![2.0, -1.0]);
        assert_eq!(defect_lower_bound(&hom, 3).unwrap().value, 0.0);
        let f = Quasimorphism::rolli(OddSequence::unit_sign());
        let d1 = defect_lower_bound(&f, 1).unwrap().value;
        let d2 = defect_lower_bound(&f, 2).unwrap();
        assert!(d2.value >= 2.0 && d2.value >= d1);
        let (a, b) = d2.witness.unwrap();
        assert_eq!(bar_coboundary(&f, &a, &b).abs(), d2.value);
        assert!(matches!(
            defect_lower_bound(&f, 8),
            Err(QuasiError::BallTooLarge { .. })
        ));
        assert!(defect_lower_bound(&f, 0).is_err());
    }

    #[test]
    fn homogenization() {
        let hom = Quasimorphism::homomorphism(alloc::vec![1.0, 3.0]);
        let g = w(&[1, 2, 2]);
        let h = homogenize(&hom, &g, 0.0, 1e-6).unwrap();
        assert_eq!((h.value, h.n), (7.0, 1));
        let f = Quasimorphism::rolli(OddSequence::truncated_sign(4));
        let h = homogenize(&f, &w(&[1]), 2.0, 1e-3).unwrap();
        assert!(h.value.abs() <= h.err && h.err <= 1e-3);
        assert!(homogenize(&f, &g, 1.0, 1e-9).is_err());
    }
}

//! Bounded Euler cocycles.
//!
//! * [`integral_euler_cocycle`]: the `{0, 1}`-valued cocycle
//!   `c(f, g) = f~(g~(x0)) - (fg)~(x0)` built from standard lifts at `x0`.
//! * [`tau`]: the homogeneous real cocycle `rott(fg) - rott(f) - rott(g)`.
//! * [`floor_cocycle`]: `floor(a(n+m)) - floor(an) - floor(am)` on the integers.
//! * [`cocycle_residual`]: the bar differential of a 2-cochain on sample triples.

use crate::lifts::{standard_lift, translation_number, CircleMap, Estimate, Lift, LiftError};

/// Largest distance from an integer accepted when reading off `c`.
pub const INTEGER_TOLERANCE: f64 = 1e-6;

/// Errors raised by cocycle evaluation.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CocycleError {
    /// A quantity that must be an integer was not, numerically.
    #[error("value {value} is not within 1e-6 of an integer")]
    NotAnInteger {
        /// The offending value.
        value: f64,
    },
    /// Translation numbers could not be certified.
    #[error(transparent)]
    Lift(#[from] LiftError),
}

fn to_integer(v: f64) -> Result<i64, CocycleError> {
    let r = libm::round(v);
    if !v.is_finite() || (v - r).abs() > INTEGER_TOLERANCE {
        return Err(CocycleError::NotAnInteger { value: v });
    }
    Ok(r as i64)
}

/// `f~(g~(x0)) - (fg)~(x0)` for the standard lifts at `x0`.
pub fn integral_euler_cocycle(f: &CircleMap, g: &CircleMap, x0: f64) -> Result<i64, CocycleError> {
    let fl = f.lift_at(x0);
    let gl = g.lift_at(x0);
    let fg = standard_lift(&f.lift().compose(g.lift()), x0);
    to_integer(fl.eval(gl.eval(x0)) - fg.eval(x0))
}

/// The integer `f~_{x1} - f~_{x0}`, whose coboundary is `c_{x1} - c_{x0}`.
pub fn basepoint_cochain(f: &CircleMap, x0: f64, x1: f64) -> Result<i64, CocycleError> {
    to_integer(f.lift_at(x1).eval(0.0) - f.lift_at(x0).eval(0.0))
}

/// `rott(f g) - rott(f) - rott(g)` from three enclosures of width `<= tol`.
pub fn tau(f: &Lift, g: &Lift, tol: f64) -> Result<Estimate, LiftError> {
    let efg = Estimate::from(translation_number(&f.compose(g), tol)?);
    let ef = Estimate::from(translation_number(f, tol)?);
    let eg = Estimate::from(translation_number(g, tol)?);
    Ok(efg - ef - eg)
}

/// The slope of a floor cocycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    /// `p / q`, evaluated exactly.
    Rational {
        /// Numerator.
        p: i64,
        /// Positive denominator.
        q: u64,
    },
    /// A float; floors are taken in floating point, which can misjudge
    /// products lying within rounding distance of an integer.
    Real(f64),
}

impl Alpha {
    fn floor_times(&self, n: i64) -> i64 {
        match *self {
            Alpha::Rational { p, q } => (p as i128 * n as i128).div_euclid(q as i128) as i64,
            Alpha::Real(a) => libm::floor(a * n as f64) as i64,
        }
    }
}

/// `floor(a (n + m)) - floor(a n) - floor(a m)`.
///
/// # Panics
///
/// If a rational slope has `q = 0`.
pub fn floor_cocycle(alpha: Alpha, n: i64, m: i64) -> i64 {
    if let Alpha::Rational { q, .. } = alpha {
        assert!(q > 0, "denominator must be positive");
    }
    alpha.floor_times(n + m) - alpha.floor_times(n) - alpha.floor_times(m)
}

/// `max |c(g2, g3) - c(g1 g2, g3) + c(g1, g2 g3) - c(g1, g2)|` over the triples.
pub fn cocycle_residual<G, C, M>(c: C, mul: M, triples: &[(G, G, G)]) -> f64
where
    C: Fn(&G, &G) -> f64,
    M: Fn(&G, &G) -> G,
{
    triples
        .iter()
        .map(|(g1, g2, g3)| {
            let r = c(g2, g3) - c(&mul(g1, g2), g3) + c(g1, &mul(g2, g3)) - c(g1, g2);
            r.abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn integral_examples() {
        let f = CircleMap::rotation(0.6);
        assert_eq!(integral_euler_cocycle(&CircleMap::identity(), &f, 0.0).unwrap(), 0);
        assert_eq!(integral_euler_cocycle(&f, &f, 0.0).unwrap(), 1);
        let g = CircleMap::rotation(0.3);
        assert_eq!(integral_euler_cocycle(&g, &g, 0.0).unwrap(), 0);
    }

    #[test]
    fn tau_on_rotations_vanishes() {
        let t = tau(&Lift::rotation(0.3), &Lift::rotation(0.45), 1e-9).unwrap();
        assert!(t.agrees_with(0.0, 1e-12));
    }

    #[test]
    fn floor_examples() {
        let half = Alpha::Rational { p: 1, q: 2 };
        assert_eq!(floor_cocycle(half, 1, 1), 1);
        assert_eq!(floor_cocycle(Alpha::Rational { p: 3, q: 1 }, 5, -7), 0);
        assert_eq!(floor_cocycle(Alpha::Real(0.5), 1, 1), 1);
        assert_eq!(floor_cocycle(half, 7, 0), 0);
    }

    #[test]
    fn floor_cocycle_identity_on_window() {
        let a = Alpha::Rational { p: 2, q: 7 };
        let mut triples = Vec::new();
        for n in -20..=20i64 {
            for m in -20..=20 {
                for k in -20..=20 {
                    triples.push((n, m, k));
                }
            }
        }
        let r = cocycle_residual(|x, y| floor_cocycle(a, *x, *y) as f64, |x, y| x + y, &triples);
        assert_eq!(r, 0.0);
    }
}

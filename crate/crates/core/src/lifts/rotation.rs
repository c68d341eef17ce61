//! Certified translation numbers.
//!
//! For a lift `f` and any `n`, `rott(f) = rott(f^n) / n`, and `rott(f^n)` lies
//! between the minimum and the maximum of the displacement `f^n(x) - x`.
//! The iterates of a uniform grid give two certificates at every step:
//!
//! * monotonicity of `f^n` brackets the displacement on each grid cell, so
//!   `min_j f^n(x_j) - x_{j+1} <= n rott(f) <= max_j f^n(x_{j+1}) - x_j`;
//! * if sampled displacements lie on both sides of an integer `p`, then
//!   `f^n(x) >= x + p` and `f^n(y) <= y + p` somewhere, hence
//!   `rott(f) = p / n` exactly.
//!
//! The running intersection of these intervals is returned once it is narrow
//! enough. All bounds are widened by an allowance for floating-point rounding
//! proportional to the number of primitive evaluations.

use core::f64::consts::PI;

use super::mobius::det;
use super::{Lift, LiftError, Matrix2};
use crate::lifts::CircleMap;
use alloc::vec::Vec;

/// Closed interval known to contain a translation number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    /// Lower end.
    pub lo: f64,
    /// Upper end.
    pub hi: f64,
    /// Iterates of the lift that were computed.
    pub iterations: u64,
}

impl Enclosure {
    /// Midpoint.
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `hi - lo`.
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Whether `x` lies in the interval.
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl From<Enclosure> for Estimate {
    fn from(e: Enclosure) -> Self {
        Estimate {
            value: e.mid(),
            err: e.width(),
        }
    }
}

/// A real value with an error bar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    /// Central value.
    pub value: f64,
    /// Bound on the distance to the true value.
    pub err: f64,
}

impl Estimate {
    /// An exact value.
    pub fn exact(value: f64) -> Self {
        Self { value, err: 0.0 }
    }

    /// Whether `|value - x| <= err + slack`.
    pub fn agrees_with(&self, x: f64, slack: f64) -> bool {
        (self.value - x).abs() <= self.err + slack
    }
}

// bound on the rounding error of a float sum with this result
fn rounding(result: f64) -> f64 {
    0.5 * f64::EPSILON * result.abs()
}

impl core::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            err: self.err + o.err + rounding(self.value + o.value),
        }
    }
}

impl core::ops::Sub for Estimate {
    type Output = Estimate;
    fn sub(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value - o.value,
            err: self.err + o.err + rounding(self.value - o.value),
        }
    }
}

impl core::ops::Neg for Estimate {
    type Output = Estimate;
    fn neg(self) -> Estimate {
        Estimate {
            value: -self.value,
            err: self.err,
        }
    }
}

/// Knobs for [`translation_number_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationConfig {
    /// Give up after this many iterates.
    pub max_iterations: u64,
    /// Number of grid cells on `[0, 1]`.
    pub grid: usize,
}

impl Default for TranslationConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1 << 24,
            grid: 32,
        }
    }
}

// rounding allowance per primitive evaluation, relative to the magnitude
const ROUNDING_FACTOR: f64 = 16.0 * f64::EPSILON;

/// Enclosure of `rott(lift)` of width at most `tol`, with default settings.
pub fn translation_number(lift: &Lift, tol: f64) -> Result<Enclosure, LiftError> {
    translation_number_with(lift, tol, TranslationConfig::default())
}

/// Enclosure of `rott(lift)` of width at most `tol`.
pub fn translation_number_with(
    lift: &Lift,
    tol: f64,
    config: TranslationConfig,
) -> Result<Enclosure, LiftError> {
    if !(tol > 0.0) {
        return Err(LiftError::InvalidArgument("tolerance must be positive"));
    }
    if config.grid < 1 {
        return Err(LiftError::InvalidArgument("grid must have at least one cell"));
    }
    if let Some(shift) = lift.as_translation() {
        // symbolic translation: rott is the shift itself
        let pad = lift.cost().saturating_sub(1) as f64 * ROUNDING_FACTOR * (1.0 + shift.abs());
        return Ok(Enclosure {
            lo: shift - pad,
            hi: shift + pad,
            iterations: 0,
        });
    }

    let analytic = lift.projective_matrix().and_then(|m| projective_fraction(&m, lift.cost()));

    let cells = config.grid;
    let xs: Vec<f64> = (0..=cells).map(|j| j as f64 / cells as f64).collect();
    let mut ys = xs.clone();
    let per_step = lift.cost().max(1) as f64 * ROUNDING_FACTOR;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;

    for n in 1..=config.max_iterations {
        let mut magnitude: f64 = 1.0;
        for y in ys.iter_mut() {
            *y = lift.eval(*y);
            magnitude = magnitude.max(y.abs());
        }
        let nf = n as f64;
        let pad = nf * per_step * magnitude;

        let (mut dmin, mut dmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in xs.iter().zip(&ys) {
            let d = y - x;
            dmin = dmin.min(d);
            dmax = dmax.max(d);
        }
        let p = libm::ceil(dmin + pad);
        if p <= dmax - pad {
            let r = p / nf;
            // p / n itself may not be representable
            let ulp = if n == 1 { 0.0 } else { f64::EPSILON * r.abs() };
            return Ok(Enclosure {
                lo: r - ulp,
                hi: r + ulp,
                iterations: n,
            });
        }

        let (mut blo, mut bhi) = (f64::INFINITY, f64::NEG_INFINITY);
        for j in 0..cells {
            blo = blo.min(ys[j] - xs[j + 1]);
            bhi = bhi.max(ys[j + 1] - xs[j]);
        }
        lo = lo.max((blo - pad) / nf);
        hi = hi.min((bhi + pad) / nf);
        if let Some((frac, delta)) = analytic {
            // rott is frac mod 1; the bracket picks the integer part
            let first = libm::ceil(lo - frac - delta);
            let last = libm::floor(hi - frac + delta);
            if first == last && 2.0 * delta <= tol {
                let r = first + frac;
                return Ok(Enclosure {
                    lo: r - delta,
                    hi: r + delta,
                    iterations: n,
                });
            }
        }
        if hi - lo <= tol {
            return Ok(Enclosure {
                lo,
                hi,
                iterations: n,
            });
        }
    }
    Err(LiftError::IterationLimit {
        iterations: config.max_iterations,
        width: hi - lo,
    })
}

/// Fractional part of the rotation number of a projective map, with an
/// error allowance. Maps with `|trace| >= 2` have a fixed point on `RP^1`, so
/// their lifts have integer translation numbers; an elliptic map is
/// conjugate to a rotation whose angle is read off the trace, the direction
/// of rotation being the sign of the lower-left entry.
fn projective_fraction(m: &Matrix2, cost: u64) -> Option<(f64, f64)> {
    let d = det(m);
    if !d.is_finite() || (d - 1.0).abs() > 1e-6 {
        return None;
    }
    let s = libm::sqrt(d);
    let tr = (m[0][0] + m[1][1]) / s;
    if tr.abs() >= 2.0 {
        return Some((0.0, 0.0));
    }
    let c = m[1][0];
    if c == 0.0 {
        return None;
    }
    let phi = libm::acos(0.5 * tr);
    let frac = if c > 0.0 { phi / PI } else { 1.0 - phi / PI };
    let size = m.iter().flatten().fold(1.0_f64, |a, v| a.max(v.abs()));
    let dtr = cost as f64 * ROUNDING_FACTOR * size * size;
    let delta = dtr / (2.0 * libm::sin(phi) * PI) + 4.0 * f64::EPSILON;
    Some((frac, delta))
}

/// Rotation number of a circle map, in `[0, 1)`.
pub fn rotation_number(c: &CircleMap, tol: f64) -> Result<f64, LiftError> {
    let e = translation_number(c.lift(), tol)?;
    let r = e.mid() - libm::floor(e.mid());
    Ok(if r >= 1.0 { 0.0 } else { r })
}

/// `(min, max)` of `f(x) - x` over `grid_size` equally spaced points of `[0, 1)`.
pub fn displacement_range(lift: &Lift, grid_size: usize) -> Result<(f64, f64), LiftError> {
    if grid_size < 2 {
        return Err(LiftError::InvalidArgument("grid_size must be at least 2"));
    }
    if let Some(c) = lift.as_translation() {
        return Ok((c, c));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..grid_size {
        let x = j as f64 / grid_size as f64;
        let d = lift.eval(x) - x;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifts::rotation_matrix;
    use alloc::vec;

    #[test]
    fn rotation_enclosure_contains_angle() {
        let e = translation_number(&Lift::rotation(0.3), 1e-9).unwrap();
        assert!(e.contains(0.3));
        assert!(e.width() <= 1e-9);
    }

    #[test]
    fn pl_map_with_fixed_point_has_zero_rotation() {
        let f = Lift::pl(vec![(0.0, 0.0), (0.4, 0.2), (0.7, 0.9)], 0).unwrap();
        let e = translation_number(&f, 1e-9).unwrap();
        assert!(e.contains(0.0));
        assert_eq!(rotation_number(&CircleMap::new(&f), 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn elliptic_quarter_turn() {
        let f = Lift::mobius(rotation_matrix(PI / 4.0), 0).unwrap();
        let e = translation_number(&f, 1e-10).unwrap();
        // projective angle: a rotation by theta moves lines by theta / pi
        let projective = (PI / 4.0) / PI;
        assert!(e.contains(projective) || (e.mid() - projective).abs() <= 1e-10);
        assert!(e.width() <= 1e-10);
    }

    #[test]
    fn conjugated_elliptic_and_parabolic() {
        let p: Matrix2 = [[2.0, 1.0], [3.0, 2.0]];
        let m = crate::lifts::mat_mul(
            &crate::lifts::mat_mul(&p, &rotation_matrix(0.4)),
            &crate::lifts::mat_inv(&p),
        );
        let e = translation_number(&Lift::mobius(m, 1).unwrap(), 1e-10).unwrap();
        assert!((e.mid() - (1.0 + 0.4 / PI)).abs() <= 1e-10, "{e:?}");
        let par = Lift::mobius([[-1.0, 1.0], [0.0, -1.0]], 0).unwrap();
        let e = translation_number(&par, 1e-12).unwrap();
        assert_eq!(e.width(), 0.0);
        assert_eq!(e.mid(), libm::round(e.mid()));
    }

    #[test]
    fn rotation_number_examples() {
        let r = rotation_number(&CircleMap::rotation(0.7), 1e-9).unwrap();
        assert!((r - 0.7).abs() < 1e-12);
        let f3 = CircleMap::rotation(0.3).power(3);
        assert!((rotation_number(&f3, 1e-9).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn displacement_examples() {
        assert_eq!(displacement_range(&Lift::rotation(0.3), 16).unwrap(), (0.3, 0.3));
        let f = Lift::mobius([[3.0, 2.0], [1.0, 1.0]], 0).unwrap();
        let (lo, hi) = displacement_range(&f, 256).unwrap();
        assert!(hi - lo < 1.0);
        let g = Lift::pl(vec![(0.0, 0.0), (0.5, 0.7)], 0).unwrap();
        let (lo, hi) = displacement_range(&g, 8).unwrap();
        assert!(lo <= 0.0 && 0.0 <= hi);
        assert!(displacement_range(&g, 1).is_err());
    }

    #[test]
    fn iteration_limit_is_reported() {
        let f = Lift::mobius(rotation_matrix(1.0), 0).unwrap();
        // tiny grid, tiny cap, a conjugate of an irrational rotation
        let g = Lift::pl(vec![(0.0, 0.0), (0.5, 0.2)], 0).unwrap();
        let h = g.inverse().compose(&f).compose(&g);
        let cfg = TranslationConfig {
            max_iterations: 8,
            grid: 4,
        };
        assert!(matches!(
            translation_number_with(&h, 1e-12, cfg),
            Err(LiftError::IterationLimit { iterations: 8, .. })
        ));
        assert!(translation_number(&h, 0.0).is_err());
    }
}

use alloc::vec::Vec;

use super::LiftError;

/// A piecewise-linear lift, given by one period of its graph.
///
/// The graph passes through the breakpoints `(x_i, y_i)` and is extended by
/// `f(x + 1) = f(x) + 1`; the segment after the last breakpoint joins it to
/// `(x_0 + 1, y_0 + 1)`. The map is then post-composed with the integer
/// translation `shift`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlMap {
    breakpoints: Vec<(f64, f64)>,
    shift: i64,
}

impl PlMap {
    /// Validates the breakpoints: both coordinates strictly increasing within
    /// one period, which makes the map a homeomorphism.
    pub fn new(breakpoints: Vec<(f64, f64)>, shift: i64) -> Result<Self, LiftError> {
        if breakpoints.is_empty() {
            return Err(LiftError::NonMonotonePl { index: 0 });
        }
        for (i, &(x, y)) in breakpoints.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(LiftError::NonMonotonePl { index: i });
            }
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(LiftError::NonMonotonePl { index: i + 1 });
            }
        }
        let (x0, y0) = breakpoints[0];
        let (xl, yl) = breakpoints[breakpoints.len() - 1];
        if xl >= x0 + 1.0 || yl >= y0 + 1.0 {
            return Err(LiftError::NonMonotonePl {
                index: breakpoints.len() - 1,
            });
        }
        Ok(Self { breakpoints, shift })
    }

    /// Breakpoints of one period.
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Integer post-translation.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        let (x0, y0) = bp[0];
        let mut k = libm::floor(x - x0);
        let mut r = x - k;
        if r >= x0 + 1.0 {
            r -= 1.0;
            k += 1.0;
        } else if r < x0 {
            r += 1.0;
            k -= 1.0;
        }
        // first breakpoint strictly to the right of r
        let i = bp.partition_point(|&(bx, _)| bx <= r);
        let (xa, ya) = bp[i - 1];
        let (xb, yb) = if i < bp.len() { bp[i] } else { (x0 + 1.0, y0 + 1.0) };
        let y = ya + (r - xa) * (yb - ya) / (xb - xa);
        y + k + self.shift as f64
    }

    /// Inverse obtained by swapping the coordinates of every breakpoint.
    pub(crate) fn inverse(&self) -> Self {
        let breakpoints = self.breakpoints.iter().map(|&(x, y)| (y, x)).collect();
        Self {
            breakpoints,
            shift: -self.shift,
        }
    }

    /// `Some(c)` when the graph is the line `y = x + c`.
    pub(crate) fn as_translation(&self) -> Option<f64> {
        let c = self.breakpoints[0].1 - self.breakpoints[0].0;
        self.breakpoints
            .iter()
            .all(|&(x, y)| y - x == c)
            .then_some(c + self.shift as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn linear_interpolation_between_breakpoints() {
        let f = PlMap::new(vec![(0.0, 0.0), (0.5, 0.25)], 0).unwrap();
        assert_eq!(f.eval(0.25), 0.125);
        assert_eq!(f.eval(0.5), 0.25);
        // wrap segment from (0.5, 0.25) to (1, 1)
        assert!((f.eval(0.75) - 0.625).abs() < 1e-15);
        assert!((f.eval(2.25) - 2.125).abs() < 1e-15);
        assert!((f.eval(-0.75) - (-0.875)).abs() < 1e-15);
    }

    #[test]
    fn rejects_flat_and_decreasing_segments() {
        assert!(PlMap::new(vec![(0.0, 0.0), (0.5, 0.0)], 0).is_err());
        assert!(PlMap::new(vec![(0.0, 0.5), (0.5, 0.2)], 0).is_err());
        assert!(PlMap::new(vec![(0.0, 0.0), (0.5, 1.0)], 0).is_err());
        assert!(PlMap::new(vec![], 0).is_err());
    }

    #[test]
    fn swapped_coordinates_invert() {
        let f = PlMap::new(vec![(0.1, 0.3), (0.4, 0.35), (0.8, 0.9)], 2).unwrap();
        let g = f.inverse();
        for i in -20..20 {
            let x = i as f64 * 0.137;
            assert!((g.eval(f.eval(x)) - x).abs() < 1e-12);
            assert!((f.eval(g.eval(x)) - x).abs() < 1e-12);
        }
    }
}

use core::f64::consts::PI;

use super::LiftError;

/// A 2x2 real matrix, row major.
pub type Matrix2 = [[f64; 2]; 2];

/// Largest tolerated `|det - 1|` for a matrix to count as an element of `SL(2, R)`.
pub const DET_TOLERANCE: f64 = 1e-9;

/// Default width of the band around `|trace| = 2` classified as parabolic.
pub const DEFAULT_TRACE_EPS: f64 = 1e-9;

pub(crate) fn det(m: &Matrix2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Matrix product `a * b`.
pub fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Inverse of a determinant-one matrix.
pub fn mat_inv(m: &Matrix2) -> Matrix2 {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

/// Rescales a matrix with positive determinant to determinant one.
pub fn normalize(m: &Matrix2) -> Result<Matrix2, LiftError> {
    let d = det(m);
    if !(d > 0.0) || !d.is_finite() {
        return Err(LiftError::SingularMatrix { det: d });
    }
    let s = libm::sqrt(d);
    Ok([[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]])
}

fn check_det(m: &Matrix2) -> Result<(), LiftError> {
    let d = det(m);
    if m.iter().flatten().any(|v| !v.is_finite()) || (d - 1.0).abs() > DET_TOLERANCE {
        return Err(LiftError::SingularMatrix { det: d });
    }
    Ok(())
}

fn wrap_pi(a: f64) -> f64 {
    let mut a = a;
    while a > PI {
        a -= 2.0 * PI;
    }
    while a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Boundary action of a projective matrix on `RP^1`, lifted to `R`.
///
/// The point `x` of the line stands for the line through the origin at angle
/// `pi * x`. The displacement of the line under the matrix is tracked
/// continuously, anchored at its value at `x = 0`, and `branch` adds a fixed
/// integer.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusMap {
    matrix: Matrix2,
    branch: i64,
    anchor: f64,
}

impl MobiusMap {
    /// Fails with `SingularMatrix` unless `|det - 1| <= 1e-9`.
    pub fn new(matrix: Matrix2, branch: i64) -> Result<Self, LiftError> {
        check_det(&matrix)?;
        let anchor = angle_shift(&matrix, 0.0);
        Ok(Self {
            matrix,
            branch,
            anchor,
        })
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &Matrix2 {
        &self.matrix
    }

    /// The integer fixing the lift.
    pub fn branch(&self) -> i64 {
        self.branch
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let k = libm::floor(x);
        let theta = PI * (x - k);
        let shift = self.anchor + wrap_pi(angle_shift(&self.matrix, theta) - self.anchor);
        x + shift / PI + self.branch as f64
    }

    /// `Some(c)` for a rotation matrix, which moves every line by the same angle.
    pub(crate) fn as_translation(&self) -> Option<f64> {
        let m = &self.matrix;
        (m[0][0] == m[1][1] && m[0][1] == -m[1][0])
            .then(|| self.anchor / PI + self.branch as f64)
    }

    /// Inverse matrix with the branch chosen so that `f(f^{-1}(0)) = 0`.
    pub(crate) fn inverse(&self) -> Self {
        let inv = mat_inv(&self.matrix);
        let mut g = Self {
            anchor: angle_shift(&inv, 0.0),
            matrix: inv,
            branch: 0,
        };
        let k = libm::round(self.eval(g.eval(0.0)));
        g.branch = -(k as i64);
        g
    }
}

/// Signed angle from the unit vector at angle `theta` to its image.
fn angle_shift(m: &Matrix2, theta: f64) -> f64 {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let (vx, vy) = (m[0][0] * c + m[0][1] * s, m[1][0] * c + m[1][1] * s);
    libm::atan2(c * vy - s * vx, c * vx + s * vy)
}

/// Trace trichotomy of an orientation-preserving isometry of the hyperbolic plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobiusKind {
    /// `|trace| < 2`.
    Elliptic,
    /// `|trace| = 2` and not `+-I`.
    Parabolic,
    /// `|trace| > 2`.
    Hyperbolic,
    /// `+-I`.
    Identity,
}

/// Classification together with the trace it was read from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusClass {
    /// Conjugacy type.
    pub kind: MobiusKind,
    /// Trace of the (determinant-one) matrix.
    pub trace: f64,
}

/// Classifies a determinant-one matrix by its trace, with a band of width
/// `eps_tr` around `|trace| = 2` reported as parabolic (or identity).
pub fn mobius_classify(m: &Matrix2, eps_tr: f64) -> Result<MobiusClass, LiftError> {
    check_det(m)?;
    let trace = m[0][0] + m[1][1];
    let is_scalar = m[0][1].abs() <= eps_tr
        && m[1][0].abs() <= eps_tr
        && (m[0][0] - m[1][1]).abs() <= eps_tr
        && (m[0][0].abs() - 1.0).abs() <= eps_tr;
    let kind = if is_scalar {
        MobiusKind::Identity
    } else if trace.abs() < 2.0 - eps_tr {
        MobiusKind::Elliptic
    } else if trace.abs() > 2.0 + eps_tr {
        MobiusKind::Hyperbolic
    } else {
        MobiusKind::Parabolic
    };
    Ok(MobiusClass { kind, trace })
}

/// Rotation matrix by angle `theta`.
pub fn rotation_matrix(theta: f64) -> Matrix2 {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    [[c, -s], [s, c]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matrix_acts_trivially() {
        let f = MobiusMap::new([[1.0, 0.0], [0.0, 1.0]], 0).unwrap();
        for i in -10..10 {
            let x = i as f64 * 0.173;
            assert!((f.eval(x) - x).abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_matrix_translates_by_angle_over_pi() {
        let f = MobiusMap::new(rotation_matrix(0.7), 0).unwrap();
        for i in 0..20 {
            let x = i as f64 * 0.05;
            assert!((f.eval(x) - x - 0.7 / PI).abs() < 1e-13);
        }
    }

    #[test]
    fn equivariant_and_increasing() {
        let f = MobiusMap::new([[3.0, 1.0], [-4.0, -1.0]], 0).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..400 {
            let x = -1.0 + i as f64 * 0.005;
            let y = f.eval(x);
            assert!(y > prev);
            assert!((f.eval(x + 1.0) - y - 1.0).abs() < 1e-12);
            prev = y;
        }
    }

    #[test]
    fn inverse_branch_fixes_zero() {
        let f = MobiusMap::new([[2.0, 3.0], [1.0, 2.0]], 1).unwrap();
        let g = f.inverse();
        for i in -10..10 {
            let x = i as f64 * 0.31;
            assert!((f.eval(g.eval(x)) - x).abs() < 1e-12);
            assert!((g.eval(f.eval(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn classify_examples() {
        let h = mobius_classify(&[[2.0, 0.0], [0.0, 0.5]], DEFAULT_TRACE_EPS).unwrap();
        assert_eq!(h.kind, MobiusKind::Hyperbolic);
        assert_eq!(h.trace, 2.5);
        let e = mobius_classify(&rotation_matrix(PI / 3.0), DEFAULT_TRACE_EPS).unwrap();
        assert_eq!(e.kind, MobiusKind::Elliptic);
        assert!((e.trace - 1.0).abs() < 1e-15);
        let p = mobius_classify(&[[1.0, 1.0], [0.0, 1.0]], DEFAULT_TRACE_EPS).unwrap();
        assert_eq!(p.kind, MobiusKind::Parabolic);
        let m = mobius_classify(&[[-1.0, 0.0], [0.0, -1.0]], DEFAULT_TRACE_EPS).unwrap();
        assert_eq!(m.kind, MobiusKind::Identity);
        assert!(matches!(
            mobius_classify(&[[2.0, 0.0], [0.0, 2.0]], DEFAULT_TRACE_EPS),
            Err(LiftError::SingularMatrix { .. })
        ));
    }
}

//! Reference representations.
//!
//! * [`octagon_genus2`]: the holonomy of the regular hyperbolic octagon with
//!   angles `pi/4`, a discrete faithful representation of the genus-2 group.
//! * [`sanov_punctured_torus`]: the pair `[[1,2],[0,1]]`, `[[1,0],[2,1]]`.
//! * [`maximal_punctured_torus`]: a pair whose commutator is parabolic with
//!   trace `-2`, the holonomy of a complete once-punctured torus.
//! * [`glued_genus2`]: two copies of the maximal pair glued along their
//!   boundary, `a1 = A, b1 = B, a2 = B, b2 = A`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{LiftedRep, SurfacePresentation};
use crate::lifts::{mat_inv, mat_mul, rotation_matrix, Lift, Matrix2};

/// Rotation about `i` in the upper half-plane by the angle `phi`.
pub fn elliptic(phi: f64) -> Matrix2 {
    rotation_matrix(phi / 2.0)
}

/// Translation by hyperbolic distance `t` along the imaginary axis.
pub fn hyperbolic(t: f64) -> Matrix2 {
    [[libm::exp(t / 2.0), 0.0], [0.0, libm::exp(-t / 2.0)]]
}

fn product(ms: &[Matrix2]) -> Matrix2 {
    ms.iter().fold([[1.0, 0.0], [0.0, 1.0]], |acc, m| mat_mul(&acc, m))
}

fn mobius(m: Matrix2) -> Lift {
    Lift::mobius(m, 0).expect("determinant one")
}

/// Side-pairing matrices `a1, b1, a2, b2` of the regular octagon.
pub fn octagon_matrices() -> [Matrix2; 4] {
    // centre-to-side-midpoint distance: cosh d = cot(pi/8) = 1 + sqrt 2
    let d = libm::acosh(1.0 + libm::sqrt(2.0));
    let half_turn = |j: i32| {
        let th = j as f64 * PI / 4.0;
        product(&[
            elliptic(th),
            hyperbolic(d),
            elliptic(PI),
            hyperbolic(-d),
            elliptic(-th),
        ])
    };
    let step = elliptic(PI / 4.0);
    // side i onto side j: rotate the octagon, then flip it across side j
    let pairing = |i: i32, j: i32| {
        let rot = (0..(j - i).rem_euclid(8)).fold([[1.0, 0.0], [0.0, 1.0]], |acc, _| {
            mat_mul(&acc, &step)
        });
        mat_mul(&half_turn(j), &rot)
    };
    let mirror = |m: Matrix2| [[m[0][0], -m[0][1]], [-m[1][0], m[1][1]]];
    [
        mirror(mat_inv(&pairing(0, 2))),
        mirror(pairing(1, 3)),
        mirror(mat_inv(&pairing(4, 6))),
        mirror(pairing(5, 7)),
    ]
}

/// The octagon representation of the genus-2 group; Euler number `-2`.
pub fn octagon_genus2() -> LiftedRep {
    let lifts = octagon_matrices().into_iter().map(mobius).collect();
    LiftedRep::new(SurfacePresentation::new(2, 0), lifts).expect("four generators")
}

/// `A = [[1, 2], [0, 1]]`, `B = [[1, 0], [2, 1]]`.
pub const SANOV: [Matrix2; 2] = [[[1.0, 2.0], [0.0, 1.0]], [[1.0, 0.0], [2.0, 1.0]]];

/// `A = [[1, 1], [1, 2]]`, `B = [[1, -1], [-1, 2]]`; `tr [A, B] = -2`.
pub const MAXIMAL_PAIR: [Matrix2; 2] = [[[1.0, 1.0], [1.0, 2.0]], [[1.0, -1.0], [-1.0, 2.0]]];

fn punctured_torus(pair: [Matrix2; 2]) -> LiftedRep {
    let lifts = pair.into_iter().map(mobius).collect();
    LiftedRep::new(SurfacePresentation::new(1, 1), lifts).expect("two generators")
}

/// The Sanov pair as a representation of the once-punctured torus group.
pub fn sanov_punctured_torus() -> LiftedRep {
    punctured_torus(SANOV)
}

/// [`MAXIMAL_PAIR`] as a representation of the once-punctured torus group.
pub fn maximal_punctured_torus() -> LiftedRep {
    punctured_torus(MAXIMAL_PAIR)
}

/// `a1 = A, b1 = B, a2 = B, b2 = A` for [`MAXIMAL_PAIR`]; the relator holds
/// since `[A, B][B, A] = 1`.
pub fn glued_genus2() -> LiftedRep {
    let [a, b] = MAXIMAL_PAIR;
    let lifts: Vec<Lift> = vec![mobius(a), mobius(b), mobius(b), mobius(a)];
    LiftedRep::new(SurfacePresentation::new(2, 0), lifts).expect("four generators")
}

/// Every supplied generator sent to the rigid rotation by the given amount.
pub fn rotation_rep(presentation: SurfacePresentation, angles: &[f64]) -> LiftedRep {
    let lifts = angles.iter().map(|&a| Lift::rotation(a)).collect();
    LiftedRep::new(presentation, lifts).expect("rank matches")
}

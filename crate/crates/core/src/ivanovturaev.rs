//! The Euler cocycle of `GL+(n+1, R)` built from signed simplices.
//!
//! For `n + 2` vectors `v_0, ..., v_{n+1}` of `R^{n+1}`, `t(v)` is `0` unless
//! `{0, v_0, ..., v_{n+1}}` is in general position and the origin lies inside
//! the simplex spanned by the `v_i`; in that case it is the orientation sign
//! of the simplex. The cocycle `eul(g_0, ..., g_{n+1})` is the average of
//! `t(g_0 v_0, ..., g_{n+1} v_{n+1})` over independent uniform points of the
//! unit ball, estimated here by Monte Carlo.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Default threshold on normalized determinants.
pub const DEFAULT_GENERICITY_EPS: f64 = 1e-9;

/// Largest accepted residual of the barycentric solve.
pub const SOLVE_RESIDUAL: f64 = 1e-8;

/// Samples drawn per random stream.
pub const CHUNK_SIZE: u64 = 4096;

/// Errors raised by this module.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ItError {
    /// A tuple that must be generic is not.
    #[error("vectors are not in general position")]
    Degenerate,
    /// A matrix has nonpositive determinant.
    #[error("matrix {index} has determinant {det} <= 0")]
    BadDeterminant {
        /// Position of the matrix.
        index: usize,
        /// Its determinant.
        det: f64,
    },
    /// Inconsistent sizes or parameters.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Vectors of `R^{n+1}` with the threshold used for general position.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorTuple {
    /// The vectors.
    pub vectors: Vec<DVector<f64>>,
    /// Threshold on normalized determinants.
    pub genericity_eps: f64,
}

impl VectorTuple {
    /// Builds a tuple from coordinate slices; all must have the same length.
    pub fn new(vectors: &[&[f64]]) -> Result<Self, ItError> {
        let d = vectors.first().map_or(0, |v| v.len());
        if d == 0 || vectors.iter().any(|v| v.len() != d) {
            return Err(ItError::InvalidArgument("vectors must share a positive dimension"));
        }
        Ok(Self {
            vectors: vectors.iter().map(|v| DVector::from_column_slice(v)).collect(),
            genericity_eps: DEFAULT_GENERICITY_EPS,
        })
    }

    /// From nalgebra vectors.
    pub fn from_vectors(vectors: Vec<DVector<f64>>) -> Self {
        Self {
            vectors,
            genericity_eps: DEFAULT_GENERICITY_EPS,
        }
    }

    /// Ambient dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    /// `(g v_0, ..., g v_k)`.
    pub fn transform(&self, g: &DMatrix<f64>) -> Self {
        Self {
            vectors: self.vectors.iter().map(|v| g * v).collect(),
            genericity_eps: self.genericity_eps,
        }
    }

    /// The tuple `(eps_0 v_0, ..., eps_k v_k)`.
    pub fn with_signs(&self, signs: &[i8]) -> Self {
        Self {
            vectors: self
                .vectors
                .iter()
                .zip(signs)
                .map(|(v, &s)| v * s as f64)
                .collect(),
            genericity_eps: self.genericity_eps,
        }
    }

    /// The tuple with entry `i` removed.
    pub fn face(&self, i: usize) -> Self {
        let mut vectors = self.vectors.clone();
        vectors.remove(i);
        Self {
            vectors,
            genericity_eps: self.genericity_eps,
        }
    }

    fn check_shape(&self) -> Result<usize, ItError> {
        let d = self.dim();
        if d == 0 || self.vectors.len() != d + 1 || self.vectors.iter().any(|v| v.len() != d) {
            return Err(ItError::InvalidArgument("expected n + 2 vectors of R^{n+1}"));
        }
        Ok(d)
    }

    /// General position of `{0, v_0, ..., v_{n+1}}`: every `n + 2` of these
    /// points are affinely independent, tested by determinants scaled by the
    /// lengths of the spanning vectors.
    pub fn is_generic(&self) -> bool {
        let Ok(d) = self.check_shape() else {
            return false;
        };
        let vs = &self.vectors;
        // the origin with all vectors but one
        for skip in 0..=d {
            let cols: Vec<&DVector<f64>> = (0..=d).filter(|&j| j != skip).map(|j| &vs[j]).collect();
            if !independent(&cols, d, self.genericity_eps) {
                return false;
            }
        }
        // all the vectors, without the origin
        let base = &vs[0];
        let diffs: Vec<DVector<f64>> = vs[1..].iter().map(|v| v - base).collect();
        let refs: Vec<&DVector<f64>> = diffs.iter().collect();
        independent(&refs, d, self.genericity_eps)
    }

    /// Whether every signed variant `(eps_i v_i)` is generic.
    pub fn is_fully_generic(&self) -> bool {
        let k = self.vectors.len();
        k < 32
            && (0..1u32 << k).all(|mask| {
                let signs: Vec<i8> = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                self.with_signs(&signs).is_generic()
            })
    }
}

fn columns(cols: &[&DVector<f64>], d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, cols.len(), |i, j| cols[j][i])
}

fn independent(cols: &[&DVector<f64>], d: usize, eps: f64) -> bool {
    let scale: f64 = cols.iter().map(|c| c.norm()).product();
    if !(scale > 0.0) || !scale.is_finite() {
        return false;
    }
    columns(cols, d).determinant().abs() / scale > eps
}

/// `t(v)` for a generic tuple, `None` when it is not generic or the solve
/// is unreliable.
fn t_checked(v: &VectorTuple) -> Option<i8> {
    let d = v.check_shape().ok()?;
    if !v.is_generic() {
        return None;
    }
    // sum t_i v_i = 0, sum t_i = 1
    let a = DMatrix::from_fn(d + 1, d + 1, |i, j| if i < d { v.vectors[j][i] } else { 1.0 });
    let mut rhs = DVector::zeros(d + 1);
    rhs[d] = 1.0;
    let t = a.clone().lu().solve(&rhs)?;
    if (&a * &t - &rhs).amax() > SOLVE_RESIDUAL {
        return None;
    }
    if t.iter().any(|&ti| ti <= 0.0) {
        return Some(0);
    }
    let diffs: Vec<DVector<f64>> = v.vectors[1..].iter().map(|w| w - &v.vectors[0]).collect();
    let refs: Vec<&DVector<f64>> = diffs.iter().collect();
    let det = columns(&refs, d).determinant();
    Some(if det > 0.0 { 1 } else { -1 })
}

/// `t(v) in {-1, 0, 1}`; non-generic tuples give `0`.
pub fn t_value(v: &VectorTuple) -> i8 {
    t_checked(v).unwrap_or(0)
}

/// `t(v)`, failing on non-generic tuples.
pub fn t_value_generic(v: &VectorTuple) -> Result<i8, ItError> {
    t_checked(v).ok_or(ItError::Degenerate)
}

/// The two sign vectors `I` with `t(I v) != 0`, read off the linear
/// dependence `sum alpha_i v_i = 0`: `I_1 = sign(alpha)`, `I_2 = -I_1`.
pub fn smillie_sign_patterns(v: &VectorTuple) -> Result<(Vec<i8>, Vec<i8>), ItError> {
    let d = v.check_shape()?;
    if !v.is_fully_generic() {
        return Err(ItError::Degenerate);
    }
    let mut i1 = Vec::with_capacity(d + 1);
    for skip in 0..=d {
        let cols: Vec<&DVector<f64>> = (0..=d).filter(|&j| j != skip).map(|j| &v.vectors[j]).collect();
        let scale: f64 = cols.iter().map(|c| c.norm()).product();
        let cof = columns(&cols, d).determinant() * if skip % 2 == 0 { 1.0 } else { -1.0 };
        if cof.abs() / scale <= v.genericity_eps {
            return Err(ItError::Degenerate);
        }
        i1.push(if cof > 0.0 { 1 } else { -1 });
    }
    let i2 = i1.iter().map(|s| -s).collect();
    Ok((i1, i2))
}

/// All sign vectors `I` with `t(I v) != 0`, by exhaustion.
pub fn nonzero_sign_patterns(v: &VectorTuple) -> Vec<Vec<i8>> {
    let k = v.vectors.len();
    (0..1u32 << k)
        .map(|mask| (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect::<Vec<i8>>())
        .filter(|signs| t_value(&v.with_signs(signs)) != 0)
        .collect()
}

/// `sum_i (-1)^i t(w_0, ..., w_i omitted, ..., w_{n+2})` for `n + 3` vectors.
pub fn it_coboundary_check(w: &VectorTuple) -> Result<i64, ItError> {
    let d = w.dim();
    if w.vectors.len() != d + 2 {
        return Err(ItError::InvalidArgument("expected n + 3 vectors of R^{n+1}"));
    }
    let mut total = 0i64;
    for i in 0..w.vectors.len() {
        let t = t_value_generic(&w.face(i))? as i64;
        total += if i % 2 == 0 { t } else { -t };
    }
    Ok(total)
}

/// Whether `t(g v) = t(v)`; both tuples must be generic.
pub fn it_invariance_check(g: &DMatrix<f64>, v: &VectorTuple) -> Result<bool, ItError> {
    let d = v.check_shape()?;
    if g.nrows() != d || g.ncols() != d {
        return Err(ItError::InvalidArgument("matrix size does not match the vectors"));
    }
    let det = g.determinant();
    if !(det > 0.0) {
        return Err(ItError::BadDeterminant { index: 0, det });
    }
    Ok(t_value_generic(&v.transform(g))? == t_value_generic(v)?)
}

/// Monte Carlo estimate of `eul(g_0, ..., g_{n+1})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulEstimate {
    /// Sample mean.
    pub mean: f64,
    /// Hoeffding half-width at confidence `1 - delta` for values in `[-1, 1]`.
    pub half_width: f64,
    /// Samples drawn.
    pub samples: u64,
    /// Samples with a non-generic tuple (counted as 0).
    pub discarded: u64,
    /// Seed of the random streams.
    pub seed: u64,
    /// Confidence parameter.
    pub delta: f64,
}

impl EulEstimate {
    /// Whether `x` lies within the half-width of the mean.
    pub fn contains(&self, x: f64) -> bool {
        (self.mean - x).abs() <= self.half_width
    }
}

/// Hoeffding half-width for `samples` values in `[-1, 1]`:
/// `sqrt(2 ln(2 / delta) / samples)`.
pub fn hoeffding_half_width(samples: u64, delta: f64) -> f64 {
    libm::sqrt(2.0 * libm::log(2.0 / delta) / samples as f64)
}

/// Exact tally of one stream of samples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChunkTally {
    /// Twice the sum of the symmetrized sample values (an integer).
    pub twice_sum: i64,
    /// Samples drawn.
    pub samples: u64,
    /// Samples with a non-generic tuple.
    pub discarded: u64,
}

impl core::ops::Add for ChunkTally {
    type Output = ChunkTally;
    fn add(self, o: ChunkTally) -> ChunkTally {
        ChunkTally {
            twice_sum: self.twice_sum + o.twice_sum,
            samples: self.samples + o.samples,
            discarded: self.discarded + o.discarded,
        }
    }
}

/// Checks sizes and determinants of the matrices; returns the dimension.
pub fn validate_matrices(gs: &[DMatrix<f64>]) -> Result<usize, ItError> {
    let d = gs.first().map_or(0, |g| g.nrows());
    if d == 0 || gs.len() != d + 1 || gs.iter().any(|g| g.nrows() != d || g.ncols() != d) {
        return Err(ItError::InvalidArgument("expected n + 2 square matrices of size n + 1"));
    }
    for (index, g) in gs.iter().enumerate() {
        let det = g.determinant();
        if !(det > 0.0) {
            return Err(ItError::BadDeterminant { index, det });
        }
    }
    Ok(d)
}

fn uniform_ball(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
    loop {
        let dir = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = dir.norm();
        if norm > 0.0 {
            let r = libm::pow(rng.random::<f64>(), 1.0 / d as f64);
            return dir * (r / norm);
        }
    }
}

/// Draws `count` samples from stream `chunk` of `seed`. Each sample is the
/// average of `t` over the sampled tuple and the tuple with `v_0, v_1`
/// exchanged, which has the same distribution.
pub fn eul_chunk(
    gs: &[DMatrix<f64>],
    seed: u64,
    chunk: u64,
    count: u64,
    genericity_eps: f64,
) -> Result<ChunkTally, ItError> {
    let d = validate_matrices(gs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut tally = ChunkTally::default();
    for _ in 0..count {
        let vs: Vec<DVector<f64>> = (0..=d).map(|_| uniform_ball(&mut rng, d)).collect();
        let image = |order: &[usize]| VectorTuple {
            vectors: gs.iter().zip(order).map(|(g, &i)| g * &vs[i]).collect(),
            genericity_eps,
        };
        let mut order: Vec<usize> = (0..=d).collect();
        let a = t_checked(&image(&order));
        order.swap(0, 1);
        let b = t_checked(&image(&order));
        tally.samples += 1;
        match (a, b) {
            (Some(a), Some(b)) => tally.twice_sum += (a + b) as i64,
            _ => tally.discarded += 1,
        }
    }
    Ok(tally)
}

/// Number of streams used for `samples` draws, and the size of stream `i`.
pub fn chunk_layout(samples: u64) -> impl Iterator<Item = (u64, u64)> {
    let chunks = samples.div_ceil(CHUNK_SIZE);
    (0..chunks).map(move |c| (c, CHUNK_SIZE.min(samples - c * CHUNK_SIZE)))
}

/// Turns a combined tally into an estimate.
pub fn finish_estimate(tally: ChunkTally, delta: f64, seed: u64) -> EulEstimate {
    EulEstimate {
        mean: tally.twice_sum as f64 / (2.0 * tally.samples as f64),
        half_width: hoeffding_half_width(tally.samples, delta),
        samples: tally.samples,
        discarded: tally.discarded,
        seed,
        delta,
    }
}

/// Minimum number of samples accepted by [`eul_estimate`].
pub const MIN_SAMPLES: u64 = 1000;

/// Estimates `eul(g_0, ..., g_{n+1})` from `samples` draws.
pub fn eul_estimate(
    gs: &[DMatrix<f64>],
    samples: u64,
    delta: f64,
    seed: u64,
) -> Result<EulEstimate, ItError> {
    validate_matrices(gs)?;
    if samples < MIN_SAMPLES {
        return Err(ItError::InvalidArgument("at least 1000 samples are required"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ItError::InvalidArgument("delta must lie in (0, 1)"));
    }
    let mut tally = ChunkTally::default();
    for (chunk, count) in chunk_layout(samples) {
        tally = tally + eul_chunk(gs, seed, chunk, count, DEFAULT_GENERICITY_EPS)?;
    }
    Ok(finish_estimate(tally, delta, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tuple(vs: &[&[f64]]) -> VectorTuple {
        VectorTuple::new(vs).unwrap()
    }

    #[test]
    fn t_value_examples() {
        let v = tuple(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, -1.0]]);
        assert_eq!(t_value(&v), 1);
        let swapped = tuple(&[&[0.0, 1.0], &[1.0, 0.0], &[-1.0, -1.0]]);
        assert_eq!(t_value(&swapped), -1);
        let quadrant = tuple(&[&[1.0, 0.2], &[0.3, 1.0], &[0.5, 0.5]]);
        assert_eq!(t_value(&quadrant), 0);
        let repeated = tuple(&[&[1.0, 0.0], &[1.0, 0.0], &[-1.0, -1.0]]);
        assert!(!repeated.is_generic());
        assert_eq!(t_value(&repeated), 0);
    }

    #[test]
    fn smillie_example() {
        let v = tuple(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let (i1, i2) = smillie_sign_patterns(&v).unwrap();
        let mut expected = vec![vec![1, 1, -1], vec![-1, -1, 1]];
        let mut found = vec![i1.clone(), i2.clone()];
        found.sort();
        expected.sort();
        assert_eq!(found, expected);
        let mut brute = nonzero_sign_patterns(&v);
        brute.sort();
        assert_eq!(brute, expected);
        let degenerate = tuple(&[&[1.0, 0.0], &[1.0, 0.0], &[1.0, 1.0]]);
        assert_eq!(smillie_sign_patterns(&degenerate), Err(ItError::Degenerate));
    }

    #[test]
    fn invariance_example() {
        let v = tuple(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, -1.0]]);
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        assert!(it_invariance_check(&g, &v).unwrap());
        assert_eq!(t_value(&v.transform(&g)), 1);
        assert!(it_invariance_check(&DMatrix::identity(2, 2), &v).unwrap());
        let flip = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(it_invariance_check(&flip, &v), Err(ItError::BadDeterminant { .. })));
    }

    #[test]
    fn coboundary_with_cancelling_faces() {
        // the face without w_3 contains the origin; so does the face without w_2
        let w = tuple(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, -1.0], &[-1.0, -0.5]]);
        let faces: Vec<i64> = (0..4).map(|i| t_value(&w.face(i)) as i64).collect();
        assert!(faces.iter().filter(|&&t| t != 0).count() >= 2);
        assert_eq!(it_coboundary_check(&w).unwrap(), 0);
        let degenerate = tuple(&[&[1.0, 0.0], &[1.0, 0.0], &[-1.0, -1.0], &[0.0, 1.0]]);
        assert_eq!(it_coboundary_check(&degenerate), Err(ItError::Degenerate));
    }

    #[test]
    fn equal_matrices_give_exactly_zero() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.5, 1.0]);
        let e = eul_estimate(&[g.clone(), g.clone(), g], 2000, 0.01, 7).unwrap();
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.samples, 2000);
    }

    #[test]
    fn estimates_are_deterministic() {
        let gs = vec![
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]),
            DMatrix::identity(2, 2),
            DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
        ];
        let a = eul_estimate(&gs, 5000, 0.05, 11).unwrap();
        let b = eul_estimate(&gs, 5000, 0.05, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.mean.abs() <= 0.25 + a.half_width);
        assert!(eul_estimate(&gs, 10, 0.05, 11).is_err());
    }
}

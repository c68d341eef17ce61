//! Representations of surface groups into the lifted circle group.
//!
//! The group of `Sigma_{g,n}` is presented by `a_1, b_1, ..., a_g, b_g,
//! c_1, ..., c_n` with relator `[a_1, b_1] ... [a_g, b_g] c_1 ... c_n`. For
//! `n >= 1` it is free on all generators but `c_n`, and a [`LiftedRep`]
//! stores lifts of the free generators only; the lift of `c_n` is always
//! derived from the relator. Commutators are `[a, b] = a b a^-1 b^-1`.

pub mod fixtures;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::eulercocycle::tau;
use crate::lifts::{
    displacement_range, mobius_classify, translation_number, Estimate, Lift, LiftError, Matrix2,
    MobiusKind, DEFAULT_TRACE_EPS,
};
use crate::words::{ball, ball_size, Word, WordError};

/// Errors raised by representation routines.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RepError {
    /// The relator does not evaluate to an integer translation.
    #[error("relator is {residual} away from an integer translation")]
    NotARepresentation {
        /// Largest deviation found.
        residual: f64,
    },
    /// The operation needs a different kind of surface or input.
    #[error("unsupported input: {0}")]
    Unsupported(&'static str),
    /// Generator lifts are not all Möbius maps.
    #[error("generator {0} is not a Möbius map")]
    NotMobius(String),
    /// The ball is larger than the operation allows.
    #[error("ball of radius {radius} has {size} words, over the limit {limit}")]
    BallTooLarge {
        /// Requested radius.
        radius: usize,
        /// Words in the ball.
        size: u128,
        /// Largest admissible size.
        limit: u128,
    },
    /// A lift computation failed.
    #[error(transparent)]
    Lift(#[from] LiftError),
    /// A word computation failed.
    #[error(transparent)]
    Word(#[from] WordError),
}

/// The standard presentation of `pi_1(Sigma_{g,n})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfacePresentation {
    /// Genus.
    pub genus: u32,
    /// Number of punctures.
    pub punctures: u32,
}

impl SurfacePresentation {
    /// `Sigma_{g,n}`.
    pub fn new(genus: u32, punctures: u32) -> Self {
        Self { genus, punctures }
    }

    /// `2 - 2g - n`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }

    /// Names of all generators, `a1, b1, ..., c1, ...`.
    pub fn generator_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.genus)
            .flat_map(|i| [format!("a{i}"), format!("b{i}")])
            .collect();
        names.extend((1..=self.punctures).map(|j| format!("c{j}")));
        names
    }

    /// Names of the generators that are supplied by the user; the last
    /// boundary generator is omitted when there is one.
    pub fn free_generator_names(&self) -> Vec<String> {
        let mut names = self.generator_names();
        if self.punctures > 0 {
            names.pop();
        }
        names
    }

    /// Number of supplied generators.
    pub fn rank(&self) -> u32 {
        2 * self.genus + self.punctures.saturating_sub(1)
    }
}

/// Lifts of the free generators of a surface group.
#[derive(Clone, Debug)]
pub struct LiftedRep {
    presentation: SurfacePresentation,
    lifts: Vec<Lift>,
    inverses: Vec<Lift>,
}

impl LiftedRep {
    /// Lifts in the order of [`SurfacePresentation::free_generator_names`].
    pub fn new(presentation: SurfacePresentation, lifts: Vec<Lift>) -> Result<Self, RepError> {
        if lifts.len() != presentation.rank() as usize {
            return Err(RepError::Unsupported("wrong number of generator lifts"));
        }
        let inverses = lifts.iter().map(Lift::inverse).collect();
        Ok(Self {
            presentation,
            lifts,
            inverses,
        })
    }

    /// Every supplied generator sent to the identity.
    pub fn trivial(presentation: SurfacePresentation) -> Self {
        let lifts = (0..presentation.rank()).map(|_| Lift::identity()).collect();
        Self::new(presentation, lifts).expect("rank matches")
    }

    /// The presentation.
    pub fn presentation(&self) -> SurfacePresentation {
        self.presentation
    }

    /// Lifts of the supplied generators.
    pub fn lifts(&self) -> &[Lift] {
        &self.lifts
    }

    /// The same representation with every lift replaced by `f(lift)`.
    pub fn map(&self, f: impl Fn(&Lift) -> Lift) -> Self {
        Self::new(self.presentation, self.lifts.iter().map(f).collect()).expect("rank unchanged")
    }

    /// `h^-1 rho h` for a fixed lift `h`.
    pub fn conjugate(&self, h: &Lift) -> Self {
        let hi = h.inverse();
        self.map(|f| hi.compose(f).compose(h))
    }

    /// Lift of the word `w` in the supplied generators.
    pub fn word_lift(&self, w: &Word) -> Lift {
        let mut it = w.letters().iter().map(|&l| self.letter(l).clone());
        match it.next() {
            None => Lift::identity(),
            Some(first) => it.fold(first, |acc, f| acc.compose(&f)),
        }
    }

    fn letter(&self, l: i32) -> &Lift {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            &self.lifts[i]
        } else {
            &self.inverses[i]
        }
    }

    fn commutator(&self, i: u32) -> Lift {
        let (a, b) = (2 * i as usize, 2 * i as usize + 1);
        self.lifts[a]
            .compose(&self.lifts[b])
            .compose(&self.inverses[a])
            .compose(&self.inverses[b])
    }

    /// `[a_1, b_1] ... [a_g, b_g]` followed by the supplied boundary lifts.
    fn relator_prefix(&self) -> Lift {
        let g = self.presentation.genus;
        let mut acc = Lift::identity();
        for i in 0..g {
            acc = acc.compose(&self.commutator(i));
        }
        for c in &self.lifts[2 * g as usize..] {
            acc = acc.compose(c);
        }
        acc
    }

    /// Lift of the commutator `[a_{i+1}, b_{i+1}]`.
    pub fn commutator_lift(&self, i: u32) -> Lift {
        self.commutator(i)
    }

    /// Lifts of `c_1, ..., c_n`, the last one derived from the relator.
    pub fn boundary_lifts(&self) -> Vec<Lift> {
        if self.presentation.punctures == 0 {
            return Vec::new();
        }
        let g2 = 2 * self.presentation.genus as usize;
        let mut out: Vec<Lift> = self.lifts[g2..].to_vec();
        out.push(self.relator_prefix().inverse());
        out
    }

    /// The lift of the full relator word; for closed surfaces this is a
    /// translation by the Euler number.
    pub fn relator_lift(&self) -> Lift {
        let prefix = self.relator_prefix();
        match self.boundary_lifts().last() {
            Some(cn) => prefix.compose(cn),
            None => prefix,
        }
    }

    /// Matrices of the generators when every lift covers a Möbius map.
    pub fn generator_matrices(&self) -> Result<Vec<Matrix2>, RepError> {
        let names = self.presentation.free_generator_names();
        self.lifts
            .iter()
            .zip(names)
            .map(|(f, name)| f.projective_matrix().ok_or(RepError::NotMobius(name)))
            .collect()
    }
}

/// Integer read off the relator of a closed surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelatorTranslation {
    /// The Euler number.
    pub e: i64,
    /// Largest distance of `h(x) - x` from `e` on the grid.
    pub residual: f64,
}

/// Points `j / 64`, `j = 0..=64`.
const RELATOR_GRID: usize = 64;

/// The Euler number of a closed-surface representation: the relator lift
/// is a translation by `e`.
pub fn relator_translation(r: &LiftedRep, tol: f64) -> Result<RelatorTranslation, RepError> {
    if r.presentation.punctures != 0 {
        return Err(RepError::Unsupported("relator_translation needs a closed surface"));
    }
    if !(tol > 0.0) {
        return Err(LiftError::InvalidArgument("tolerance must be positive").into());
    }
    let h = r.relator_lift();
    let ds: Vec<f64> = (0..=RELATOR_GRID)
        .map(|j| {
            let x = j as f64 / RELATOR_GRID as f64;
            h.eval(x) - x
        })
        .collect();
    let e = libm::round(ds[0]);
    let residual = ds.iter().fold(0.0_f64, |m, d| m.max((d - e).abs()));
    if residual > tol {
        return Err(RepError::NotARepresentation { residual });
    }
    Ok(RelatorTranslation {
        e: e as i64,
        residual,
    })
}

/// `-sum_j rott(c_j)` for a punctured surface, with the summed enclosure widths.
pub fn euler_number_punctured(r: &LiftedRep, tol: f64) -> Result<Estimate, RepError> {
    if r.presentation.punctures == 0 {
        return Err(RepError::Unsupported("euler_number_punctured needs a puncture"));
    }
    let mut total = Estimate::exact(0.0);
    for c in r.boundary_lifts() {
        total = total - Estimate::from(translation_number(&c, tol)?);
    }
    Ok(total)
}

/// Euler number of any representation: exact for closed surfaces,
/// an enclosure for punctured ones.
pub fn euler_number(r: &LiftedRep, tol: f64) -> Result<Estimate, RepError> {
    if r.presentation.punctures == 0 {
        let t = relator_translation(r, tol)?;
        Ok(Estimate::exact(t.e as f64))
    } else {
        euler_number_punctured(r, tol)
    }
}

/// Outcome of [`milnor_wood_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MilnorWoodReport {
    /// The Euler number.
    pub e: Estimate,
    /// `chi(Sigma_{g,n})`.
    pub chi: i64,
    /// `|min(chi, 0)|`.
    pub bound: f64,
    /// `|e| <= bound + err + tol`.
    pub ok: bool,
    /// `| |e| - bound | <= err + tol`.
    pub equality: bool,
}

/// Checks `|e| <= |chi_-|`.
pub fn milnor_wood_check(r: &LiftedRep, tol: f64) -> Result<MilnorWoodReport, RepError> {
    let e = euler_number(r, tol)?;
    let chi = r.presentation.euler_characteristic();
    let bound = (chi.min(0)).unsigned_abs() as f64;
    Ok(MilnorWoodReport {
        e,
        chi,
        bound,
        ok: e.value.abs() <= bound + e.err + tol,
        equality: (e.value.abs() - bound).abs() <= e.err + tol,
    })
}

/// Largest ball radius for [`elliptic_survey`].
pub const MAX_SURVEY_RADIUS: usize = 8;

fn word_matrix(mats: &[Matrix2], w: &Word) -> Matrix2 {
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for &l in w.letters() {
        let g = mats[l.unsigned_abs() as usize - 1];
        let g = if l > 0 { g } else { crate::lifts::mat_inv(&g) };
        m = crate::lifts::mat_mul(&m, &g);
    }
    m
}

/// Nontrivial words of length `<= radius` whose image is elliptic, with traces.
pub fn elliptic_survey(r: &LiftedRep, radius: usize) -> Result<Vec<(Word, f64)>, RepError> {
    let rank = r.presentation.rank();
    if radius > MAX_SURVEY_RADIUS {
        return Err(RepError::BallTooLarge {
            radius,
            size: ball_size(rank, radius),
            limit: ball_size(rank, MAX_SURVEY_RADIUS),
        });
    }
    let mats = r.generator_matrices()?;
    let mut out = Vec::new();
    for w in ball(rank, radius)? {
        if w.is_empty() {
            continue;
        }
        let m = word_matrix(&mats, &w);
        let class = mobius_classify(&m, DEFAULT_TRACE_EPS)?;
        if class.kind == MobiusKind::Elliptic {
            out.push((w, class.trace));
        }
    }
    Ok(out)
}

/// How far the maximality evidence goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaximalityVerdict {
    /// `|e| = |chi|` and no elliptic word up to the radius.
    Consistent,
    /// `|e| < |chi|`.
    NotMaximal,
    /// `|e| = |chi|` but an elliptic word was found.
    EllipticWitness,
}

/// Outcome of [`maximality_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalityReport {
    /// The Euler number.
    pub e: Estimate,
    /// `chi(Sigma_{g,n})`.
    pub chi: i64,
    /// `| |e| - |chi| | <= err + tol` with `chi < 0`.
    pub maximal: bool,
    /// Elliptic words up to the radius.
    pub elliptic_witnesses: Vec<(Word, f64)>,
    /// Summary of the two checks together.
    pub verdict: MaximalityVerdict,
}

/// Maximality of the Euler number, reported next to the elliptic survey.
pub fn maximality_check(
    r: &LiftedRep,
    radius: usize,
    tol: f64,
) -> Result<MaximalityReport, RepError> {
    let e = euler_number(r, tol)?;
    let chi = r.presentation.euler_characteristic();
    let maximal = chi < 0 && (e.value.abs() - chi.unsigned_abs() as f64).abs() <= e.err + tol;
    let elliptic_witnesses = elliptic_survey(r, radius)?;
    let verdict = match (maximal, elliptic_witnesses.is_empty()) {
        (false, _) => MaximalityVerdict::NotMaximal,
        (true, true) => MaximalityVerdict::Consistent,
        (true, false) => MaximalityVerdict::EllipticWitness,
    };
    Ok(MaximalityReport {
        e,
        chi,
        maximal,
        elliptic_witnesses,
        verdict,
    })
}

/// Largest ball radius for [`fingerprint`].
pub const MAX_FINGERPRINT_RADIUS: usize = 4;

/// `tau` on all pairs of short words and rotation numbers of the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Fingerprint {
    /// Words of length `<= radius`, in ball order.
    pub words: Vec<Word>,
    /// `tau(rho(w_i), rho(w_j))`, row-major.
    pub tau_table: Vec<Estimate>,
    /// Rotation number (mod 1) of each supplied generator.
    pub rot_gens: Vec<(String, Estimate)>,
}

impl Fingerprint {
    /// `tau` on the pair `(i, j)` of words.
    pub fn tau(&self, i: usize, j: usize) -> Estimate {
        self.tau_table[i * self.words.len() + j]
    }

    /// Entrywise agreement within the error bars plus `slack`; rotation
    /// numbers are compared on the circle.
    pub fn agrees_with(&self, other: &Fingerprint, slack: f64) -> bool {
        if self.words != other.words || self.rot_gens.len() != other.rot_gens.len() {
            return false;
        }
        let taus = self
            .tau_table
            .iter()
            .zip(&other.tau_table)
            .all(|(a, b)| (a.value - b.value).abs() <= a.err + b.err + slack);
        let rots = self.rot_gens.iter().zip(&other.rot_gens).all(|((_, a), (_, b))| {
            let d = a.value - b.value;
            (d - libm::round(d)).abs() <= a.err + b.err + slack
        });
        taus && rots
    }
}

/// Cache of translation numbers of word lifts.
struct RottCache<'a> {
    rep: &'a LiftedRep,
    tol: f64,
    seen: BTreeMap<Vec<i32>, Estimate>,
}

impl RottCache<'_> {
    fn get(&mut self, w: &Word) -> Result<Estimate, LiftError> {
        if let Some(e) = self.seen.get(w.letters()) {
            return Ok(*e);
        }
        let e = Estimate::from(translation_number(&self.rep.word_lift(w), self.tol)?);
        self.seen.insert(w.letters().to_vec(), e);
        Ok(e)
    }
}

/// Computes the fingerprint over the ball of the given radius.
pub fn fingerprint(r: &LiftedRep, radius: usize, tol: f64) -> Result<Fingerprint, RepError> {
    let rank = r.presentation.rank();
    if radius > MAX_FINGERPRINT_RADIUS {
        return Err(RepError::BallTooLarge {
            radius,
            size: ball_size(rank, radius),
            limit: ball_size(rank, MAX_FINGERPRINT_RADIUS),
        });
    }
    let words = ball(rank, radius)?;
    let mut cache = RottCache {
        rep: r,
        tol,
        seen: BTreeMap::new(),
    };
    let mut tau_table = Vec::with_capacity(words.len() * words.len());
    for u in &words {
        for v in &words {
            let t = cache.get(&u.mul(v))? - cache.get(u)? - cache.get(v)?;
            tau_table.push(t);
        }
    }
    let names = r.presentation.free_generator_names();
    let mut rot_gens = Vec::with_capacity(names.len());
    for (i, name) in names.into_iter().enumerate() {
        let e = cache.get(&Word::generator(rank, i as i32 + 1)?)?;
        let value = e.value - libm::floor(e.value);
        rot_gens.push((name, Estimate { value, err: e.err }));
    }
    Ok(Fingerprint {
        words,
        tau_table,
        rot_gens,
    })
}

/// Largest ball radius for [`semi_conjugacy_map`].
pub const MAX_SEMICONJ_RADIUS: usize = 5;

/// Diagnostics emitted by [`semi_conjugacy_map`].
#[derive(Clone, Debug, PartialEq)]
pub enum SemiConjWarning {
    /// Short-word fingerprints of the two representations differ.
    FingerprintMismatch,
    /// Fingerprints could not be certified at the requested tolerance.
    FingerprintUnavailable(String),
    /// Every generator of the first representation has a fixed point, so
    /// the supremum may fail to be finite in the limit.
    FixedPointHazard,
}

/// Settings for [`semi_conjugacy_map_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiConjConfig {
    /// Radius of the fingerprint comparison.
    pub fingerprint_radius: usize,
    /// Tolerance of the fingerprint comparison.
    pub fingerprint_tol: f64,
}

impl Default for SemiConjConfig {
    fn default() -> Self {
        Self {
            fingerprint_radius: 1,
            fingerprint_tol: 1e-4,
        }
    }
}

/// The truncated supremum `x -> max_w rho1(w)^-1 rho2(w) x` over a ball.
#[derive(Clone, Debug)]
pub struct TruncatedSup {
    terms: Vec<Lift>,
}

impl TruncatedSup {
    /// Builds the terms for all words of length `<= radius`.
    pub fn new(r1: &LiftedRep, r2: &LiftedRep, radius: usize) -> Result<Self, RepError> {
        let words = ball(r1.presentation.rank(), radius)?;
        let terms = words
            .iter()
            .map(|w| r1.word_lift(w).inverse().compose(&r2.word_lift(w)))
            .collect();
        Ok(Self { terms })
    }

    /// Evaluates the supremum.
    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Samples of the truncated semi-conjugacy and its diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiConjugacy {
    /// Grid `j / grid`, `j = 0..=grid`.
    pub xs: Vec<f64>,
    /// The map on the grid.
    pub values: Vec<f64>,
    /// Grid steps where the map decreases.
    pub monotonicity_violations: usize,
    /// `max |phi(x + 1) - phi(x) - 1|` on the grid.
    pub translation_defect: f64,
    /// `max |rho1(s) phi(x) - phi(rho2(s) x) - round(.)|` over generators and grid.
    pub equivariance_residual: f64,
    /// Diagnostics.
    pub warnings: Vec<SemiConjWarning>,
}

/// [`semi_conjugacy_map_with`] using the default configuration.
pub fn semi_conjugacy_map(
    r1: &LiftedRep,
    r2: &LiftedRep,
    radius: usize,
    grid: usize,
) -> Result<SemiConjugacy, RepError> {
    semi_conjugacy_map_with(r1, r2, radius, grid, SemiConjConfig::default())
}

/// Samples the map `x -> max_{|w| <= radius} rho1(w)^-1 rho2(w) x`, a
/// truncation of the monotone equivariant map relating two representations
/// with equal bounded Euler classes.
pub fn semi_conjugacy_map_with(
    r1: &LiftedRep,
    r2: &LiftedRep,
    radius: usize,
    grid: usize,
    config: SemiConjConfig,
) -> Result<SemiConjugacy, RepError> {
    if r1.presentation != r2.presentation {
        return Err(RepError::Unsupported("representations of different surfaces"));
    }
    let rank = r1.presentation.rank();
    if radius > MAX_SEMICONJ_RADIUS {
        return Err(RepError::BallTooLarge {
            radius,
            size: ball_size(rank, radius),
            limit: ball_size(rank, MAX_SEMICONJ_RADIUS),
        });
    }
    if grid < 1 {
        return Err(LiftError::InvalidArgument("grid must be positive").into());
    }

    let mut warnings = Vec::new();
    let f1 = fingerprint(r1, config.fingerprint_radius, config.fingerprint_tol);
    let f2 = fingerprint(r2, config.fingerprint_radius, config.fingerprint_tol);
    match (f1, f2) {
        (Ok(a), Ok(b)) => {
            if !a.agrees_with(&b, 1e-9) {
                warnings.push(SemiConjWarning::FingerprintMismatch);
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            warnings.push(SemiConjWarning::FingerprintUnavailable(format!("{e}")));
        }
    }
    let mut all_fixed = !r1.lifts.is_empty();
    for f in &r1.lifts {
        let (lo, hi) = displacement_range(f, 256)?;
        all_fixed &= lo <= 0.0 && 0.0 <= hi;
    }
    if all_fixed {
        warnings.push(SemiConjWarning::FixedPointHazard);
    }

    let phi = TruncatedSup::new(r1, r2, radius)?;
    let xs: Vec<f64> = (0..=grid).map(|j| j as f64 / grid as f64).collect();
    let values: Vec<f64> = xs.iter().map(|&x| phi.eval(x)).collect();
    let monotonicity_violations = values.windows(2).filter(|w| w[1] < w[0]).count();
    let translation_defect = xs
        .iter()
        .zip(&values)
        .map(|(&x, &v)| (phi.eval(x + 1.0) - v - 1.0).abs())
        .fold(0.0, f64::max);
    let mut equivariance_residual: f64 = 0.0;
    for (s1, s2) in r1.lifts.iter().zip(&r2.lifts) {
        for (&x, &v) in xs.iter().zip(&values) {
            let d = s1.eval(v) - phi.eval(s2.eval(x));
            equivariance_residual = equivariance_residual.max((d - libm::round(d)).abs());
        }
    }
    Ok(SemiConjugacy {
        xs,
        values,
        monotonicity_violations,
        translation_defect,
        equivariance_residual,
        warnings,
    })
}

/// Outcome of [`additivity_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdditivityReport {
    /// Euler number of the closed surface.
    pub e: i64,
    /// Euler number of the first one-holed torus, `rott([a1, b1])`.
    pub e1: Estimate,
    /// Euler number of the second one-holed torus, `rott([a2, b2])`.
    pub e2: Estimate,
    /// `|e - e1 - e2| <= err + tol`.
    pub ok: bool,
}

/// Compares the Euler number of a genus-2 representation with the sum over
/// the two one-holed tori cut along the separating curve.
pub fn additivity_check(r: &LiftedRep, tol: f64) -> Result<AdditivityReport, RepError> {
    if r.presentation != SurfacePresentation::new(2, 0) {
        return Err(RepError::Unsupported("additivity_check needs a closed genus-2 surface"));
    }
    let e = relator_translation(r, tol)?.e;
    let e1 = Estimate::from(translation_number(&r.commutator(0), tol)?);
    let e2 = Estimate::from(translation_number(&r.commutator(1), tol)?);
    let sum = e1 + e2;
    Ok(AdditivityReport {
        e,
        e1,
        e2,
        ok: (e as f64 - sum.value).abs() <= sum.err + tol,
    })
}

/// `tau` on the images of two words.
pub fn word_tau(r: &LiftedRep, u: &Word, v: &Word, tol: f64) -> Result<Estimate, RepError> {
    Ok(tau(&r.word_lift(u), &r.word_lift(v), tol)?)
}

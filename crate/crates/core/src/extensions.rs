//! Central extensions of groups by the integers, built from 2-cocycles.
//!
//! An integer 2-cocycle `phi` on `G` defines the group `Z x G` with
//! `(a, g)(b, h) = (a + b + phi(g, h), gh)`; a set-theoretic section of an
//! extension gives back a cocycle. Base groups are either finite, given by a
//! multiplication table, or a window `{-W, ..., W}` of the integers, in which
//! case only products landing inside the window are defined and checked.

use alloc::vec;
use alloc::vec::Vec;

/// Largest order of a finite base group.
pub const MAX_ORDER: usize = 512;

/// Errors raised by extension routines.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    /// The table is not a group.
    #[error("not a group: {0}")]
    NotAGroup(&'static str),
    /// The table is larger than [`MAX_ORDER`].
    #[error("group order {order} exceeds {MAX_ORDER}")]
    OrderTooLarge {
        /// Requested order.
        order: usize,
    },
    /// The cocycle identity fails.
    #[error("cocycle identity fails on {triple:?}")]
    NotACocycle {
        /// First failing triple.
        triple: (i64, i64, i64),
    },
    /// `phi(g, 1)` or `phi(1, g)` is nonzero.
    #[error("cocycle is not normalized at {pair:?}")]
    NotNormalized {
        /// First offending pair.
        pair: (i64, i64),
    },
    /// Multiplication is not associative.
    #[error("associativity fails on base elements {triple:?}")]
    AssociativityFailure {
        /// Witness triple of base elements.
        triple: (i64, i64, i64),
    },
    /// The map does not project to the identity of the base.
    #[error("section does not lie over {element}")]
    NotASection {
        /// First base element where it fails.
        element: i64,
    },
    /// The cochain table does not match the base group.
    #[error("cochain table has {found} entries, expected {expected}")]
    ShapeMismatch {
        /// Expected number of entries.
        expected: usize,
        /// Entries supplied.
        found: usize,
    },
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, ExtError> {
        let order = table.len();
        if order == 0 {
            return Err(ExtError::NotAGroup("empty table"));
        }
        if order > MAX_ORDER {
            return Err(ExtError::OrderTooLarge { order });
        }
        if table.iter().any(|row| row.len() != order || row.iter().any(|&x| x >= order)) {
            return Err(ExtError::NotAGroup("table is not a closed square"));
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let m = |a: usize, b: usize| mul[a * order + b];
        for a in 0..order {
            for b in 0..order {
                let ab = m(a, b);
                for c in 0..order {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(ExtError::NotAGroup("multiplication is not associative"));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or(ExtError::NotAGroup("no identity"))?;
        let mut inverse = vec![0; order];
        for (a, slot) in inverse.iter_mut().enumerate() {
            *slot = (0..order)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or(ExtError::NotAGroup("missing inverse"))?;
        }
        Ok(Self {
            order,
            mul,
            identity,
            inverse,
        })
    }

    /// The cyclic group `Z/m`, elements `0..m`.
    pub fn cyclic(m: usize) -> Result<Self, ExtError> {
        Self::new((0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect())
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Identity index.
    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Product of two elements.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    /// Inverse of an element.
    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// The group an extension is built over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseGroup {
    /// A finite group; elements are the indices `0..order`.
    Finite(FiniteGroupTable),
    /// The integers truncated to `{-radius, ..., radius}`.
    IntWindow {
        /// Window radius.
        radius: i64,
    },
}

impl BaseGroup {
    /// All elements, in a fixed order.
    pub fn elements(&self) -> Vec<i64> {
        match self {
            BaseGroup::Finite(t) => (0..t.order as i64).collect(),
            BaseGroup::IntWindow { radius } => (-radius..=*radius).collect(),
        }
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        match self {
            BaseGroup::Finite(t) => t.order,
            BaseGroup::IntWindow { radius } => (2 * radius + 1) as usize,
        }
    }

    /// The identity element.
    pub fn identity(&self) -> i64 {
        match self {
            BaseGroup::Finite(t) => t.identity as i64,
            BaseGroup::IntWindow { .. } => 0,
        }
    }

    /// Whether `g` is an element.
    pub fn contains(&self, g: i64) -> bool {
        match self {
            BaseGroup::Finite(t) => (0..t.order as i64).contains(&g),
            BaseGroup::IntWindow { radius } => g.abs() <= *radius,
        }
    }

    /// Product, or `None` when it leaves the window.
    pub fn mul(&self, g: i64, h: i64) -> Option<i64> {
        match self {
            BaseGroup::Finite(t) => Some(t.mul(g as usize, h as usize) as i64),
            BaseGroup::IntWindow { .. } => Some(g + h).filter(|p| self.contains(*p)),
        }
    }

    /// Inverse element.
    pub fn inverse(&self, g: i64) -> i64 {
        match self {
            BaseGroup::Finite(t) => t.inverse(g as usize) as i64,
            BaseGroup::IntWindow { .. } => -g,
        }
    }

    fn index(&self, g: i64) -> usize {
        match self {
            BaseGroup::Finite(_) => g as usize,
            BaseGroup::IntWindow { radius } => (g + radius) as usize,
        }
    }

    /// Triples whose partial products `gh`, `hk` and `ghk` all exist.
    fn interior_triples(&self) -> impl Iterator<Item = (i64, i64, i64, i64, i64)> + '_ {
        let els = self.elements();
        let els2 = els.clone();
        let els3 = els.clone();
        els.into_iter().flat_map(move |g| {
            let els3 = els3.clone();
            els2.clone().into_iter().flat_map(move |h| {
                els3.clone().into_iter().filter_map(move |k| {
                    let gh = self.mul(g, h)?;
                    let hk = self.mul(h, k)?;
                    self.mul(gh, k)?;
                    Some((g, h, k, gh, hk))
                })
            })
        })
    }
}

/// An integer-valued 2-cochain on a base group, stored as a full table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    base: BaseGroup,
    values: Vec<i64>,
}

impl TwoCocycle {
    /// Tabulates `f` on all pairs of base elements.
    pub fn from_fn(base: BaseGroup, f: impl Fn(i64, i64) -> i64) -> Self {
        let els = base.elements();
        let values = els
            .iter()
            .flat_map(|&g| els.iter().map(move |&h| (g, h)))
            .map(|(g, h)| f(g, h))
            .collect();
        Self { base, values }
    }

    /// Row-major table `values[index(g) * size + index(h)]`.
    pub fn from_table(base: BaseGroup, values: Vec<i64>) -> Result<Self, ExtError> {
        let expected = base.size() * base.size();
        if values.len() != expected {
            return Err(ExtError::ShapeMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Self { base, values })
    }

    /// The zero cochain.
    pub fn zero(base: BaseGroup) -> Self {
        Self::from_fn(base, |_, _| 0)
    }

    /// The base group.
    pub fn base(&self) -> &BaseGroup {
        &self.base
    }

    /// Row-major table of values.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `phi(g, h)`.
    pub fn get(&self, g: i64, h: i64) -> i64 {
        let n = self.base.size();
        self.values[self.base.index(g) * n + self.base.index(h)]
    }

    /// First triple violating the cocycle identity, if any.
    pub fn cocycle_failure(&self) -> Option<(i64, i64, i64)> {
        self.base
            .interior_triples()
            .find(|&(g, h, k, gh, hk)| {
                self.get(h, k) - self.get(gh, k) + self.get(g, hk) - self.get(g, h) != 0
            })
            .map(|(g, h, k, _, _)| (g, h, k))
    }

    /// `max |delta phi|` over all triples whose products exist.
    pub fn residual(&self) -> i64 {
        self.base
            .interior_triples()
            .map(|(g, h, k, gh, hk)| {
                (self.get(h, k) - self.get(gh, k) + self.get(g, hk) - self.get(g, h)).abs()
            })
            .max()
            .unwrap_or(0)
    }

    /// First pair `(g, 1)` or `(1, g)` with a nonzero value.
    pub fn normalization_failure(&self) -> Option<(i64, i64)> {
        let e = self.base.identity();
        self.base
            .elements()
            .into_iter()
            .flat_map(|g| [(g, e), (e, g)])
            .find(|&(g, h)| self.get(g, h) != 0)
    }

    /// `phi + delta u`, with `delta u(g, h) = u(g) + u(h) - u(gh)`; pairs
    /// whose product leaves a window keep their value.
    pub fn add_coboundary(&self, u: impl Fn(i64) -> i64) -> Self {
        let base = self.base.clone();
        Self::from_fn(base.clone(), |g, h| match base.mul(g, h) {
            Some(gh) => self.get(g, h) + u(g) + u(h) - u(gh),
            None => self.get(g, h),
        })
    }
}

/// Shifts a cocycle by the coboundary of the constant `-phi(1, 1)`, making
/// `phi(g, 1) = phi(1, g) = 0`.
pub fn normalize_cocycle(phi: &TwoCocycle) -> Result<TwoCocycle, ExtError> {
    if let Some(triple) = phi.cocycle_failure() {
        return Err(ExtError::NotACocycle { triple });
    }
    let e = phi.base.identity();
    let k0 = phi.get(e, e);
    Ok(TwoCocycle {
        base: phi.base.clone(),
        values: phi.values.iter().map(|v| v - k0).collect(),
    })
}

/// The central extension of a base group by `Z` defined by a cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionGroup {
    cocycle: TwoCocycle,
}

/// Element `(a, g)` of an extension.
pub type ExtElement = (i64, i64);

impl ExtensionGroup {
    /// The defining cocycle.
    pub fn cocycle(&self) -> &TwoCocycle {
        &self.cocycle
    }

    /// The base group.
    pub fn base(&self) -> &BaseGroup {
        &self.cocycle.base
    }

    /// `(0, 1)`.
    pub fn identity(&self) -> ExtElement {
        (0, self.base().identity())
    }

    /// `(a + b + phi(g, h), gh)`, or `None` when `gh` leaves the window.
    pub fn mul(&self, x: ExtElement, y: ExtElement) -> Option<ExtElement> {
        let gh = self.base().mul(x.1, y.1)?;
        Some((x.0 + y.0 + self.cocycle.get(x.1, y.1), gh))
    }

    /// `(-a - phi(g, g^-1), g^-1)`.
    pub fn inverse(&self, x: ExtElement) -> ExtElement {
        let gi = self.base().inverse(x.1);
        (-x.0 - self.cocycle.get(x.1, gi), gi)
    }

    /// Elements with central coordinate in `-coeff_radius..=coeff_radius`.
    pub fn elements(&self, coeff_radius: i64) -> Vec<ExtElement> {
        let base = self.base().elements();
        (-coeff_radius..=coeff_radius)
            .flat_map(|a| base.iter().map(move |&g| (a, g)))
            .collect()
    }

    /// First element failing to commute with the generator `(1, 1)` of the
    /// central copy of `Z`.
    pub fn centrality_failure(&self, coeff_radius: i64) -> Option<ExtElement> {
        let z = (1, self.base().identity());
        self.elements(coeff_radius)
            .into_iter()
            .find(|&x| self.mul(z, x) != self.mul(x, z))
    }
}

/// Builds the extension, checking associativity on every triple of base
/// elements whose products exist. The central coordinates add, so these
/// triples decide associativity for all elements.
pub fn build_extension(phi: &TwoCocycle) -> Result<ExtensionGroup, ExtError> {
    if let Some(pair) = phi.normalization_failure() {
        return Err(ExtError::NotNormalized { pair });
    }
    let ext = ExtensionGroup {
        cocycle: phi.clone(),
    };
    for (g, h, k, _, _) in phi.base.interior_triples() {
        let (x, y, z) = ((0, g), (0, h), (0, k));
        let left = ext.mul(x, y).and_then(|xy| ext.mul(xy, z));
        let right = ext.mul(y, z).and_then(|yz| ext.mul(x, yz));
        if left != right {
            return Err(ExtError::AssociativityFailure { triple: (g, h, k) });
        }
    }
    Ok(ext)
}

/// The cocycle `s(g1 g2)^{-1} s(g1) s(g2)` of a section, read in the
/// central copy of `Z`. Pairs whose product leaves a window are set to 0.
pub fn cocycle_from_section(
    ext: &ExtensionGroup,
    s: impl Fn(i64) -> ExtElement,
) -> Result<TwoCocycle, ExtError> {
    let base = ext.base().clone();
    if let Some(element) = base.elements().into_iter().find(|&g| s(g).1 != g) {
        return Err(ExtError::NotASection { element });
    }
    let values = TwoCocycle::from_fn(base.clone(), |g1, g2| {
        let Some(g12) = base.mul(g1, g2) else {
            return 0;
        };
        let prod = ext.mul(s(g1), s(g2)).expect("product exists");
        let central = ext.mul(ext.inverse(s(g12)), prod).expect("lands on the identity");
        debug_assert_eq!(central.1, base.identity());
        central.0
    });
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_nontrivial() -> TwoCocycle {
        let z2 = BaseGroup::Finite(FiniteGroupTable::cyclic(2).unwrap());
        TwoCocycle::from_fn(z2, |g, h| (g == 1 && h == 1) as i64)
    }

    #[test]
    fn group_table_validation() {
        assert!(FiniteGroupTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroupTable::new(vec![vec![0, 1]]).is_err());
        let t = FiniteGroupTable::cyclic(5).unwrap();
        assert_eq!((t.identity(), t.inverse(2), t.mul(3, 4)), (0, 3, 2));
        assert!(matches!(
            FiniteGroupTable::cyclic(600),
            Err(ExtError::OrderTooLarge { order: 600 })
        ));
    }

    #[test]
    fn normalization() {
        let w = BaseGroup::IntWindow { radius: 6 };
        let c = TwoCocycle::from_fn(w.clone(), |_, _| 4);
        let n = normalize_cocycle(&c).unwrap();
        assert!(n.normalization_failure().is_none());
        assert_eq!(normalize_cocycle(&n).unwrap(), n);
        let bad = TwoCocycle::from_fn(w, |g, h| (g == 1 && h == 2) as i64);
        assert!(matches!(normalize_cocycle(&bad), Err(ExtError::NotACocycle { .. })));
    }

    #[test]
    fn trivial_extension_of_z2_is_a_direct_product() {
        let phi = TwoCocycle::zero(BaseGroup::Finite(FiniteGroupTable::cyclic(2).unwrap()));
        let e = build_extension(&phi).unwrap();
        assert_eq!(e.mul((0, 1), (0, 1)), Some((0, 0)));
        let back = cocycle_from_section(&e, |g| (0, g)).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn nontrivial_extension_of_z2_is_infinite_cyclic() {
        let phi = z2_nontrivial();
        let e = build_extension(&phi).unwrap();
        assert_eq!(e.mul((0, 1), (0, 1)), Some((1, 0)));
        // powers of (0, 1) run through every (a, g) exactly once
        let mut x = e.identity();
        let mut seen = alloc::collections::BTreeSet::new();
        for _ in 0..20 {
            assert!(seen.insert(x));
            x = e.mul(x, (0, 1)).unwrap();
        }
        let expected: alloc::collections::BTreeSet<_> =
            (0..10).flat_map(|a| [(a, 0), (a, 1)]).collect();
        assert_eq!(seen, expected);
        assert_eq!(cocycle_from_section(&e, |g| (0, g)).unwrap(), phi);
        assert!(e.centrality_failure(3).is_none());
    }

    #[test]
    fn non_cocycles_fail_associativity() {
        let z3 = BaseGroup::Finite(FiniteGroupTable::cyclic(3).unwrap());
        let phi = TwoCocycle::from_fn(z3, |g, h| (g == 1 && h == 2) as i64);
        assert!(phi.residual() > 0);
        assert!(matches!(build_extension(&phi), Err(ExtError::AssociativityFailure { .. })));
    }

    #[test]
    fn sections_differ_by_coboundaries() {
        let phi = z2_nontrivial();
        let e = build_extension(&phi).unwrap();
        let u = |g: i64| 3 * g;
        let s2 = |g: i64| (u(g), g);
        let c2 = cocycle_from_section(&e, s2).unwrap();
        assert_eq!(c2, phi.add_coboundary(u));
        assert!(matches!(
            cocycle_from_section(&e, |g| (0, 1 - g)),
            Err(ExtError::NotASection { element: 0 })
        ));
    }
}

//! Fundamental cycles of closed surfaces and bounds on simplicial volume.
//!
//! The closed surface of genus `g` is the `4g`-gon `P_0 ... P_{4g-1}` with
//! sides labelled `a_1 b_1 a_1^-1 b_1^-1 ... a_g b_g a_g^-1 b_g^-1`, side `s`
//! running from `P_s` to `P_{s+1}`. It is cut into the fan triangles
//! `(P_0, P_k, P_{k+1})`, all positively oriented, so the sum of the fan
//! triangles with coefficient `1` is a fundamental cycle.
//!
//! Edges of the quotient are identified by an id and compared with a sign:
//! a side labelled `x` read from `P_s` to `P_{s+1}` is `+[x]`, a side
//! labelled `x^-1` is `-[x]`; a diagonal `P_i P_j` with `i < j` is `+[P_i P_j]`.
//! The boundary of a triangle `(v_0, v_1, v_2)` is
//! `[v_1 v_2] - [v_0 v_2] + [v_0 v_1]`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

/// An edge of the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeId {
    /// The side pair of generator `k` (`0..2g`, ordered `a_1, b_1, a_2, ...`).
    Side(usize),
    /// The diagonal between polygon vertices `i < j`.
    Diagonal(usize, usize),
}

/// A triangulated `4g`-gon with its side pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientComplex {
    genus: usize,
    side_labels: Vec<(usize, i8)>,
    triangles: Vec<[usize; 3]>,
    vertex_class: Vec<usize>,
    edges: Vec<EdgeId>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The fan triangulation of the `4g`-gon with the standard side pairing.
///
/// # Panics
///
/// If `g == 0`.
pub fn polygon_triangulation(g: usize) -> QuotientComplex {
    assert!(g >= 1, "genus must be at least 1");
    let m = 4 * g;
    let side_labels: Vec<(usize, i8)> = (0..g)
        .flat_map(|i| [(2 * i, 1), (2 * i + 1, 1), (2 * i, -1), (2 * i + 1, -1)])
        .collect();
    let triangles: Vec<[usize; 3]> = (1..m - 1).map(|k| [0, k, k + 1]).collect();

    let mut uf = UnionFind((0..m).collect());
    for (s, &(gen, sign)) in side_labels.iter().enumerate() {
        if sign < 0 {
            continue;
        }
        let t = side_labels
            .iter()
            .position(|&(h, e)| h == gen && e < 0)
            .expect("every letter has an inverse side");
        // x runs P_s -> P_{s+1} and P_{t+1} -> P_t
        uf.union(s, (t + 1) % m);
        uf.union((s + 1) % m, t);
    }
    let mut roots: Vec<usize> = (0..m).map(|v| uf.find(v)).collect();
    let mut distinct = roots.clone();
    distinct.sort_unstable();
    distinct.dedup();
    for r in roots.iter_mut() {
        *r = distinct.binary_search(r).expect("root is listed");
    }

    let mut edges: Vec<EdgeId> = (0..2 * g).map(EdgeId::Side).collect();
    edges.extend((2..m - 1).map(|k| EdgeId::Diagonal(0, k)));
    QuotientComplex {
        genus: g,
        side_labels,
        triangles,
        vertex_class: roots,
        edges,
    }
}

impl QuotientComplex {
    /// Genus of the surface.
    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Triangles as triples of polygon vertex indices.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Triangles as triples of quotient vertex classes.
    pub fn quotient_triangles(&self) -> Vec<[usize; 3]> {
        self.triangles
            .iter()
            .map(|t| t.map(|v| self.vertex_class[v]))
            .collect()
    }

    /// Quotient vertex class of each polygon vertex.
    pub fn vertex_classes(&self) -> &[usize] {
        &self.vertex_class
    }

    /// `(generator, exponent)` labelling each polygon side.
    pub fn side_labels(&self) -> &[(usize, i8)] {
        &self.side_labels
    }

    /// Name of a side label, e.g. `a1` or `b2^-1`.
    pub fn side_name(&self, s: usize) -> String {
        let (gen, sign) = self.side_labels[s];
        let letter = if gen % 2 == 0 { 'a' } else { 'b' };
        let suffix = if sign < 0 { "^-1" } else { "" };
        format!("{letter}{}{suffix}", gen / 2 + 1)
    }

    /// Edges of the quotient.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Number of quotient vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertex_class.iter().max().map_or(0, |&m| m + 1)
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// The quotient edge carried by the oriented polygon segment `i -> j`,
    /// with the sign relating the two orientations.
    pub fn edge_of(&self, i: usize, j: usize) -> (EdgeId, i8) {
        let m = self.side_labels.len();
        if (i + 1) % m == j {
            let (gen, sign) = self.side_labels[i];
            (EdgeId::Side(gen), sign)
        } else if (j + 1) % m == i {
            let (gen, sign) = self.side_labels[j];
            (EdgeId::Side(gen), -sign)
        } else if i < j {
            (EdgeId::Diagonal(i, j), 1)
        } else {
            (EdgeId::Diagonal(j, i), -1)
        }
    }

    /// Signed edges of `d(v_0, v_1, v_2) = [v_1 v_2] - [v_0 v_2] + [v_0 v_1]`.
    pub fn triangle_boundary(&self, t: usize) -> [(EdgeId, i8); 3] {
        let [v0, v1, v2] = self.triangles[t];
        let (e0, s0) = self.edge_of(v1, v2);
        let (e1, s1) = self.edge_of(v0, v2);
        let (e2, s2) = self.edge_of(v0, v1);
        [(e0, s0), (e1, -s1), (e2, s2)]
    }

    /// Whether every edge occurs in exactly two triangle slots with
    /// opposite signs.
    pub fn is_closed_surface(&self) -> bool {
        let mut slots: Vec<Vec<i8>> = vec![Vec::new(); self.edges.len()];
        for t in 0..self.triangles.len() {
            for (e, s) in self.triangle_boundary(t) {
                match self.edges.iter().position(|&x| x == e) {
                    Some(k) => slots[k].push(s),
                    None => return false,
                }
            }
        }
        slots.iter().all(|s| s.len() == 2 && s[0] == -s[1])
    }

    /// The sum of all triangles with coefficient `1`.
    pub fn canonical_cycle(&self) -> Chain2 {
        Chain2 {
            terms: (0..self.triangles.len()).map(|t| (1.0, t)).collect(),
        }
    }
}

/// A real 2-chain on a [`QuotientComplex`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Chain2 {
    /// `(coefficient, triangle index)` pairs.
    pub terms: Vec<(f64, usize)>,
}

impl Chain2 {
    /// A chain from its terms.
    pub fn new(terms: Vec<(f64, usize)>) -> Self {
        Self { terms }
    }

    /// Terms with repeated triangles merged, sorted by triangle.
    pub fn collected(&self) -> Vec<(f64, usize)> {
        let mut terms = self.terms.clone();
        terms.sort_by_key(|&(_, t)| t);
        let mut out: Vec<(f64, usize)> = Vec::with_capacity(terms.len());
        for (c, t) in terms {
            match out.last_mut() {
                Some((acc, last)) if *last == t => *acc += c,
                _ => out.push((c, t)),
            }
        }
        out
    }
}

/// `sum |a_i|`, after merging repeated triangles.
pub fn l1_norm(c: &Chain2) -> f64 {
    c.collected().iter().map(|(a, _)| a.abs()).sum()
}

/// The l1 norm of the boundary of `c` in the quotient.
///
/// # Panics
///
/// If `c` names a triangle outside `k`.
pub fn boundary_residual(c: &Chain2, k: &QuotientComplex) -> f64 {
    let mut coeffs = vec![0.0f64; k.edges.len()];
    for &(a, t) in &c.terms {
        assert!(t < k.triangles.len(), "triangle {t} is not in the complex");
        for (e, s) in k.triangle_boundary(t) {
            let idx = k.edges.iter().position(|&x| x == e).expect("edge is listed");
            coeffs[idx] += a * s as f64;
        }
    }
    coeffs.iter().map(|x| x.abs()).sum()
}

/// Simplicial volume of a surface of finite type with two-sided bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceBounds {
    /// Genus.
    pub genus: u64,
    /// Number of punctures.
    pub punctures: u64,
    /// Degree of the cover used for the upper bound.
    pub degree: u64,
    /// `2 - 2g - n`.
    pub chi: i64,
    /// `max(0, -2 chi)`.
    pub exact: f64,
    /// `2 |chi|` for closed surfaces of genus at least 2.
    pub lower: Option<f64>,
    /// `2 |chi| + 2 / d` for closed surfaces of genus at least 1.
    pub upper: Option<f64>,
    /// Genus `d (g - 1) + 1` of the cover behind `upper`.
    pub cover_genus: Option<u64>,
    /// How each value was obtained.
    pub provenance: Vec<&'static str>,
}

/// Bounds on the simplicial volume of the genus `g` surface with `n` punctures.
///
/// # Panics
///
/// If `d == 0`.
pub fn surface_bounds(g: u64, n: u64, d: u64) -> SurfaceBounds {
    assert!(d >= 1, "cover degree must be positive");
    let chi = 2 - 2 * g as i64 - n as i64;
    let exact = (-2 * chi).max(0) as f64;
    let abs_chi = chi.unsigned_abs() as f64;
    let mut provenance = vec!["exact: max(0, -2 chi) for surfaces of finite type"];
    let lower = (n == 0 && g >= 2).then(|| {
        provenance.push("lower: 2 |chi| from a maximal flat circle bundle, |eu| = 2g - 2 and ||e_b|| = 1/2");
        2.0 * abs_chi
    });
    let (upper, cover_genus) = if n == 0 && g >= 1 {
        provenance.push(
            "upper: the 4g'-2 triangle cycle on the degree d cover of genus g' = d(g-1)+1, divided by d",
        );
        (Some(2.0 * abs_chi + 2.0 / d as f64), Some(d * (g - 1) + 1))
    } else {
        (None, None)
    };
    SurfaceBounds {
        genus: g,
        punctures: n,
        degree: d,
        chi,
        exact,
        lower,
        upper,
        cover_genus,
        provenance,
    }
}

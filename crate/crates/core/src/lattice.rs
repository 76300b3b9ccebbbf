//! Exact lattice points and simplices for the standard simplex family
//! `Δ_d = {x : x₁+x₂+x₃ ≤ d, xᵢ ≥ 0}` and its interior polytope
//! `Δ_d^o = (1,1,1) + Δ_{d-4}`.
//!
//! Everything here is integer arithmetic. Orderings are lexicographic so
//! that identifiers derived downstream are reproducible.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `ℤ³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint(pub [i64; 3]);

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint([0, 0, 0]);
    pub const ONES: LatticePoint = LatticePoint([1, 1, 1]);

    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        LatticePoint([x, y, z])
    }

    #[inline]
    pub fn coords(&self) -> [i64; 3] {
        self.0
    }

    /// Coordinate sum `m₁+m₂+m₃`.
    #[inline]
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn dot(&self, other: &LatticePoint) -> i64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.0[0] as f64, self.0[1] as f64, self.0[2] as f64]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: Self) -> Self {
        LatticePoint([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> Self {
        LatticePoint([-self.0[0], -self.0[1], -self.0[2]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainKind {
    /// `Δ_d`
    Full,
    /// `Δ_d^o = (1,1,1) + Δ_{d-4}`
    Interior,
}

/// One member of the standard simplex family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SimplexDomain {
    degree: i64,
    kind: DomainKind,
}

impl SimplexDomain {
    pub fn full(degree: i64) -> Result<Self> {
        if degree < 1 {
            return Err(Error::domain(format!("degree must be >= 1, got {degree}")));
        }
        Ok(SimplexDomain { degree, kind: DomainKind::Full })
    }

    /// The interior polytope, defined for `d >= 4`.
    pub fn interior(degree: i64) -> Result<Self> {
        if degree < 4 {
            return Err(Error::domain(format!(
                "interior polytope needs degree >= 4, got {degree}"
            )));
        }
        Ok(SimplexDomain { degree, kind: DomainKind::Interior })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// Offset and side length of the simplex as `offset + Δ_side`.
    fn offset_and_side(&self) -> (i64, i64) {
        match self.kind {
            DomainKind::Full => (0, self.degree),
            DomainKind::Interior => (1, self.degree - 4),
        }
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        let (o, s) = self.offset_and_side();
        p.0.iter().all(|&c| c >= o) && p.total() - 3 * o <= s
    }

    /// Whether `p` lies on the boundary of this simplex.
    pub fn on_boundary(&self, p: &LatticePoint) -> bool {
        let (o, s) = self.offset_and_side();
        self.contains(p) && (p.0.contains(&o) || p.total() - 3 * o == s)
    }

    /// Indices of the facet inequalities that are tight at `p`: `0..3` for
    /// `xᵢ = offset`, `3` for the slanted facet.
    pub fn tight_facets(&self, p: &LatticePoint) -> [bool; 4] {
        let (o, s) = self.offset_and_side();
        [p.0[0] == o, p.0[1] == o, p.0[2] == o, p.total() - 3 * o == s]
    }

    /// Lattice points in lexicographic order.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (o, s) = self.offset_and_side();
        let mut out = Vec::new();
        for a in 0..=s {
            for b in 0..=(s - a) {
                for c in 0..=(s - a - b) {
                    out.push(LatticePoint([o + a, o + b, o + c]));
                }
            }
        }
        out
    }
}

/// A lattice point of `Δ_d` with its interior flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeEntry {
    pub point: LatticePoint,
    pub interior: bool,
}

/// All lattice points of `Δ_d`, lexicographically ordered, each flagged
/// interior iff every defining inequality is strict.
pub fn enumerate_delta(d: i64) -> Result<Vec<LatticeEntry>> {
    let domain = SimplexDomain::full(d)?;
    Ok(domain
        .lattice_points()
        .into_iter()
        .map(|p| LatticeEntry {
            point: p,
            interior: p.0.iter().all(|&c| c > 0) && p.total() < d,
        })
        .collect())
}

/// `p_g(d) = (d-1)(d-2)(d-3)/6`, the number of interior lattice points.
pub fn interior_lattice_count(d: i64) -> Result<i64> {
    if d < 4 {
        return Err(Error::domain(format!("interior count needs degree >= 4, got {d}")));
    }
    let prod = (d - 1)
        .checked_mul(d - 2)
        .and_then(|x| x.checked_mul(d - 3))
        .ok_or(Error::Overflow("interior lattice count"))?;
    Ok(prod / 6)
}

/// Number of lattice points of `Δ_d`, `(d+1)(d+2)(d+3)/6`.
pub fn delta_lattice_count(d: i64) -> Result<i64> {
    if d < 0 {
        return Err(Error::domain(format!("negative degree {d}")));
    }
    let prod = (d + 1)
        .checked_mul(d + 2)
        .and_then(|x| x.checked_mul(d + 3))
        .ok_or(Error::Overflow("lattice count"))?;
    Ok(prod / 6)
}

/// 3x3 integer determinant of the rows `a`, `b`, `c`.
pub fn det3(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i128 {
    let [a0, a1, a2] = a.map(i128::from);
    let [b0, b1, b2] = b.map(i128::from);
    let [c0, c1, c2] = c.map(i128::from);
    a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
}

/// Integer cross product.
pub fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// A lattice 3-simplex given by four ordered vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex3 {
    pub vertices: [LatticePoint; 4],
}

/// A triangle of lattice points, vertices sorted lexicographically.
pub type Face = [LatticePoint; 3];
/// A lattice segment, endpoints sorted lexicographically.
pub type Edge = [LatticePoint; 2];

impl Simplex3 {
    pub fn new(vertices: [LatticePoint; 4]) -> Self {
        Simplex3 { vertices }
    }

    /// Same simplex with vertices in lexicographic order.
    pub fn sorted(&self) -> Self {
        let mut v = self.vertices;
        v.sort();
        Simplex3 { vertices: v }
    }

    /// Signed determinant of the edge vectors from vertex 0.
    pub fn signed_volume(&self) -> i128 {
        let [p0, p1, p2, p3] = self.vertices;
        det3((p1 - p0).0, (p2 - p0).0, (p3 - p0).0)
    }

    pub fn translate(&self, by: LatticePoint) -> Self {
        Simplex3 { vertices: self.vertices.map(|p| p + by) }
    }

    pub fn contains_vertex(&self, p: &LatticePoint) -> bool {
        self.vertices.contains(p)
    }

    /// The four triangular faces, each sorted; face `i` omits vertex `i`.
    pub fn faces(&self) -> [Face; 4] {
        let v = self.vertices;
        let mk = |a: LatticePoint, b: LatticePoint, c: LatticePoint| {
            let mut f = [a, b, c];
            f.sort();
            f
        };
        [
            mk(v[1], v[2], v[3]),
            mk(v[0], v[2], v[3]),
            mk(v[0], v[1], v[3]),
            mk(v[0], v[1], v[2]),
        ]
    }

    /// The six edges, each sorted.
    pub fn edges(&self) -> [Edge; 6] {
        let v = self.vertices;
        let mk = |a: LatticePoint, b: LatticePoint| if a <= b { [a, b] } else { [b, a] };
        [
            mk(v[0], v[1]),
            mk(v[0], v[2]),
            mk(v[0], v[3]),
            mk(v[1], v[2]),
            mk(v[1], v[3]),
            mk(v[2], v[3]),
        ]
    }

    /// The vertex not lying on `face`, if `face` is a face of this simplex.
    pub fn opposite_vertex(&self, face: &Face) -> Option<LatticePoint> {
        if !face.iter().all(|p| self.contains_vertex(p)) {
            return None;
        }
        self.vertices.iter().copied().find(|p| !face.contains(p))
    }
}

/// `|det|` of the three edge vectors; 1 iff the simplex is unimodular,
/// 0 for degenerate simplices.
pub fn normalized_volume(s: &Simplex3) -> u128 {
    s.signed_volume().unsigned_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, z: i64) -> LatticePoint {
        LatticePoint::new(x, y, z)
    }

    #[test]
    fn delta_one_is_the_unit_simplex() {
        let pts = enumerate_delta(1).unwrap();
        let got: Vec<_> = pts.iter().map(|e| e.point).collect();
        assert_eq!(got, vec![p(0, 0, 0), p(0, 0, 1), p(0, 1, 0), p(1, 0, 0)]);
        assert!(pts.iter().all(|e| !e.interior));
    }

    #[test]
    fn degree_five_counts() {
        let pts = enumerate_delta(5).unwrap();
        assert_eq!(pts.len(), 56);
        let interior: Vec<_> = pts.iter().filter(|e| e.interior).map(|e| e.point).collect();
        assert_eq!(interior, vec![p(1, 1, 1), p(1, 1, 2), p(1, 2, 1), p(2, 1, 1)]);
    }

    #[test]
    fn zero_and_negative_degree_rejected() {
        assert!(matches!(enumerate_delta(0), Err(Error::Domain(_))));
        assert!(matches!(enumerate_delta(-3), Err(Error::Domain(_))));
        assert!(matches!(interior_lattice_count(3), Err(Error::Domain(_))));
    }

    #[test]
    fn interior_count_matches_brute_force() {
        assert_eq!(interior_lattice_count(4).unwrap(), 1);
        assert_eq!(interior_lattice_count(5).unwrap(), 4);
        assert_eq!(interior_lattice_count(7).unwrap(), 20);
        for d in 4..=12 {
            let mut brute = 0;
            for a in 0..=d {
                for b in 0..=d {
                    for c in 0..=d {
                        if a > 0 && b > 0 && c > 0 && a + b + c < d {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(interior_lattice_count(d).unwrap(), brute, "d={d}");
        }
    }

    #[test]
    fn lattice_count_binomial() {
        for d in 1..=12 {
            let brute = (0..=d)
                .flat_map(|a| (0..=d).flat_map(move |b| (0..=d).map(move |c| (a, b, c))))
                .filter(|(a, b, c)| a + b + c <= d)
                .count() as i64;
            assert_eq!(enumerate_delta(d).unwrap().len() as i64, brute);
            assert_eq!(delta_lattice_count(d).unwrap(), brute);
        }
    }

    #[test]
    fn interior_flag_agrees_with_shifted_simplex() {
        for d in 4..=10 {
            let inner = SimplexDomain::interior(d).unwrap();
            for e in enumerate_delta(d).unwrap() {
                assert_eq!(e.interior, inner.contains(&e.point), "d={d} {}", e.point);
            }
        }
        assert_eq!(SimplexDomain::interior(4).unwrap().lattice_points(), vec![p(1, 1, 1)]);
    }

    #[test]
    fn volumes() {
        let unit = Simplex3::new([p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1)]);
        assert_eq!(normalized_volume(&unit), 1);
        let scaled = Simplex3::new([p(0, 0, 0), p(2, 0, 0), p(0, 1, 0), p(0, 0, 1)]);
        assert_eq!(normalized_volume(&scaled), 2);
        let cell = Simplex3::new([p(0, 0, 0), p(1, -1, 0), p(1, 0, 0), p(0, -1, 1)]);
        assert_eq!(normalized_volume(&cell), 1);
        let flat = Simplex3::new([p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(1, 1, 0)]);
        assert_eq!(normalized_volume(&flat), 0);
    }

    #[test]
    fn faces_and_opposite_vertices() {
        let s = Simplex3::new([p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1)]);
        for (i, f) in s.faces().iter().enumerate() {
            assert_eq!(s.opposite_vertex(f), Some(s.vertices[i]));
        }
        assert_eq!(s.edges().len(), 6);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point() -> impl Strategy<Value = LatticePoint> {
            (-20i64..20, -20i64..20, -20i64..20).prop_map(|(a, b, c)| LatticePoint::new(a, b, c))
        }

        proptest! {
            #[test]
            fn volume_invariant_under_permutation_and_translation(
                a in point(), b in point(), c in point(), e in point(), shift in point(),
                perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
            ) {
                let s = Simplex3::new([a, b, c, e]);
                let permuted = Simplex3::new([0, 1, 2, 3].map(|i| s.vertices[perm[i]]));
                prop_assert_eq!(normalized_volume(&s), normalized_volume(&permuted));
                prop_assert_eq!(normalized_volume(&s), normalized_volume(&s.translate(shift)));
            }
        }
    }
}

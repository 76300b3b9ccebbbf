//! Regular unimodular subdivisions of `Δ_d` cut out by a lifting function.
//!
//! The canonical lift is the positive-definite quadratic
//! `v(m) = 4(m₁²+m₂²+m₃²) + (2m₁+2m₂+3m₃)²`. Its lower hull over `ℤ³` is
//! invariant under lattice translations, so `T_v` can be read off from the
//! six tetrahedra of the unit cube. A second, generic gift-wrapping path
//! over the lifted lattice points of `Δ_d` is kept for cross-checking and
//! for custom lifts.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{
    cross, det3, normalized_volume, Edge, Face, LatticePoint, Simplex3, SimplexDomain,
};

/// Exact rational used for supporting forms and tropical geometry.
pub type Rat = Ratio<i128>;

/// `v(m) = 4Σmᵢ² + (2m₁+2m₂+3m₃)²`, overflow-checked.
pub fn lift_value(m: &LatticePoint) -> Result<i64> {
    let [a, b, c] = m.0;
    let sq = |x: i64| x.checked_mul(x);
    let sum_sq = sq(a)
        .zip(sq(b))
        .zip(sq(c))
        .and_then(|((x, y), z)| x.checked_add(y)?.checked_add(z))
        .and_then(|s| s.checked_mul(4));
    let lin = a
        .checked_mul(2)
        .zip(b.checked_mul(2))
        .zip(c.checked_mul(3))
        .and_then(|((x, y), z)| x.checked_add(y)?.checked_add(z));
    sum_sq
        .zip(lin.and_then(sq))
        .and_then(|(s, l)| s.checked_add(l))
        .ok_or(Error::Overflow("lift value"))
}

/// Height function on lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftingFunction {
    Canonical,
    /// Explicit heights; points missing from the table are an error.
    Table(BTreeMap<LatticePoint, i64>),
}

impl LiftingFunction {
    pub fn value(&self, m: &LatticePoint) -> Result<i64> {
        match self {
            LiftingFunction::Canonical => lift_value(m),
            LiftingFunction::Table(t) => t
                .get(m)
                .copied()
                .ok_or_else(|| Error::domain(format!("lift table has no value at {m}"))),
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, LiftingFunction::Canonical)
    }
}

/// `ℓ(x) = ⟨n, x⟩ + b` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub normal: [Rat; 3],
    pub offset: Rat,
}

impl AffineForm {
    pub fn from_integers(normal: [i64; 3], offset: i64) -> Self {
        AffineForm {
            normal: normal.map(|x| Rat::from_integer(x as i128)),
            offset: Rat::from_integer(offset as i128),
        }
    }

    pub fn eval(&self, m: &LatticePoint) -> Rat {
        let mut acc = self.offset;
        for i in 0..3 {
            acc += self.normal[i] * Rat::from_integer(m.0[i] as i128);
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64; 3]) -> f64 {
        let f = |r: &Rat| *r.numer() as f64 / *r.denom() as f64;
        f(&self.offset) + (0..3).map(|i| f(&self.normal[i]) * x[i]).sum::<f64>()
    }

    /// Integer coefficients, if all are integral.
    pub fn as_integers(&self) -> Option<([i64; 3], i64)> {
        let int = |r: &Rat| {
            if r.is_integer() {
                i64::try_from(*r.numer()).ok()
            } else {
                None
            }
        };
        Some(([int(&self.normal[0])?, int(&self.normal[1])?, int(&self.normal[2])?], int(&self.offset)?))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.normal.iter().map(rat_string).collect::<Vec<_>>(),
            "b": rat_string(&self.offset),
        })
    }
}

impl std::fmt::Display for AffineForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.normal.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first && c.is_positive() {
                write!(f, "+")?;
            }
            if *c == -Rat::one() {
                write!(f, "-")?;
            } else if !c.is_one() {
                write!(f, "{c}")?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        if !self.offset.is_zero() || first {
            if !first && self.offset.is_positive() {
                write!(f, "+")?;
            }
            write!(f, "{}", self.offset)?;
        }
        Ok(())
    }
}

pub(crate) fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The unique affine form agreeing with `lift` on the four vertices,
/// solved exactly by Cramer's rule.
pub fn supporting_form(vertices: &[LatticePoint; 4], lift: &LiftingFunction) -> Result<AffineForm> {
    let heights = [
        lift.value(&vertices[0])?,
        lift.value(&vertices[1])?,
        lift.value(&vertices[2])?,
        lift.value(&vertices[3])?,
    ];
    form_through(vertices, &heights)
}

fn form_through(vertices: &[LatticePoint; 4], heights: &[i64; 4]) -> Result<AffineForm> {
    let p0 = vertices[0];
    let rows = [(vertices[1] - p0).0, (vertices[2] - p0).0, (vertices[3] - p0).0];
    let rhs: [i64; 3] = [
        heights[1].checked_sub(heights[0]).ok_or(Error::Overflow("height difference"))?,
        heights[2].checked_sub(heights[0]).ok_or(Error::Overflow("height difference"))?,
        heights[3].checked_sub(heights[0]).ok_or(Error::Overflow("height difference"))?,
    ];
    let det = det3(rows[0], rows[1], rows[2]);
    if det == 0 {
        return Err(Error::SingularSystem(*vertices));
    }
    let column_replaced = |j: usize| -> i128 {
        let mut r = rows.map(|row| row.map(i128::from));
        for i in 0..3 {
            r[i][j] = rhs[i] as i128;
        }
        det3_i128(r[0], r[1], r[2])
    };
    let normal = [0, 1, 2].map(|j| Rat::new(column_replaced(j), det));
    let mut offset = Rat::from_integer(heights[0] as i128);
    for i in 0..3 {
        offset -= normal[i] * Rat::from_integer(p0.0[i] as i128);
    }
    Ok(AffineForm { normal, offset })
}

fn det3_i128(a: [i128; 3], b: [i128; 3], c: [i128; 3]) -> i128 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Why a point failed the supporting-form test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A cell vertex where `ℓ(m) ≠ v(m)`.
    VertexMismatch,
    /// A non-vertex where `ℓ(m) ≥ v(m)`.
    NotStrictlyBelow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub point: LatticePoint,
    pub form_value: Rat,
    pub lift_value: i64,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportVerdict {
    Ok,
    Violations(Vec<Violation>),
}

impl SupportVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, SupportVerdict::Ok)
    }
}

/// Check `form` against `cell` on an explicit set of lattice points.
pub fn check_supporting_on<I>(
    form: &AffineForm,
    cell: &Simplex3,
    points: I,
    lift: &LiftingFunction,
) -> Result<SupportVerdict>
where
    I: IntoIterator<Item = LatticePoint>,
{
    let mut violations = Vec::new();
    let mut seen = BTreeSet::new();
    for p in cell.vertices.iter().copied().chain(points) {
        if !seen.insert(p) {
            continue;
        }
        let value = form.eval(&p);
        let height = lift.value(&p)?;
        let h = Rat::from_integer(height as i128);
        let kind = if cell.contains_vertex(&p) {
            (value != h).then_some(ViolationKind::VertexMismatch)
        } else {
            (value >= h).then_some(ViolationKind::NotStrictlyBelow)
        };
        if let Some(kind) = kind {
            violations.push(Violation { point: p, form_value: value, lift_value: height, kind });
        }
    }
    Ok(if violations.is_empty() { SupportVerdict::Ok } else { SupportVerdict::Violations(violations) })
}

/// Check `form` against `cell` over all of `Δ_d(ℤ)`.
pub fn check_supporting(
    form: &AffineForm,
    cell: &Simplex3,
    d: i64,
    lift: &LiftingFunction,
) -> Result<SupportVerdict> {
    let domain = SimplexDomain::full(d)?;
    check_supporting_on(form, cell, domain.lattice_points(), lift)
}

/// A 3-cell of a subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: usize,
    /// Vertices in lexicographic order.
    pub simplex: Simplex3,
    pub support: AffineForm,
}

/// Cells incident to a 2-face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceAdjacency {
    Interior(usize, usize),
    Boundary(usize),
}

impl FaceAdjacency {
    pub fn cells(&self) -> Vec<usize> {
        match *self {
            FaceAdjacency::Interior(a, b) => vec![a, b],
            FaceAdjacency::Boundary(a) => vec![a],
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, FaceAdjacency::Boundary(_))
    }
}

/// How to build the subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Translate the unit-cube pattern and clip to `Δ_d`. Canonical lift only.
    CubePattern,
    /// Gift-wrap the lower hull of the lifted points of `Δ_d`.
    LowerHull,
}

/// A certified regular unimodular subdivision of `Δ_d`.
#[derive(Clone, Debug)]
pub struct RegularSubdivision {
    degree: i64,
    lift: LiftingFunction,
    cells: Vec<Cell>,
    faces: BTreeMap<Face, FaceAdjacency>,
    index: HashMap<[LatticePoint; 4], usize>,
}

/// The six tetrahedra of the lower hull of `v` over `[0,1]³`, in the row
/// order used by [`crate::tables`].
pub const CUBE_CELLS: [[LatticePoint; 4]; 6] = {
    const P0: LatticePoint = LatticePoint::new(0, 0, 0);
    const P1: LatticePoint = LatticePoint::new(1, 0, 0);
    const P2: LatticePoint = LatticePoint::new(0, 1, 0);
    const P3: LatticePoint = LatticePoint::new(0, 0, 1);
    const P12: LatticePoint = LatticePoint::new(1, 1, 0);
    const P13: LatticePoint = LatticePoint::new(1, 0, 1);
    const P23: LatticePoint = LatticePoint::new(0, 1, 1);
    const P123: LatticePoint = LatticePoint::new(1, 1, 1);
    [
        [P0, P1, P2, P3],
        [P12, P1, P2, P3],
        [P2, P23, P12, P3],
        [P1, P13, P12, P3],
        [P3, P13, P23, P12],
        [P12, P13, P23, P123],
    ]
};

/// Build and certify `T_v` for `Δ_d`. The canonical lift uses the cube
/// pattern; custom lifts go through the lower hull.
pub fn subdivide(d: i64, lift: &LiftingFunction) -> Result<RegularSubdivision> {
    let path = if lift.is_canonical() { Construction::CubePattern } else { Construction::LowerHull };
    subdivide_with(d, lift, path)
}

pub fn subdivide_with(
    d: i64,
    lift: &LiftingFunction,
    path: Construction,
) -> Result<RegularSubdivision> {
    let domain = SimplexDomain::full(d)?;
    let simplices = match path {
        Construction::CubePattern => {
            if !lift.is_canonical() {
                return Err(Error::domain("cube pattern requires the canonical lift"));
            }
            cube_pattern_cells(&domain)
        }
        Construction::LowerHull => lower_hull_cells(&domain, lift)?,
    };
    RegularSubdivision::certify(d, lift.clone(), simplices)
}

/// Build with both paths and require identical cell sets.
pub fn cross_check(d: i64) -> Result<RegularSubdivision> {
    let lift = LiftingFunction::Canonical;
    let cube = subdivide_with(d, &lift, Construction::CubePattern)?;
    let hull = subdivide_with(d, &lift, Construction::LowerHull)?;
    let a: Vec<_> = cube.cells.iter().map(|c| c.simplex).collect();
    let b: Vec<_> = hull.cells.iter().map(|c| c.simplex).collect();
    if a != b {
        return Err(Error::Certification(format!(
            "cube pattern ({} cells) and lower hull ({} cells) disagree",
            a.len(),
            b.len()
        )));
    }
    Ok(cube)
}

fn cube_pattern_cells(domain: &SimplexDomain) -> Vec<Simplex3> {
    let d = domain.degree();
    let mut out = BTreeSet::new();
    for a in 0..d {
        for b in 0..(d - a) {
            for c in 0..(d - a - b) {
                let shift = LatticePoint::new(a, b, c);
                for pattern in CUBE_CELLS.iter() {
                    let s = Simplex3::new(*pattern).translate(shift);
                    if s.vertices.iter().all(|p| domain.contains(p)) {
                        out.insert(s.sorted());
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

fn lower_hull_cells(domain: &SimplexDomain, lift: &LiftingFunction) -> Result<Vec<Simplex3>> {
    let points = domain.lattice_points();
    let heights: Vec<i64> = points.iter().map(|p| lift.value(p)).collect::<Result<_>>()?;

    // Tests a candidate facet; returns Some(form) if every point is on or
    // above it, erroring if more than four points touch it.
    let facet = |idx: [usize; 4]| -> Result<Option<AffineForm>> {
        let verts = idx.map(|i| points[i]);
        let form = match form_through(&verts, &idx.map(|i| heights[i])) {
            Ok(f) => f,
            Err(Error::SingularSystem(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut touching = 0;
        for (p, h) in points.iter().zip(&heights) {
            let diff = Rat::from_integer(*h as i128) - form.eval(p);
            if diff.is_negative() {
                return Ok(None);
            }
            if diff.is_zero() {
                touching += 1;
            }
        }
        if touching > 4 {
            let mut cell = verts;
            cell.sort();
            return Err(Error::Degeneracy { cell, touching });
        }
        Ok(Some(form))
    };

    // Seed: a facet through the lowest lifted point.
    let lowest = (0..points.len())
        .min_by_key(|&i| (heights[i], points[i]))
        .ok_or_else(|| Error::domain("empty point set"))?;
    let others: Vec<usize> = (0..points.len()).filter(|&i| i != lowest).collect();
    let mut seed = None;
    'search: for (ia, &a) in others.iter().enumerate() {
        for (ib, &b) in others.iter().enumerate().skip(ia + 1) {
            for &c in others.iter().skip(ib + 1) {
                if facet([lowest, a, b, c])?.is_some() {
                    seed = Some([lowest, a, b, c]);
                    break 'search;
                }
            }
        }
    }
    let seed = seed.ok_or_else(|| Error::Certification("no lower facet found".into()))?;

    let key = |idx: [usize; 4]| {
        let mut s = idx;
        s.sort();
        s
    };
    let mut found: BTreeSet<[usize; 4]> = BTreeSet::new();
    let mut queue = VecDeque::new();
    found.insert(key(seed));
    queue.push_back(key(seed));
    while let Some(cell) = queue.pop_front() {
        for skip in 0..4 {
            let face: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| cell[k]).collect();
            let opposite = cell[skip];
            let f0 = points[face[0]];
            let normal = cross((points[face[1]] - f0).0, (points[face[2]] - f0).0);
            let side = |q: usize| (points[q] - f0).0.iter().zip(normal).map(|(a, b)| a * b).sum::<i64>();
            let own = side(opposite).signum();
            let candidates: Vec<usize> = (0..points.len()).filter(|&q| side(q).signum() == -own).collect();
            let Some(&first) = candidates.first() else { continue };
            let mut best = first;
            for &q in &candidates[1..] {
                let form = form_through(
                    &[points[face[0]], points[face[1]], points[face[2]], points[best]],
                    &[heights[face[0]], heights[face[1]], heights[face[2]], heights[best]],
                )?;
                if Rat::from_integer(heights[q] as i128) < form.eval(&points[q]) {
                    best = q;
                }
            }
            let next = key([face[0], face[1], face[2], best]);
            if found.contains(&next) {
                continue;
            }
            if facet(next)?.is_none() {
                return Err(Error::Certification(format!(
                    "gift wrapping produced a non-supporting cell {:?}",
                    next.map(|i| points[i])
                )));
            }
            found.insert(next);
            queue.push_back(next);
        }
    }
    let mut cells: Vec<Simplex3> =
        found.into_iter().map(|idx| Simplex3::new(idx.map(|i| points[i])).sorted()).collect();
    cells.sort();
    Ok(cells)
}

fn face_on_boundary(domain: &SimplexDomain, face: &Face) -> bool {
    let tight = face.map(|p| domain.tight_facets(&p));
    (0..4).any(|k| tight.iter().all(|t| t[k]))
}

impl RegularSubdivision {
    /// Assign ids in lexicographic order, solve supporting forms, and check
    /// every invariant of a unimodular regular subdivision of `Δ_d`.
    fn certify(d: i64, lift: LiftingFunction, simplices: Vec<Simplex3>) -> Result<Self> {
        let domain = SimplexDomain::full(d)?;
        let mut sorted: Vec<Simplex3> = simplices.into_iter().map(|s| s.sorted()).collect();
        sorted.sort();
        sorted.dedup();

        let points = domain.lattice_points();
        let heights: Vec<Rat> = points
            .iter()
            .map(|p| lift.value(p).map(|h| Rat::from_integer(h as i128)))
            .collect::<Result<_>>()?;

        let mut cells = Vec::with_capacity(sorted.len());
        let mut volume: u128 = 0;
        for (id, simplex) in sorted.into_iter().enumerate() {
            let vol = normalized_volume(&simplex);
            if vol != 1 {
                return Err(Error::Certification(format!(
                    "cell {:?} has normalized volume {vol}",
                    simplex.vertices
                )));
            }
            volume += vol;
            let support = supporting_form(&simplex.vertices, &lift)?;
            let mut touching = 0;
            for (p, h) in points.iter().zip(&heights) {
                let value = support.eval(p);
                if value > *h {
                    return Err(Error::Certification(format!(
                        "supporting form of {:?} lies above the lift at {p}",
                        simplex.vertices
                    )));
                }
                if value == *h {
                    touching += 1;
                    if !simplex.contains_vertex(p) && touching > 4 {
                        return Err(Error::Degeneracy { cell: simplex.vertices, touching });
                    }
                }
            }
            if touching != 4 {
                return Err(Error::Degeneracy { cell: simplex.vertices, touching });
            }
            cells.push(Cell { id, simplex, support });
        }

        let expected = (d as u128).pow(3);
        if volume != expected {
            return Err(Error::Certification(format!(
                "total normalized volume {volume} differs from d^3 = {expected}"
            )));
        }

        let mut incidence: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
        for c in &cells {
            for f in c.simplex.faces() {
                incidence.entry(f).or_default().push(c.id);
            }
        }
        let mut faces = BTreeMap::new();
        for (face, ids) in incidence {
            let on_boundary = face_on_boundary(&domain, &face);
            let adj = match (ids.as_slice(), on_boundary) {
                ([a], true) => FaceAdjacency::Boundary(*a),
                ([a, b], false) => FaceAdjacency::Interior(*a, *b),
                _ => {
                    return Err(Error::Certification(format!(
                        "face {face:?} is shared by {} cells (boundary: {on_boundary})",
                        ids.len()
                    )))
                }
            };
            faces.insert(face, adj);
        }

        let index = cells.iter().map(|c| (c.simplex.vertices, c.id)).collect();
        Ok(RegularSubdivision { degree: d, lift, cells, faces, index })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn lift(&self) -> &LiftingFunction {
        &self.lift
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> Option<&Cell> {
        self.cells.get(id)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn faces(&self) -> &BTreeMap<Face, FaceAdjacency> {
        &self.faces
    }

    /// Cell id for a vertex set in any order.
    pub fn find_cell(&self, vertices: &[LatticePoint; 4]) -> Option<usize> {
        let mut key = *vertices;
        key.sort();
        self.index.get(&key).copied()
    }

    pub fn domain(&self) -> SimplexDomain {
        SimplexDomain::full(self.degree).expect("degree validated at construction")
    }

    /// Edges of `T_v` with the ids of the cells containing them.
    pub fn edges(&self) -> BTreeMap<Edge, Vec<usize>> {
        let mut out: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for c in &self.cells {
            for e in c.simplex.edges() {
                out.entry(e).or_default().push(c.id);
            }
        }
        out
    }

    /// Whether `face` lies in `∂Δ_d`.
    pub fn face_on_boundary(&self, face: &Face) -> bool {
        face_on_boundary(&self.domain(), face)
    }

    pub fn edge_on_boundary(&self, edge: &Edge) -> bool {
        let domain = self.domain();
        let tight = edge.map(|p| domain.tight_facets(&p));
        (0..4).any(|k| tight[0][k] && tight[1][k])
    }

    pub fn vertex_count(&self) -> usize {
        let set: BTreeSet<LatticePoint> =
            self.cells.iter().flat_map(|c| c.simplex.vertices).collect();
        set.len()
    }

    /// JSON export; all integers are written as decimal strings.
    pub fn to_json(&self) -> Value {
        let pt = |p: &LatticePoint| p.0.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                json!({
                    "id": c.id.to_string(),
                    "vertices": c.simplex.vertices.iter().map(pt).collect::<Vec<_>>(),
                    "support": c.support.to_json(),
                })
            })
            .collect();
        let faces: Vec<Value> = self
            .faces
            .iter()
            .map(|(f, adj)| {
                json!({
                    "vertices": f.iter().map(pt).collect::<Vec<_>>(),
                    "cells": adj.cells().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "boundary": adj.is_boundary(),
                })
            })
            .collect();
        json!({
            "schema": 1,
            "d": self.degree.to_string(),
            "cells": cells,
            "faces": faces,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, z: i64) -> LatticePoint {
        LatticePoint::new(x, y, z)
    }

    #[test]
    fn lift_values_from_tables() {
        assert_eq!(lift_value(&p(0, 0, 0)).unwrap(), 0);
        assert_eq!(lift_value(&p(1, 0, 0)).unwrap(), 8);
        assert_eq!(lift_value(&p(0, 0, 1)).unwrap(), 13);
        assert_eq!(lift_value(&p(1, 1, 1)).unwrap(), 61);
        assert_eq!(lift_value(&p(0, -1, 0)).unwrap(), 8);
        assert_eq!(lift_value(&p(1, -1, 1)).unwrap(), 21);
    }

    #[test]
    fn lift_overflow_is_detected() {
        assert!(matches!(lift_value(&p(i64::MAX / 2, 0, 0)), Err(Error::Overflow(_))));
        assert!(lift_value(&p(10_000, 10_000, 10_000)).is_ok());
    }

    #[test]
    fn forms_from_table_one() {
        let lift = LiftingFunction::Canonical;
        let f = supporting_form(&CUBE_CELLS[0], &lift).unwrap();
        assert_eq!(f, AffineForm::from_integers([8, 8, 13], 0));
        assert_eq!(f.to_string(), "8x1+8x2+13x3");
        let f = supporting_form(&CUBE_CELLS[5], &lift).unwrap();
        assert_eq!(f, AffineForm::from_integers([28, 28, 37], -32));
        assert_eq!(f.to_string(), "28x1+28x2+37x3-32");
    }

    #[test]
    fn form_of_interior_cell_at_degree_five() {
        let lift = LiftingFunction::Canonical;
        let verts = [p(1, 1, 1), p(2, 1, 1), p(1, 2, 1), p(1, 1, 2)];
        // v-values 61, 105, 105, 124 solved by hand.
        let f = supporting_form(&verts, &lift).unwrap();
        assert_eq!(f, AffineForm::from_integers([44, 44, 63], -90));
        assert_eq!(f.eval(&p(1, 1, 1)), Rat::from_integer(61));
    }

    #[test]
    fn coplanar_vertices_are_singular() {
        let verts = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(1, 1, 0)];
        assert!(matches!(
            supporting_form(&verts, &LiftingFunction::Canonical),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn supporting_checks() {
        let lift = LiftingFunction::Canonical;
        let cell = Simplex3::new(CUBE_CELLS[0]);
        let f = AffineForm::from_integers([8, 8, 13], 0);
        assert_eq!(f.eval(&p(1, 1, 0)), Rat::from_integer(16));
        assert_eq!(f.eval(&p(0, 0, -1)), Rat::from_integer(-13));
        let near = [p(1, 1, 0), p(0, 0, -1)];
        assert!(check_supporting_on(&f, &cell, near, &lift).unwrap().is_ok());
        assert!(check_supporting(&f, &cell, 3, &lift).unwrap().is_ok());

        let bad = AffineForm::from_integers([9, 8, 13], 0);
        match check_supporting(&bad, &cell, 1, &lift).unwrap() {
            SupportVerdict::Violations(v) => {
                assert!(v.iter().any(|x| x.point == p(1, 0, 0)
                    && x.kind == ViolationKind::VertexMismatch
                    && x.form_value == Rat::from_integer(9)));
            }
            SupportVerdict::Ok => panic!("perturbed normal accepted"),
        }
    }

    #[test]
    fn degree_one_is_a_single_cell() {
        let sub = subdivide(1, &LiftingFunction::Canonical).unwrap();
        assert_eq!(sub.len(), 1);
        let mut expected = CUBE_CELLS[0];
        expected.sort();
        assert_eq!(sub.cells()[0].simplex.vertices, expected);
        assert!(sub.faces().values().all(|a| a.is_boundary()));
    }

    #[test]
    fn cell_counts_are_cubes() {
        for d in 1..=6 {
            let sub = subdivide(d, &LiftingFunction::Canonical).unwrap();
            assert_eq!(sub.len() as i64, d * d * d, "d={d}");
        }
    }

    #[test]
    fn hull_and_cube_paths_agree() {
        for d in 1..=5 {
            cross_check(d).unwrap();
        }
    }

    #[test]
    fn face_census_degree_five() {
        let sub = subdivide(5, &LiftingFunction::Canonical).unwrap();
        // Brute-force census over cell faces.
        let mut census: BTreeMap<Face, usize> = BTreeMap::new();
        for c in sub.cells() {
            for f in c.simplex.faces() {
                *census.entry(f).or_default() += 1;
            }
        }
        for (f, n) in census {
            let on_boundary = f.iter().all(|q| q.0[0] == 0)
                || f.iter().all(|q| q.0[1] == 0)
                || f.iter().all(|q| q.0[2] == 0)
                || f.iter().all(|q| q.total() == 5);
            assert_eq!(n, if on_boundary { 1 } else { 2 }, "{f:?}");
        }
    }

    #[test]
    fn custom_flat_lift_is_degenerate() {
        let domain = SimplexDomain::full(2).unwrap();
        let table = domain.lattice_points().into_iter().map(|q| (q, 0)).collect();
        let err = subdivide(2, &LiftingFunction::Table(table)).unwrap_err();
        assert!(matches!(err, Error::Degeneracy { .. }), "{err:?}");
    }

    #[test]
    fn custom_table_equal_to_canonical_reproduces_it() {
        let domain = SimplexDomain::full(3).unwrap();
        let table =
            domain.lattice_points().into_iter().map(|q| (q, lift_value(&q).unwrap())).collect();
        let custom = subdivide(3, &LiftingFunction::Table(table)).unwrap();
        let canon = subdivide(3, &LiftingFunction::Canonical).unwrap();
        let a: Vec<_> = custom.cells().iter().map(|c| c.simplex).collect();
        let b: Vec<_> = canon.cells().iter().map(|c| c.simplex).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let sub = subdivide(1, &LiftingFunction::Canonical).unwrap();
        let j = sub.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["d"], "1");
        assert_eq!(j["cells"][0]["support"]["n"][2], "13");
        assert_eq!(j["faces"].as_array().unwrap().len(), 4);
    }
}

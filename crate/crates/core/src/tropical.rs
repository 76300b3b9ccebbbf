//! The discrete Legendre transform `L_v(x) = max_m ⟨m,x⟩ − v(m)` and the
//! tropical hypersurface `Π_v` where the maximum is attained twice.
//!
//! `Π_v` is built combinatorially from the dual subdivision: a 3-cell of
//! `T_v` gives a vertex (the normal of its supporting form), a 2-face an
//! edge, and an edge of `T_v` a polygon. Cells dual to faces on `∂Δ_d` are
//! unbounded and carry recession rays. Geometry stays exact until a
//! bounding box is imposed for distance queries and mesh export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{cross, Edge, Face, LatticePoint, SimplexDomain};
use crate::subdivision::{rat_string, FaceAdjacency, LiftingFunction, Rat, RegularSubdivision};

/// Relative tie tolerance for floating-point argmax sets.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// The terms `(m, v(m))` over `Δ_d(ℤ)`.
#[derive(Clone, Debug)]
pub struct PLFunction {
    terms: Vec<(LatticePoint, i64)>,
}

impl PLFunction {
    pub fn new(d: i64, lift: &LiftingFunction) -> Result<Self> {
        let terms = SimplexDomain::full(d)?
            .lattice_points()
            .into_iter()
            .map(|m| lift.value(&m).map(|v| (m, v)))
            .collect::<Result<_>>()?;
        Ok(PLFunction { terms })
    }

    pub fn terms(&self) -> &[(LatticePoint, i64)] {
        &self.terms
    }

    /// Exact value and argmax set at a rational point.
    pub fn eval_exact(&self, x: &[Rat; 3]) -> (Rat, Vec<LatticePoint>) {
        let mut best: Option<Rat> = None;
        let mut arg = Vec::new();
        for (m, v) in &self.terms {
            let mut val = Rat::from_integer(-(*v as i128));
            for i in 0..3 {
                val += x[i] * Rat::from_integer(m.0[i] as i128);
            }
            match best {
                Some(b) if val < b => {}
                Some(b) if val == b => arg.push(*m),
                _ => {
                    best = Some(val);
                    arg = vec![*m];
                }
            }
        }
        (best.expect("Δ_d(ℤ) is never empty"), arg)
    }

    /// Value and argmax set at a float point; terms within
    /// `TIE_TOLERANCE·(1+|value|)` of the maximum are tied.
    pub fn eval_f64(&self, x: &[f64; 3]) -> (f64, Vec<LatticePoint>) {
        let vals: Vec<f64> = self.terms.iter().map(|(m, v)| term_value(m, *v, x)).collect();
        let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = TIE_TOLERANCE * (1.0 + best.abs());
        let arg = self
            .terms
            .iter()
            .zip(&vals)
            .filter(|(_, v)| best - **v <= tol)
            .map(|((m, _), _)| *m)
            .collect();
        (best, arg)
    }

    /// `L_v(x)` in floating point.
    pub fn value_f64(&self, x: &[f64; 3]) -> f64 {
        self.terms.iter().map(|(m, v)| term_value(m, *v, x)).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn term_value(m: &LatticePoint, v: i64, x: &[f64; 3]) -> f64 {
    m.0[0] as f64 * x[0] + m.0[1] as f64 * x[1] + m.0[2] as f64 * x[2] - v as f64
}

/// `L_v` at a rational point for the canonical lift on `Δ_d`.
pub fn legendre_eval(x: &[Rat; 3], d: i64) -> Result<(Rat, Vec<LatticePoint>)> {
    Ok(PLFunction::new(d, &LiftingFunction::Canonical)?.eval_exact(x))
}

/// Float variant of [`legendre_eval`].
pub fn legendre_eval_f64(x: &[f64; 3], d: i64) -> Result<(f64, Vec<LatticePoint>)> {
    Ok(PLFunction::new(d, &LiftingFunction::Canonical)?.eval_f64(x))
}

/// A vertex of `Π_v`, dual to a 3-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalVertex {
    pub id: usize,
    pub dual_cell: usize,
    pub dual_points: [LatticePoint; 4],
    pub point: [Rat; 3],
    /// `L_v` at the vertex.
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeGeometry {
    Segment(usize, usize),
    /// Start vertex and primitive integer direction.
    Ray(usize, [i64; 3]),
}

/// An edge of `Π_v`, dual to a 2-face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalEdge {
    pub id: usize,
    pub dual_face: Face,
    pub geometry: EdgeGeometry,
    pub bounded: bool,
}

/// A 2-cell of `Π_v`, dual to an edge of `T_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalFacet {
    pub id: usize,
    pub dual_edge: Edge,
    /// Vertex ids in boundary order.
    pub vertices: Vec<usize>,
    /// Edge ids in boundary order; for unbounded cells the first and last
    /// are the rays.
    pub edges: Vec<usize>,
    /// Ray directions leaving the first and the last vertex.
    pub rays: Option<([i64; 3], [i64; 3])>,
    pub bounded: bool,
}

/// `Π_v` as a polyhedral complex dual to `T_v`.
#[derive(Clone, Debug)]
pub struct TropicalComplex {
    degree: i64,
    pub vertices: Vec<TropicalVertex>,
    pub edges: Vec<TropicalEdge>,
    pub facets: Vec<TropicalFacet>,
}

fn primitive(v: [i64; 3]) -> [i64; 3] {
    let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g == 0 {
        v
    } else {
        v.map(|x| x / g)
    }
}

/// Direction of the ray dual to a boundary face: normal to the face,
/// pointing away from the opposite vertex of its cell.
fn boundary_ray(face: &Face, opposite: &LatticePoint) -> [i64; 3] {
    let a = (face[1] - face[0]).0;
    let b = (face[2] - face[0]).0;
    let n = primitive(cross(a, b));
    let s: i64 = (0..3).map(|i| n[i] * (opposite.0[i] - face[0].0[i])).sum();
    if s > 0 {
        n.map(|x| -x)
    } else {
        n
    }
}

/// Build `Π_v` from a certified subdivision.
pub fn build_tropical(sub: &RegularSubdivision) -> Result<TropicalComplex> {
    let vertices: Vec<TropicalVertex> = sub
        .cells()
        .iter()
        .map(|c| TropicalVertex {
            id: c.id,
            dual_cell: c.id,
            dual_points: c.simplex.vertices,
            point: c.support.normal,
            value: -c.support.offset,
        })
        .collect();

    let mut edges = Vec::with_capacity(sub.faces().len());
    let mut edge_of_face: BTreeMap<Face, usize> = BTreeMap::new();
    for (face, adj) in sub.faces() {
        let id = edges.len();
        let (geometry, bounded) = match *adj {
            FaceAdjacency::Interior(a, b) => (EdgeGeometry::Segment(a, b), true),
            FaceAdjacency::Boundary(a) => {
                let opp = sub.cells()[a]
                    .simplex
                    .opposite_vertex(face)
                    .ok_or_else(|| Error::Construction(format!("face {face:?} not in cell {a}")))?;
                (EdgeGeometry::Ray(a, boundary_ray(face, &opp)), false)
            }
        };
        edge_of_face.insert(*face, id);
        edges.push(TropicalEdge { id, dual_face: *face, geometry, bounded });
    }

    let mut facets = Vec::new();
    for (edge, cells) in sub.edges() {
        let id = facets.len();
        let facet = facet_around_edge(sub, id, &edge, &cells, &edges, &edge_of_face)?;
        facets.push(facet);
    }

    let complex = TropicalComplex { degree: sub.degree(), vertices, edges, facets };
    complex.check_duality(sub)?;
    Ok(complex)
}

/// Walk the cells around `edge` through the faces that contain it.
fn facet_around_edge(
    sub: &RegularSubdivision,
    id: usize,
    edge: &Edge,
    cells: &[usize],
    edges: &[TropicalEdge],
    edge_of_face: &BTreeMap<Face, usize>,
) -> Result<TropicalFacet> {
    let faces_with_edge = |c: usize| -> Vec<Face> {
        sub.cells()[c]
            .simplex
            .faces()
            .into_iter()
            .filter(|f| f.contains(&edge[0]) && f.contains(&edge[1]))
            .collect()
    };
    let bounded = !sub.edge_on_boundary(edge);
    let err = |msg: &str| Error::Construction(format!("edge {edge:?}: {msg}"));

    let start = if bounded {
        *cells.iter().min().ok_or_else(|| err("no incident cells"))?
    } else {
        *cells
            .iter()
            .filter(|&&c| faces_with_edge(c).iter().any(|f| sub.face_on_boundary(f)))
            .min()
            .ok_or_else(|| err("boundary edge without boundary face"))?
    };

    let mut order = vec![start];
    let mut face_order = Vec::new();
    let mut prev_face: Option<Face> = None;
    if !bounded {
        let f = *faces_with_edge(start)
            .iter()
            .filter(|f| sub.face_on_boundary(f))
            .min()
            .ok_or_else(|| err("missing start face"))?;
        face_order.push(f);
        prev_face = Some(f);
    }
    let mut current = start;
    loop {
        let next_face = faces_with_edge(current)
            .into_iter()
            .filter(|f| Some(*f) != prev_face)
            .min()
            .ok_or_else(|| err("cell has a single face through the edge"))?;
        face_order.push(next_face);
        match sub.faces()[&next_face] {
            FaceAdjacency::Boundary(_) => break,
            FaceAdjacency::Interior(a, b) => {
                let next = if a == current { b } else { a };
                if next == start {
                    break;
                }
                order.push(next);
                current = next;
                prev_face = Some(next_face);
            }
        }
        if order.len() > cells.len() {
            return Err(err("cell chain does not close"));
        }
    }
    if order.len() != cells.len() {
        return Err(err("cell chain misses incident cells"));
    }

    let edge_ids: Vec<usize> = face_order.iter().map(|f| edge_of_face[f]).collect();
    let rays = if bounded {
        None
    } else {
        let dir = |e: usize| match edges[e].geometry {
            EdgeGeometry::Ray(_, d) => Ok(d),
            _ => Err(err("end face is not a ray")),
        };
        Some((dir(edge_ids[0])?, dir(*edge_ids.last().expect("nonempty"))?))
    };
    Ok(TropicalFacet { id, dual_edge: *edge, vertices: order, edges: edge_ids, rays, bounded })
}

impl TropicalComplex {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Cell counts by dimension `(vertices, edges, facets)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.facets.len())
    }

    /// Internal consistency: vertex equalities, strict dominance at
    /// vertices, ray orientation, and containment reversal.
    fn check_duality(&self, sub: &RegularSubdivision) -> Result<()> {
        let pl = PLFunction::new(sub.degree(), sub.lift())?;
        for v in &self.vertices {
            let (val, arg) = pl.eval_exact(&v.point);
            let arg: BTreeSet<_> = arg.into_iter().collect();
            let want: BTreeSet<_> = v.dual_points.iter().copied().collect();
            if val != v.value || arg != want {
                return Err(Error::Construction(format!("vertex {} does not solve its cell", v.id)));
            }
        }
        for e in &self.edges {
            let ok = match e.geometry {
                EdgeGeometry::Segment(a, b) => {
                    let both = |f: &Face| {
                        [a, b].iter().all(|&c| f.iter().all(|p| sub.cells()[c].simplex.contains_vertex(p)))
                    };
                    both(&e.dual_face)
                }
                EdgeGeometry::Ray(a, dir) => {
                    let base = self.vertices[a].point;
                    let far = [0, 1, 2].map(|i| base[i] + Rat::from_integer(dir[i] as i128));
                    let (_, arg) = pl.eval_exact(&far);
                    let arg: BTreeSet<_> = arg.into_iter().collect();
                    arg == e.dual_face.iter().copied().collect()
                }
            };
            if !ok {
                return Err(Error::Construction(format!("edge {} is not dual to its face", e.id)));
            }
        }
        for f in &self.facets {
            for &e in &f.edges {
                let face = &self.edges[e].dual_face;
                if !(face.contains(&f.dual_edge[0]) && face.contains(&f.dual_edge[1])) {
                    return Err(Error::Construction(format!(
                        "facet {} borders edge {e} whose face misses its dual edge",
                        f.id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Edges incident to each vertex.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            match e.geometry {
                EdgeGeometry::Segment(a, b) => {
                    deg[a] += 1;
                    deg[b] += 1;
                }
                EdgeGeometry::Ray(a, _) => deg[a] += 1,
            }
        }
        deg
    }

    pub fn vertex_f64(&self, id: usize) -> [f64; 3] {
        self.vertices[id].point.map(|r| rat_f64(&r))
    }

    /// A 2-cell as a planar polygon truncated to `bbox`. Empty when the cell
    /// misses the box.
    pub fn truncated_polygon(&self, facet: &TropicalFacet, bbox: &BoundingBox) -> Vec<[f64; 3]> {
        let pts: Vec<[f64; 3]> = facet.vertices.iter().map(|&v| self.vertex_f64(v)).collect();
        let poly = match facet.rays {
            None => pts,
            Some((r0, r1)) => {
                let reach = bbox.reach(&pts);
                let mut out = Vec::with_capacity(pts.len() + 2);
                out.push(far_point(&pts[0], &r0, reach));
                out.extend_from_slice(&pts);
                out.push(far_point(pts.last().expect("nonempty"), &r1, reach));
                out
            }
        };
        clip_to_box(poly, bbox)
    }

    /// JSON dump of all cells with their dual ids.
    pub fn to_json(&self) -> Value {
        let pt = |p: &LatticePoint| p.0.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let ivec = |v: &[i64; 3]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "schema": 1,
            "d": self.degree.to_string(),
            "vertices": self.vertices.iter().map(|v| json!({
                "id": v.id.to_string(),
                "dual_cell": v.dual_cell.to_string(),
                "point": v.point.iter().map(rat_string).collect::<Vec<_>>(),
                "value": rat_string(&v.value),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| {
                let geom = match &e.geometry {
                    EdgeGeometry::Segment(a, b) => json!({"segment": [a.to_string(), b.to_string()]}),
                    EdgeGeometry::Ray(a, d) => json!({"ray": {"from": a.to_string(), "direction": ivec(d)}}),
                };
                json!({
                    "id": e.id.to_string(),
                    "dual_face": e.dual_face.iter().map(pt).collect::<Vec<_>>(),
                    "bounded": e.bounded,
                    "geometry": geom,
                })
            }).collect::<Vec<_>>(),
            "facets": self.facets.iter().map(|f| json!({
                "id": f.id.to_string(),
                "dual_edge": f.dual_edge.iter().map(pt).collect::<Vec<_>>(),
                "vertices": f.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "edges": f.edges.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "rays": f.rays.map(|(a, b)| vec![ivec(&a), ivec(&b)]),
                "bounded": f.bounded,
            })).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn rat_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn far_point(p: &[f64; 3], dir: &[i64; 3], reach: f64) -> [f64; 3] {
    let norm = dir.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
    [0, 1, 2].map(|i| p[i] + reach * dir[i] as f64 / norm)
}

/// Axis-aligned box used to truncate unbounded cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl BoundingBox {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Result<Self> {
        if (0..3).any(|i| !(min[i] <= max[i]) || !min[i].is_finite() || !max[i].is_finite()) {
            return Err(Error::domain(format!("empty or non-finite bounding box {min:?}..{max:?}")));
        }
        Ok(BoundingBox { min, max })
    }

    pub fn cube(lo: f64, hi: f64) -> Result<Self> {
        BoundingBox::new([lo; 3], [hi; 3])
    }

    /// The vertex hull of `complex` padded by a quarter of its extent plus 5.
    pub fn around(complex: &TropicalComplex) -> Self {
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for v in 0..complex.vertices.len() {
            let p = complex.vertex_f64(v);
            for i in 0..3 {
                min[i] = min[i].min(p[i]);
                max[i] = max[i].max(p[i]);
            }
        }
        let pad = (0..3).map(|i| max[i] - min[i]).fold(0.0, f64::max) * 0.25 + 5.0;
        BoundingBox { min: min.map(|x| x - pad), max: max.map(|x| x + pad) }
    }

    pub fn contains(&self, x: &[f64; 3]) -> bool {
        (0..3).all(|i| self.min[i] <= x[i] && x[i] <= self.max[i])
    }

    /// A distance that takes any of `pts` well past the box.
    fn reach(&self, pts: &[[f64; 3]]) -> f64 {
        let mut r: f64 = 0.0;
        for p in pts {
            for i in 0..3 {
                r = r.max((p[i] - self.min[i]).abs()).max((p[i] - self.max[i]).abs());
            }
        }
        4.0 * (r + 1.0)
    }
}

/// Sutherland–Hodgman against the six faces of the box.
fn clip_to_box(mut poly: Vec<[f64; 3]>, bbox: &BoundingBox) -> Vec<[f64; 3]> {
    for axis in 0..3 {
        for (bound, keep_below) in [(bbox.min[axis], false), (bbox.max[axis], true)] {
            if poly.is_empty() {
                return poly;
            }
            let inside = |p: &[f64; 3]| if keep_below { p[axis] <= bound } else { p[axis] >= bound };
            let mut out = Vec::with_capacity(poly.len() + 1);
            for k in 0..poly.len() {
                let a = poly[k];
                let b = poly[(k + 1) % poly.len()];
                let (ia, ib) = (inside(&a), inside(&b));
                if ia {
                    out.push(a);
                }
                if ia != ib {
                    let s = (bound - a[axis]) / (b[axis] - a[axis]);
                    let mut q = [0.0; 3];
                    for i in 0..3 {
                        q[i] = a[i] + s * (b[i] - a[i]);
                    }
                    q[axis] = bound;
                    out.push(q);
                }
            }
            poly = out;
        }
    }
    poly
}

fn sub3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn segment_distance(x: &[f64; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let ab = sub3(b, a);
    let len2 = dot3(&ab, &ab);
    let s = if len2 == 0.0 { 0.0 } else { (dot3(&sub3(x, a), &ab) / len2).clamp(0.0, 1.0) };
    let p = [a[0] + s * ab[0], a[1] + s * ab[1], a[2] + s * ab[2]];
    dot3(&sub3(x, &p), &sub3(x, &p)).sqrt()
}

/// Euclidean distance from `x` to a convex planar polygon with unit
/// normal `n`.
fn polygon_distance(x: &[f64; 3], poly: &[[f64; 3]], n: &[f64; 3]) -> f64 {
    match poly.len() {
        0 => return f64::INFINITY,
        1 => return dot3(&sub3(x, &poly[0]), &sub3(x, &poly[0])).sqrt(),
        2 => return segment_distance(x, &poly[0], &poly[1]),
        _ => {}
    }
    let h = dot3(&sub3(x, &poly[0]), n);
    let proj = [x[0] - h * n[0], x[1] - h * n[1], x[2] - h * n[2]];
    let mut sign = 0.0;
    let mut inside = true;
    for k in 0..poly.len() {
        let a = &poly[k];
        let b = &poly[(k + 1) % poly.len()];
        let s = dot3(&cross3(&sub3(b, a), &sub3(&proj, a)), n);
        if s.abs() < 1e-12 {
            continue;
        }
        if sign == 0.0 {
            sign = s.signum();
        } else if s.signum() != sign {
            inside = false;
            break;
        }
    }
    if inside {
        return h.abs();
    }
    (0..poly.len())
        .map(|k| segment_distance(x, &poly[k], &poly[(k + 1) % poly.len()]))
        .fold(f64::INFINITY, f64::min)
}

/// Distance from `x` to `Π_v ∩ bbox`.
pub fn distance_to_tropical(x: &[f64; 3], complex: &TropicalComplex, bbox: &BoundingBox) -> Result<f64> {
    if complex.facets.is_empty() {
        return Err(Error::domain("tropical complex has no 2-cells"));
    }
    if !bbox.contains(x) {
        return Err(Error::domain(format!("point {x:?} outside bounding box")));
    }
    Ok(complex
        .facets
        .iter()
        .map(|f| {
            let poly = complex.truncated_polygon(f, bbox);
            let n = facet_unit_normal(f);
            polygon_distance(x, &poly, &n)
        })
        .fold(f64::INFINITY, f64::min))
}

/// Precomputed truncated polygons for repeated distance queries.
#[derive(Clone, Debug)]
pub struct DistanceIndex {
    bbox: BoundingBox,
    polygons: Vec<(Vec<[f64; 3]>, [f64; 3])>,
}

impl DistanceIndex {
    pub fn new(complex: &TropicalComplex, bbox: BoundingBox) -> Result<Self> {
        if complex.facets.is_empty() {
            return Err(Error::domain("tropical complex has no 2-cells"));
        }
        let polygons = complex
            .facets
            .iter()
            .map(|f| (complex.truncated_polygon(f, &bbox), facet_unit_normal(f)))
            .filter(|(p, _)| !p.is_empty())
            .collect();
        Ok(DistanceIndex { bbox, polygons })
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn distance(&self, x: &[f64; 3]) -> Result<f64> {
        if !self.bbox.contains(x) {
            return Err(Error::domain(format!("point {x:?} outside bounding box")));
        }
        Ok(self.polygons.iter().map(|(p, n)| polygon_distance(x, p, n)).fold(f64::INFINITY, f64::min))
    }
}

/// The 2-cell dual to `[a, b]` lies in the plane `⟨b − a, x⟩ = v(b) − v(a)`.
fn facet_unit_normal(f: &TropicalFacet) -> [f64; 3] {
    let n = (f.dual_edge[1] - f.dual_edge[0]).to_f64();
    let len = dot3(&n, &n).sqrt();
    n.map(|c| c / len)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    /// From a file extension; defaults to OFF.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("obj") => MeshFormat::Obj,
            _ => MeshFormat::Off,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshSummary {
    pub vertices: usize,
    pub faces: usize,
}

/// Indexed polygon mesh of the truncated 2-skeleton.
#[derive(Clone, Debug, Default)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn from_complex(complex: &TropicalComplex, bbox: &BoundingBox) -> Self {
        let mut mesh = Mesh::default();
        let mut index: BTreeMap<[i64; 3], usize> = BTreeMap::new();
        for f in &complex.facets {
            let poly = complex.truncated_polygon(f, bbox);
            let mut face: Vec<usize> = Vec::with_capacity(poly.len());
            for p in poly {
                let key = p.map(|c| (c * 1e6).round() as i64);
                let id = *index.entry(key).or_insert_with(|| {
                    mesh.vertices.push(p);
                    mesh.vertices.len() - 1
                });
                if face.last() != Some(&id) && face.first() != Some(&id) {
                    face.push(id);
                }
            }
            if face.len() >= 3 {
                mesh.faces.push(face);
            }
        }
        mesh
    }

    pub fn to_off(&self) -> String {
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.faces.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{} {} {}", fmt_coord(v[0]), fmt_coord(v[1]), fmt_coord(v[2]));
        }
        for f in &self.faces {
            let _ = write!(s, "{}", f.len());
            for i in f {
                let _ = write!(s, " {i}");
            }
            s.push('\n');
        }
        s
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", fmt_coord(v[0]), fmt_coord(v[1]), fmt_coord(v[2]));
        }
        for f in &self.faces {
            s.push('f');
            for i in f {
                let _ = write!(s, " {}", i + 1);
            }
            s.push('\n');
        }
        s
    }

    /// Parse an OFF file as written by [`Mesh::to_off`].
    pub fn parse_off(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Numeric(format!("malformed OFF: {m}"));
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("OFF") {
            return Err(bad("missing header"));
        }
        let counts: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing counts"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("count")))
            .collect::<Result<_>>()?;
        if counts.len() < 2 {
            return Err(bad("counts line"));
        }
        let mut mesh = Mesh::default();
        for _ in 0..counts[0] {
            let c: Vec<f64> = lines
                .next()
                .ok_or_else(|| bad("vertex"))?
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("coordinate")))
                .collect::<Result<_>>()?;
            if c.len() != 3 {
                return Err(bad("vertex arity"));
            }
            mesh.vertices.push([c[0], c[1], c[2]]);
        }
        for _ in 0..counts[1] {
            let f: Vec<usize> = lines
                .next()
                .ok_or_else(|| bad("face"))?
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("index")))
                .collect::<Result<_>>()?;
            if f.is_empty() || f[0] != f.len() - 1 || f[1..].iter().any(|&i| i >= mesh.vertices.len()) {
                return Err(bad("face record"));
            }
            mesh.faces.push(f[1..].to_vec());
        }
        Ok(mesh)
    }
}

fn fmt_coord(x: f64) -> String {
    let s = format!("{:.9}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Write the truncated 2-skeleton as OFF or OBJ (by extension).
pub fn export_mesh(complex: &TropicalComplex, bbox: &BoundingBox, path: &Path) -> Result<MeshSummary> {
    let mesh = Mesh::from_complex(complex, bbox);
    let text = match MeshFormat::from_path(path) {
        MeshFormat::Off => mesh.to_off(),
        MeshFormat::Obj => mesh.to_obj(),
    };
    fs::write(path, text)?;
    Ok(MeshSummary { vertices: mesh.vertices.len(), faces: mesh.faces.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::subdivide;

    fn r(x: i64) -> Rat {
        Rat::from_integer(x as i128)
    }

    fn complex(d: i64) -> TropicalComplex {
        build_tropical(&subdivide(d, &LiftingFunction::Canonical).unwrap()).unwrap()
    }

    #[test]
    fn legendre_examples() {
        let (v, arg) = legendre_eval(&[r(0), r(0), r(0)], 3).unwrap();
        assert_eq!((v, arg), (r(0), vec![LatticePoint::ORIGIN]));
        let (v, arg) = legendre_eval(&[r(8), r(8), r(13)], 1).unwrap();
        assert_eq!(v, r(0));
        assert_eq!(arg.len(), 4);
        let (v, arg) = legendre_eval(&[r(0), r(0), r(100)], 5).unwrap();
        assert_eq!((v, arg), (r(192), vec![LatticePoint::new(0, 0, 4)]));
    }

    #[test]
    fn degree_one_complex() {
        let c = complex(1);
        assert_eq!(c.counts(), (1, 4, 6));
        assert_eq!(c.vertices[0].point, [r(8), r(8), r(13)]);
        assert!(c.edges.iter().all(|e| !e.bounded));
        assert!(c.facets.iter().all(|f| !f.bounded));
        let dirs: BTreeSet<[i64; 3]> = c
            .edges
            .iter()
            .map(|e| match e.geometry {
                EdgeGeometry::Ray(_, d) => d,
                _ => unreachable!(),
            })
            .collect();
        let want: BTreeSet<[i64; 3]> =
            [[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 1]].into_iter().collect();
        assert_eq!(dirs, want);
    }

    #[test]
    fn duality_counts_and_boundedness() {
        for d in 1..=5 {
            let sub = subdivide(d, &LiftingFunction::Canonical).unwrap();
            let c = build_tropical(&sub).unwrap();
            assert_eq!(c.vertices.len(), sub.len());
            assert_eq!(c.edges.len(), sub.faces().len());
            assert_eq!(c.facets.len(), sub.edges().len());
            for e in &c.edges {
                assert_eq!(e.bounded, !sub.face_on_boundary(&e.dual_face));
            }
            for f in &c.facets {
                assert_eq!(f.bounded, !sub.edge_on_boundary(&f.dual_edge));
            }
            assert!(c.vertex_degrees().iter().all(|&k| k == 4));
        }
    }

    #[test]
    fn distance_examples() {
        let c = complex(1);
        let bbox = BoundingBox::cube(-20.0, 40.0).unwrap();
        assert!(distance_to_tropical(&[8.0, 8.0, 13.0], &c, &bbox).unwrap() < 1e-12);
        let (_, arg) = legendre_eval(&[r(8), r(8), r(12)], 1).unwrap();
        assert_eq!(arg.len(), 3);
        assert!(distance_to_tropical(&[8.0, 8.0, 12.0], &c, &bbox).unwrap() < 1e-12);
        let (_, arg) = legendre_eval(&[r(9), r(8), r(13)], 1).unwrap();
        assert_eq!(arg, vec![LatticePoint::new(1, 0, 0)]);
        let dist = distance_to_tropical(&[9.0, 8.0, 13.0], &c, &bbox).unwrap();
        assert!((dist - 0.5f64.sqrt()).abs() < 1e-12, "{dist}");
        assert!(distance_to_tropical(&[50.0, 0.0, 0.0], &c, &bbox).is_err());
    }

    #[test]
    fn empty_bbox_rejected() {
        assert!(BoundingBox::new([1.0, 0.0, 0.0], [0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn degree_one_mesh() {
        let c = complex(1);
        let bbox = BoundingBox::cube(-20.0, 40.0).unwrap();
        let mesh = Mesh::from_complex(&c, &bbox);
        assert_eq!(mesh.faces.len(), 6);
        let interior: Vec<_> = mesh
            .vertices
            .iter()
            .filter(|p| p.iter().all(|&x| x > -20.0 && x < 40.0))
            .collect();
        assert_eq!(interior, vec![&[8.0, 8.0, 13.0]]);
    }
}

//! Pair-of-pants bookkeeping on `T_v`.
//!
//! `T^o` collects the cells inside `Δ_d^o` together with one flap per
//! 2-face of `∂Δ_d^o`. Each interior lattice point `m` owns a K3 block of
//! the cells in `m − (1,1,1) + Δ₄`. The graph `B` glues one `K₄` per cell
//! of `T^o` along shared 2-faces, and `X₀` lists one projective plane with
//! four marked lines per cell of `T^o`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{Face, LatticePoint, SimplexDomain};
use crate::subdivision::{subdivide, LiftingFunction, RegularSubdivision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CellClass {
    /// All vertices in `Δ_d^o`.
    Interior,
    /// Outside `Δ_d^o` and sharing a 2-face with `∂Δ_d^o`.
    Flap,
    Other,
}

#[derive(Clone, Debug)]
pub struct CellClassification {
    pub degree: i64,
    /// Class of each cell, indexed by cell id.
    pub classes: Vec<CellClass>,
    pub interior: Vec<usize>,
    /// Flap cell id and the 2-face of `∂Δ_d^o` it is attached to.
    pub flaps: Vec<(usize, Face)>,
}

impl CellClassification {
    /// Cell ids of `T^o`, sorted.
    pub fn t_o(&self) -> Vec<usize> {
        let mut ids: Vec<usize> =
            self.interior.iter().copied().chain(self.flaps.iter().map(|(c, _)| *c)).collect();
        ids.sort_unstable();
        ids
    }
}

fn face_in_interior_boundary(inner: &SimplexDomain, face: &Face) -> bool {
    if !face.iter().all(|p| inner.contains(p)) {
        return false;
    }
    let tight = face.map(|p| inner.tight_facets(&p));
    (0..4).any(|k| tight.iter().all(|t| t[k]))
}

/// Split the cells of `sub` into interior, flap and other.
pub fn classify_cells(sub: &RegularSubdivision) -> Result<CellClassification> {
    let d = sub.degree();
    if d < 5 {
        return Err(Error::domain(format!("pants classification needs d >= 5, got {d}")));
    }
    let inner = SimplexDomain::interior(d)?;
    let mut classes = vec![CellClass::Other; sub.len()];
    let mut interior = Vec::new();
    for c in sub.cells() {
        if c.simplex.vertices.iter().all(|p| inner.contains(p)) {
            classes[c.id] = CellClass::Interior;
            interior.push(c.id);
        }
    }
    let mut flaps = Vec::new();
    for (face, adj) in sub.faces() {
        if !face_in_interior_boundary(&inner, face) {
            continue;
        }
        let outside: Vec<usize> =
            adj.cells().into_iter().filter(|&c| classes[c] != CellClass::Interior).collect();
        match outside.as_slice() {
            [c] => {
                if classes[*c] == CellClass::Flap {
                    return Err(Error::LemmaViolation(format!(
                        "cell {c} is attached to more than one 2-face of the interior boundary"
                    )));
                }
                classes[*c] = CellClass::Flap;
                flaps.push((*c, *face));
            }
            _ => {
                return Err(Error::LemmaViolation(format!(
                    "2-face {face:?} of the interior boundary has {} outside cells",
                    outside.len()
                )))
            }
        }
    }
    flaps.sort();
    Ok(CellClassification { degree: d, classes, interior, flaps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K3Block {
    pub m: LatticePoint,
    pub cells: BTreeSet<usize>,
}

#[derive(Clone, Debug)]
pub struct K3Report {
    pub blocks: Vec<K3Block>,
    /// Whether `⋃_m ((1,1,1) − m + (T^m ∖ T^o))` equals the cells of `Δ₄`.
    pub union_matches: bool,
    /// Whether each block is a translate of the full `Δ₄` subdivision.
    pub blocks_are_translates: bool,
}

/// Blocks `T^m` and the union identity; a failed identity is an error.
pub fn k3_blocks(sub: &RegularSubdivision) -> Result<K3Report> {
    let cls = classify_cells(sub)?;
    let t_o: BTreeSet<usize> = cls.t_o().into_iter().collect();
    let base: BTreeSet<[LatticePoint; 4]> = subdivide(4, &LiftingFunction::Canonical)?
        .cells()
        .iter()
        .map(|c| c.simplex.vertices)
        .collect();
    let delta4 = SimplexDomain::full(4)?;

    let mut blocks = Vec::new();
    let mut union = BTreeSet::new();
    let mut translates = true;
    for m in SimplexDomain::interior(sub.degree())?.lattice_points() {
        let shift = LatticePoint::ONES - m;
        let mut cells = BTreeSet::new();
        let mut shifted = BTreeSet::new();
        for c in sub.cells() {
            let moved = c.simplex.translate(shift).sorted();
            if moved.vertices.iter().all(|p| delta4.contains(p)) {
                cells.insert(c.id);
                shifted.insert(moved.vertices);
                if !t_o.contains(&c.id) {
                    union.insert(moved.vertices);
                }
            }
        }
        translates &= shifted == base;
        blocks.push(K3Block { m, cells });
    }
    let report = K3Report { blocks, union_matches: union == base, blocks_are_translates: translates };
    if !report.union_matches {
        return Err(Error::LemmaViolation("K3 block union differs from the cells of Δ₄".into()));
    }
    Ok(report)
}

/// The multigraph `B`: one vertex per distinct 2-face of a `T^o` cell, one
/// `K₄` per cell.
#[derive(Clone, Debug)]
pub struct PantsGraph {
    pub vertices: Vec<Face>,
    /// Edges as vertex-index pairs with the cell that contributes them.
    pub edges: Vec<(usize, usize, usize)>,
}

impl PantsGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b, _) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Degree value to multiplicity.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for k in self.degrees() {
            *h.entry(k).or_insert(0) += 1;
        }
        h
    }

    pub fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for &(a, b, _) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps
    }

    /// Graphviz rendering; vertices are labelled by their 2-face.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph B {\n");
        for (i, f) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{} {} {}\"];", f[0], f[1], f[2]);
        }
        for &(a, b, c) in &self.edges {
            let _ = writeln!(s, "  v{a} -- v{b} [label=\"{c}\"];");
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_pants_graph(cls: &CellClassification, sub: &RegularSubdivision) -> PantsGraph {
    let mut index: BTreeMap<Face, usize> = BTreeMap::new();
    for id in cls.t_o() {
        for f in sub.cells()[id].simplex.faces() {
            index.entry(f).or_insert(0);
        }
    }
    let vertices: Vec<Face> = index.keys().copied().collect();
    for (i, f) in vertices.iter().enumerate() {
        index.insert(*f, i);
    }
    let mut edges = Vec::new();
    for id in cls.t_o() {
        let faces = sub.cells()[id].simplex.faces();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((index[&faces[a]], index[&faces[b]], id));
            }
        }
    }
    PantsGraph { vertices, edges }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentSource {
    /// A 3-cell inside `Δ_d^o`.
    Cell(usize),
    /// A 2-cell of `∂Δ_d^o` and the interior cell containing it.
    BoundaryFace(Face, usize),
}

/// One `CP²` component of `X₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X0Component {
    pub source: ComponentSource,
    /// Coordinate labels; for a boundary face the fourth label is the
    /// interior cell's vertex off the face, which vanishes on the component.
    pub labels: [LatticePoint; 4],
    pub relation: String,
    /// The four lines whose complement is a pair of pants.
    pub lines: [String; 4],
}

#[derive(Clone, Debug)]
pub struct X0Model {
    pub components: Vec<X0Component>,
}

fn z(p: &LatticePoint) -> String {
    format!("Z{p}")
}

pub fn build_x0(cls: &CellClassification, sub: &RegularSubdivision) -> Result<X0Model> {
    if cls.degree < 5 {
        return Err(Error::domain(format!("X0 needs d >= 5, got {}", cls.degree)));
    }
    let inner = SimplexDomain::interior(cls.degree)?;
    let mut components = Vec::new();
    for &id in &cls.interior {
        let labels = sub.cells()[id].simplex.vertices;
        let relation = format!("{}=0", labels.iter().map(z).collect::<Vec<_>>().join("+"));
        let lines = labels.map(|p| format!("{}=0", z(&p)));
        components.push(X0Component { source: ComponentSource::Cell(id), labels, relation, lines });
    }
    for (face, adj) in sub.faces() {
        if !face_in_interior_boundary(&inner, face) {
            continue;
        }
        let cell = adj
            .cells()
            .into_iter()
            .find(|&c| cls.classes[c] == CellClass::Interior)
            .ok_or_else(|| Error::LemmaViolation(format!("face {face:?} has no interior cell")))?;
        let off = sub.cells()[cell]
            .simplex
            .opposite_vertex(face)
            .ok_or_else(|| Error::LemmaViolation(format!("face {face:?} not in cell {cell}")))?;
        let labels = [face[0], face[1], face[2], off];
        let relation = format!("{}=0", z(&off));
        let lines = [
            format!("{}=0", z(&face[0])),
            format!("{}=0", z(&face[1])),
            format!("{}=0", z(&face[2])),
            format!("{}+{}+{}=0", z(&face[0]), z(&face[1]), z(&face[2])),
        ];
        components.push(X0Component {
            source: ComponentSource::BoundaryFace(*face, cell),
            labels,
            relation,
            lines,
        });
    }
    for c in &components {
        let distinct: BTreeSet<&String> = c.lines.iter().collect();
        if distinct.len() != 4 {
            return Err(Error::LemmaViolation(format!("component {:?} lacks 4 distinct lines", c.source)));
        }
    }
    Ok(X0Model { components })
}

/// Everything the `pants` command reports for one degree.
#[derive(Clone, Debug)]
pub struct PantsReport {
    pub classification: CellClassification,
    pub k3: K3Report,
    pub graph: PantsGraph,
    pub x0: X0Model,
}

pub fn pants_report(sub: &RegularSubdivision) -> Result<PantsReport> {
    let classification = classify_cells(sub)?;
    let k3 = k3_blocks(sub)?;
    let graph = build_pants_graph(&classification, sub);
    let x0 = build_x0(&classification, sub)?;
    Ok(PantsReport { classification, k3, graph, x0 })
}

impl PantsReport {
    pub fn to_json(&self) -> Value {
        let c = &self.classification;
        let pt = |p: &LatticePoint| p.0.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let ids = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "schema": 1,
            "d": c.degree.to_string(),
            "t_o": {
                "count": c.t_o().len().to_string(),
                "interior": c.interior.len().to_string(),
                "flap": c.flaps.len().to_string(),
                "cell_ids": ids(&mut c.t_o().into_iter()),
            },
            "k3_blocks": self.k3.blocks.iter().map(|b| json!({
                "m": pt(&b.m),
                "size": b.cells.len().to_string(),
            })).collect::<Vec<_>>(),
            "k3_union_matches": self.k3.union_matches,
            "k3_blocks_are_translates": self.k3.blocks_are_translates,
            "graph_B": {
                "vertices": self.graph.vertices.len().to_string(),
                "edges": self.graph.edges.len().to_string(),
                "degrees": self.graph.degree_histogram().iter()
                    .map(|(k, n)| (k.to_string(), n.to_string()))
                    .collect::<BTreeMap<_, _>>(),
                "components": self.graph.component_count().to_string(),
            },
            "x0": {
                "components": self.x0.components.len().to_string(),
                "planes": self.x0.components.iter().map(|x| json!({
                    "labels": x.labels.iter().map(pt).collect::<Vec<_>>(),
                    "relation": x.relation,
                    "lines": x.lines,
                })).collect::<Vec<_>>(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(d: i64) -> RegularSubdivision {
        subdivide(d, &LiftingFunction::Canonical).unwrap()
    }

    #[test]
    fn degree_five_classification() {
        let s = sub(5);
        let c = classify_cells(&s).unwrap();
        assert_eq!((c.interior.len(), c.flaps.len()), (1, 4));
        let cell = s.cells()[c.interior[0]].simplex.vertices;
        assert_eq!(
            cell,
            [
                LatticePoint::new(1, 1, 1),
                LatticePoint::new(1, 1, 2),
                LatticePoint::new(1, 2, 1),
                LatticePoint::new(2, 1, 1)
            ]
        );
    }

    #[test]
    fn small_degree_rejected() {
        assert!(classify_cells(&sub(4)).is_err());
    }

    #[test]
    fn degree_five_graph() {
        let s = sub(5);
        let c = classify_cells(&s).unwrap();
        let g = build_pants_graph(&c, &s);
        assert_eq!(g.vertices.len(), 16);
        assert_eq!(g.edges.len(), 30);
        assert_eq!(g.degree_histogram(), BTreeMap::from([(3, 12), (6, 4)]));
        assert_eq!(g.component_count(), 1);
        assert!(g.to_dot().starts_with("graph B {"));
    }

    #[test]
    fn degree_five_blocks_and_x0() {
        let s = sub(5);
        let k = k3_blocks(&s).unwrap();
        assert_eq!(k.blocks.len(), 4);
        assert!(k.blocks.iter().all(|b| b.cells.len() == 64));
        assert!(k.union_matches && k.blocks_are_translates);
        let x0 = build_x0(&classify_cells(&s).unwrap(), &s).unwrap();
        assert_eq!(x0.components.len(), 5);
    }
}

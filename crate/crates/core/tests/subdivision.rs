use std::collections::BTreeSet;

use proptest::prelude::*;
use tropical_pants::lattice::{delta_lattice_count, normalized_volume, LatticePoint, Simplex3, SimplexDomain};
use tropical_pants::subdivision::{cross_check, lift_value, subdivide, FaceAdjacency, LiftingFunction};

fn cell_set(d: i64) -> BTreeSet<Simplex3> {
    subdivide(d, &LiftingFunction::Canonical).unwrap().cells().iter().map(|c| c.simplex.sorted()).collect()
}

#[test]
fn cube_construction_agrees_with_lower_hull() {
    for d in 1..=4 {
        let hull: BTreeSet<Simplex3> = cross_check(d).unwrap().cells().iter().map(|c| c.simplex.sorted()).collect();
        assert_eq!(hull, cell_set(d), "d={d}");
    }
}

#[test]
fn counts_volumes_and_face_sharing() {
    for d in 1..=6 {
        let sub = subdivide(d, &LiftingFunction::Canonical).unwrap();
        assert_eq!(sub.len() as i64, d * d * d);
        assert!(sub.cells().iter().all(|c| normalized_volume(&c.simplex) == 1));
        assert_eq!(sub.vertex_count() as i64, delta_lattice_count(d).unwrap());
        for (face, adj) in sub.faces() {
            match adj {
                FaceAdjacency::Boundary(_) => assert!(sub.face_on_boundary(face)),
                FaceAdjacency::Interior(a, b) => {
                    assert_ne!(a, b);
                    assert!(!sub.face_on_boundary(face));
                }
            }
        }
    }
}

#[test]
fn supporting_forms_are_strict_on_every_other_point() {
    let sub = subdivide(4, &LiftingFunction::Canonical).unwrap();
    let pts = SimplexDomain::full(4).unwrap().lattice_points();
    for c in sub.cells() {
        for p in &pts {
            let on = c.simplex.contains_vertex(p);
            let form = c.support.eval(p);
            let v = num_rational::Ratio::from_integer(lift_value(p).unwrap() as i128);
            if on {
                assert_eq!(form, v);
            } else {
                assert!(form < v, "cell {:?} at {p}", c.simplex.vertices);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_invariance(d in 2i64..=6, pick in any::<prop::sample::Index>(), shift in prop::array::uniform3(-2i64..=2)) {
        let cells = cell_set(d);
        let all: Vec<&Simplex3> = cells.iter().collect();
        let cell = all[pick.index(all.len())];
        let moved = cell.translate(LatticePoint(shift)).sorted();
        let dom = SimplexDomain::full(d).unwrap();
        if moved.vertices.iter().all(|p| dom.contains(p)) {
            prop_assert!(cells.contains(&moved));
        }
    }

    #[test]
    fn restriction_compatibility(d in 2i64..=6, smaller in 1i64..=5) {
        prop_assume!(smaller < d);
        let small = SimplexDomain::full(smaller).unwrap();
        let restricted: BTreeSet<Simplex3> = cell_set(d)
            .into_iter()
            .filter(|c| c.vertices.iter().all(|p| small.contains(p)))
            .collect();
        prop_assert_eq!(restricted, cell_set(smaller));
    }
}

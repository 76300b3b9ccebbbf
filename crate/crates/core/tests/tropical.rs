use proptest::prelude::*;
use tropical_pants::subdivision::{subdivide, LiftingFunction};
use tropical_pants::tropical::{build_tropical, BoundingBox, DistanceIndex, Mesh, PLFunction, TropicalComplex};

fn complex(d: i64) -> TropicalComplex {
    build_tropical(&subdivide(d, &LiftingFunction::Canonical).unwrap()).unwrap()
}

fn ties(d: i64, x: &[f64; 3]) -> usize {
    PLFunction::new(d, &LiftingFunction::Canonical).unwrap().eval_f64(x).1.len()
}

#[test]
fn duality_counts() {
    for d in 1..=6 {
        let sub = subdivide(d, &LiftingFunction::Canonical).unwrap();
        let c = complex(d);
        let (v, e, f) = c.counts();
        assert_eq!(v, sub.len());
        assert_eq!(e, sub.faces().len());
        assert_eq!(f, sub.edges().len());
        let bounded = c.facets.iter().filter(|f| f.bounded).count();
        let interior_edges = sub.edges().keys().filter(|e| !sub.edge_on_boundary(e)).count();
        assert_eq!(bounded, interior_edges);
    }
}

#[test]
fn mesh_round_trip() {
    let c = complex(2);
    let bbox = BoundingBox::around(&c);
    let mesh = Mesh::from_complex(&c, &bbox);
    let back = Mesh::parse_off(&mesh.to_off()).unwrap();
    assert_eq!(back.faces, mesh.faces);
    assert_eq!(back.vertices.len(), mesh.vertices.len());
    assert!(mesh.to_obj().lines().filter(|l| l.starts_with("f ")).count() == mesh.faces.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn interior_of_a_two_cell_ties_exactly_two_terms(
        d in 1i64..=4,
        pick in any::<prop::sample::Index>(),
        w in prop::collection::vec(0.05f64..1.0, 3..12),
    ) {
        let c = complex(d);
        let facet = &c.facets[pick.index(c.facets.len())];
        let bbox = BoundingBox::around(&c);
        let poly = c.truncated_polygon(facet, &bbox);
        prop_assume!(poly.len() >= 3);
        let total: f64 = poly.iter().enumerate().map(|(i, _)| w[i % w.len()]).sum();
        let mut x = [0.0; 3];
        for (i, p) in poly.iter().enumerate() {
            for k in 0..3 {
                x[k] += w[i % w.len()] / total * p[k];
            }
        }
        prop_assert_eq!(ties(d, &x), 2);
        prop_assert!(DistanceIndex::new(&c, bbox).unwrap().distance(&x).unwrap() < 1e-6);
    }

    #[test]
    fn distance_vanishes_exactly_on_ties(d in 1i64..=3, x in prop::array::uniform3(-20.0f64..40.0)) {
        let c = complex(d);
        let idx = DistanceIndex::new(&c, BoundingBox::cube(-200.0, 200.0).unwrap()).unwrap();
        let dist = idx.distance(&x).unwrap();
        let n = ties(d, &x);
        if dist > 1e-6 {
            prop_assert_eq!(n, 1);
        }
        if n >= 2 {
            prop_assert!(dist < 1e-6);
        }
    }
}

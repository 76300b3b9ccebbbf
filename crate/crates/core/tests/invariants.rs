use tropical_pants::invariants::{compute_invariants, consistency_checks};
use tropical_pants::lattice::interior_lattice_count;
use tropical_pants::pants::classify_cells;
use tropical_pants::subdivision::{subdivide, LiftingFunction};

#[test]
fn quintic_against_betti_numbers() {
    // b₂⁺ = 2p_g + 1 and b₂ = χ − 2 for a simply connected surface.
    let (b_plus, b_minus) = (9, 44);
    let i = compute_invariants(5).unwrap();
    assert_eq!(i.tau, b_plus - b_minus);
    assert_eq!(i.chi, 2 + b_plus + b_minus);
    assert_eq!(2 * i.p_g + 1, b_plus);
}

#[test]
fn genus_is_the_interior_point_count() {
    for d in 5..=20 {
        assert_eq!(compute_invariants(d).unwrap().p_g, interior_lattice_count(d).unwrap());
    }
}

#[test]
fn euler_number_from_noether() {
    for d in 5..=50 {
        let i = compute_invariants(d).unwrap();
        assert_eq!(i.chi, 12 * (1 + i.p_g) - i.k2, "d={d}");
        let y = i.yamabe * i.yamabe;
        let want = 32.0 * std::f64::consts::PI.powi(2) * i.k2 as f64;
        assert!((y - want).abs() <= 1e-12 * want);
    }
    assert!(consistency_checks(5, 50).unwrap().all_pass());
}

#[test]
fn signature_identity_counts_pants() {
    for d in 5..=7 {
        let i = compute_invariants(d).unwrap();
        let cls = classify_cells(&subdivide(d, &LiftingFunction::Canonical).unwrap()).unwrap();
        assert_eq!(2 * i.chi + 3 * i.tau, cls.t_o().len() as i64);
    }
}

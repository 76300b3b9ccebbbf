//! One test per acceptance criterion. Each prints a single `PASS`/`FAIL`
//! line and then asserts. Run with
//! `cargo test --release --test acceptance -- --nocapture --test-threads=1`.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use tropical_pants::amoeba::{
    convergence_study, limit_fiber_check, period_integral, AmoebaGrid, FiberProbe, PeriodMode,
};
use tropical_pants::invariants::{compute_invariants, consistency_checks};
use tropical_pants::lattice::{normalized_volume, LatticePoint};
use tropical_pants::pants::{build_pants_graph, classify_cells, k3_blocks};
use tropical_pants::patchwork::identity_sweep;
use tropical_pants::subdivision::{subdivide, FaceAdjacency, LiftingFunction};
use tropical_pants::tables::verify_tables;
use tropical_pants::tropical::{build_tropical, EdgeGeometry};

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    println!("criterion {n:>2} {} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

fn canonical(d: i64) -> tropical_pants::subdivision::RegularSubdivision {
    subdivide(d, &LiftingFunction::Canonical).unwrap()
}

#[test]
fn criterion_01_table_fidelity() {
    let start = Instant::now();
    let r = verify_tables().unwrap();
    let elapsed = start.elapsed();
    let pass = r.entries_checked == 96 && r.is_match() && elapsed < Duration::from_secs(1);
    report(1, "table fidelity", pass, &format!("{} in {elapsed:?}", r.summary().replace('\n', ";")));
}

#[test]
fn criterion_02_cell_counts() {
    let mut details = Vec::new();
    let mut pass = true;
    for d in 1..=7 {
        let start = Instant::now();
        let sub = canonical(d);
        let elapsed = start.elapsed();
        let unimodular = sub.cells().iter().all(|c| normalized_volume(&c.simplex) == 1);
        let shared = sub.faces().iter().all(|(f, a)| match a {
            FaceAdjacency::Interior(x, y) => x != y && !sub.face_on_boundary(f),
            FaceAdjacency::Boundary(_) => sub.face_on_boundary(f),
        });
        pass &= sub.len() as i64 == d * d * d && unimodular && shared;
        if d == 7 {
            pass &= elapsed < Duration::from_secs(10);
        }
        details.push(format!("d={d}:{}", sub.len()));
        if d == 7 {
            details.push(format!("({elapsed:?})"));
        }
    }
    report(2, "cell counts", pass, &details.join(" "));
}

#[test]
fn criterion_03_pants_counts() {
    let mut pass = true;
    let mut details = Vec::new();
    for d in 5..=7 {
        let cls = classify_cells(&canonical(d)).unwrap();
        let k = d - 4;
        pass &= cls.t_o().len() as i64 == d * k * k
            && cls.interior.len() as i64 == k * k * k
            && cls.flaps.len() as i64 == 4 * k * k;
        details.push(format!("d={d}: {} = {} + {}", cls.t_o().len(), cls.interior.len(), cls.flaps.len()));
    }
    report(3, "pants counts", pass, &details.join(", "));
}

#[test]
fn criterion_04_k3_blocks() {
    let mut pass = true;
    let mut details = Vec::new();
    for d in 5..=7 {
        let r = k3_blocks(&canonical(d)).unwrap();
        pass &= r.union_matches && r.blocks.iter().all(|b| b.cells.len() == 64);
        details.push(format!("d={d}: {} blocks, union {}", r.blocks.len(), r.union_matches));
    }
    report(4, "K3 block lemma", pass, &details.join(", "));
}

#[test]
fn criterion_05_identity_sweeps() {
    let mut pass = true;
    let mut details = Vec::new();
    for d in [5, 6] {
        let sweep = identity_sweep(&canonical(d)).unwrap();
        let negative = sweep.residuals.iter().all(|(_, r)| r.iter().all(|e| e.exponent < 0));
        pass &= sweep.all_verified() && negative && sweep.cells.len() as i64 == (d - 4).pow(3);
        details.push(format!("d={d}: {} identities, residuals negative {negative}", sweep.identity_count()));
    }
    report(5, "identity sweeps", pass, &details.join(", "));
}

#[test]
fn criterion_06_tropical_duality() {
    let mut pass = true;
    for d in 1..=6 {
        let sub = canonical(d);
        let c = build_tropical(&sub).unwrap();
        let (v, e, f) = c.counts();
        pass &= v == sub.len() && e == sub.faces().len() && f == sub.edges().len();
        for edge in &c.edges {
            let interior = !sub.face_on_boundary(&edge.dual_face);
            pass &= edge.bounded == interior && matches!(edge.geometry, EdgeGeometry::Segment(..)) == interior;
        }
        for facet in &c.facets {
            pass &= facet.bounded == !sub.edge_on_boundary(&facet.dual_edge);
        }
    }
    let c1 = build_tropical(&canonical(1)).unwrap();
    let want = [8, 8, 13].map(|x| Ratio::from_integer(x as i128));
    let vertex_ok = c1.vertices.len() == 1 && c1.vertices[0].point == want;
    pass &= vertex_ok;
    report(6, "tropical duality", pass, &format!("d=1..6 bijection and boundedness, d=1 vertex at (8,8,13): {vertex_ok}"));
}

#[test]
fn criterion_07_graph_b() {
    let mut pass = true;
    let mut details = Vec::new();
    for d in 5..=7 {
        let sub = canonical(d);
        let g = build_pants_graph(&classify_cells(&sub).unwrap(), &sub);
        let e = g.edges.len();
        pass &= e as i64 == 6 * d * (d - 4) * (d - 4) && g.degrees().iter().sum::<usize>() == 2 * e;
        if d == 5 {
            let h = g.degree_histogram();
            pass &= g.vertices.len() == 16 && e == 30 && h.len() == 2 && h.get(&6) == Some(&4) && h.get(&3) == Some(&12);
            details.push(format!("d=5: V={} E={} degrees {h:?}", g.vertices.len(), e));
        } else {
            details.push(format!("d={d}: E={e}"));
        }
    }
    report(7, "graph B", pass, &details.join(", "));
}

#[test]
fn criterion_08_amoeba_convergence() {
    let ts: Vec<f64> = [4.0f64, 8.0, 16.0].iter().map(|k| k.exp()).collect();
    let mut pass = true;
    let mut details = Vec::new();
    for d in [1, 5] {
        let start = Instant::now();
        let grid = AmoebaGrid::around_vertices(d, [16, 16], [8, 8]).unwrap();
        let table = convergence_study(d, &ts, &grid).unwrap();
        let elapsed = start.elapsed();
        let maxes: Vec<f64> = table.rows.iter().map(|r| r.max_distance).collect();
        pass &= table.max_strictly_decreasing();
        if d == 1 {
            pass &= maxes[2] < 0.1;
        } else {
            pass &= elapsed < Duration::from_secs(300);
        }
        details.push(format!("d={d}: {maxes:.4?} ({elapsed:.1?})"));
    }
    report(8, "amoeba convergence", pass, &details.join(", "));
}

#[test]
fn criterion_09_limit_fiber() {
    let probe = FiberProbe::centered(&canonical(1), LatticePoint::ORIGIN, LatticePoint::new(1, 0, 0)).unwrap();
    let rows: Vec<_> = [4.0f64, 8.0, 16.0]
        .iter()
        .map(|k| limit_fiber_check(&probe, k.exp(), [5, 5], [8, 8]).unwrap())
        .collect();
    let angle: Vec<f64> = rows.iter().map(|r| r.angle_residual).collect();
    let ratio: Vec<f64> = rows.iter().map(|r| r.ratio_residual).collect();
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let pass = angle[2] < 0.05 && ratio[2] < 0.05 && decreasing(&angle) && decreasing(&ratio);
    let sci = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ");
    report(9, "limit fiber", pass, &format!("angle [{}], ratio [{}]", sci(&angle), sci(&ratio)));
}

#[test]
fn criterion_10_period() {
    let probe = FiberProbe::centered(&canonical(1), LatticePoint::ORIGIN, LatticePoint::new(0, 0, 1)).unwrap();
    let t = 16f64.exp();
    let limit = period_integral(&probe, t, 64, PeriodMode::LimitIntegrand).unwrap();
    let numeric = period_integral(&probe, t, 64, PeriodMode::Numeric).unwrap();
    let numeric_err = (numeric.value - 4.0 * PI * PI).norm() / (4.0 * PI * PI);
    let pass = limit.relative_error() < 1e-6 && numeric_err < 0.1;
    report(
        10,
        "period",
        pass,
        &format!("limit rel. error {:.2e}, numeric {:.10} rel. error {numeric_err:.2e}", limit.relative_error(), numeric.value.re),
    );
}

#[test]
fn criterion_11_invariants() {
    let i = compute_invariants(5).unwrap();
    let sigma = -4.0 * PI * 10f64.sqrt();
    let mut pass = (i.k2, i.chi, i.tau, i.p_g) == (5, 55, -35, 4)
        && ((i.yamabe - sigma) / sigma).abs() < 1e-9
        && (i.yamabe + 39.7384).abs() < 5e-5;
    let checks = consistency_checks(5, 12).unwrap();
    pass &= checks.all_pass();
    let mut counts = Vec::new();
    for d in 5..=7 {
        let inv = compute_invariants(d).unwrap();
        let pants = classify_cells(&canonical(d)).unwrap().t_o().len() as i64;
        pass &= 2 * inv.chi + 3 * inv.tau == pants;
        counts.push(format!("d={d}: {}={pants}", 2 * inv.chi + 3 * inv.tau));
    }
    report(11, "invariants", pass, &format!("yamabe(5) {:.6}, identities 5..12 {}, {}", i.yamabe, checks.all_pass(), counts.join(" ")));
}

#[test]
fn criterion_12_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["subdivide", "--d", "4"],
        &["verify-tables"],
        &["tropical", "--d", "3", "--mesh", "mesh.off"],
        &["pants", "--d", "5"],
        &["identities", "--d", "5"],
        &["amoeba", "--d", "2", "--t-list", "e4,e8", "--grid", "6,6,4,4", "--csv", "samples"],
        &["converge", "--d", "1", "--t-list", "e4,e8,e16", "--grid", "8,8,4,4", "--csv", "conv.csv"],
        &["period", "--d", "1", "--m", "0,0,0", "--mprime", "0,0,1", "--res", "32"],
        &["invariants", "--d-range", "5..12"],
    ];
    let files = ["mesh.off", "samples/samples_0.csv", "samples/samples_1.csv", "conv.csv", "out/config.json"];
    let mut failed = Vec::new();
    for args in cases {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let o = Command::new(env!("CARGO_BIN_EXE_tropical-pants"))
                .args(*args)
                .args(["--out", "out"])
                .current_dir(dir.path())
                .output()
                .unwrap();
            let mut bytes = o.stdout;
            for f in files {
                bytes.extend(std::fs::read(dir.path().join(f)).unwrap_or_default());
            }
            outputs.push(bytes);
        }
        if outputs[0] != outputs[1] {
            failed.push(args[0]);
        }
    }
    let pass = failed.is_empty();
    report(12, "determinism", pass, &format!("{} commands run twice, differing: {failed:?}", cases.len()));
}

//! Subdivide Δ_d under the canonical lift and print cell statistics.

use tropical_pants::lattice::normalized_volume;
use tropical_pants::subdivision::{subdivide, LiftingFunction};

fn main() -> tropical_pants::Result<()> {
    for d in 1..=5 {
        let sub = subdivide(d, &LiftingFunction::Canonical)?;
        let unimodular = sub.cells().iter().all(|c| normalized_volume(&c.simplex) == 1);
        let boundary = sub.faces().values().filter(|a| a.is_boundary()).count();
        println!(
            "d={d}: {} cells, {} vertices, {} faces ({boundary} on the boundary), unimodular: {unimodular}",
            sub.len(),
            sub.vertex_count(),
            sub.faces().len()
        );
    }
    Ok(())
}

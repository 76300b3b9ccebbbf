//! Build the tropical surface for d=2 and export it as an OFF mesh.

use tropical_pants::subdivision::{subdivide, LiftingFunction};
use tropical_pants::tropical::{build_tropical, distance_to_tropical, export_mesh, BoundingBox};

fn main() -> tropical_pants::Result<()> {
    let complex = build_tropical(&subdivide(2, &LiftingFunction::Canonical)?)?;
    let (v, e, f) = complex.counts();
    println!("vertices {v}, edges {e}, 2-cells {f}");
    let bbox = BoundingBox::around(&complex);
    let path = std::env::temp_dir().join("tropical_d2.off");
    let summary = export_mesh(&complex, &bbox, &path)?;
    println!("wrote {} ({} vertices, {} faces)", path.display(), summary.vertices, summary.faces);
    let x = complex.vertex_f64(0);
    let off = [x[0] + 0.3, x[1], x[2]];
    println!("distance from {off:?}: {:.6}", distance_to_tropical(&off, &complex, &bbox)?);
    Ok(())
}

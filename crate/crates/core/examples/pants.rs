//! Pants cells, K3 blocks and graph B for d=5.

use tropical_pants::pants::pants_report;
use tropical_pants::subdivision::{subdivide, LiftingFunction};

fn main() -> tropical_pants::Result<()> {
    let report = pants_report(&subdivide(5, &LiftingFunction::Canonical)?)?;
    let c = &report.classification;
    println!("T^o: {} cells ({} interior, {} flaps)", c.t_o().len(), c.interior.len(), c.flaps.len());
    println!("K3 blocks: {}, union matches: {}", report.k3.blocks.len(), report.k3.union_matches);
    println!(
        "graph B: {} vertices, {} edges, degrees {:?}",
        report.graph.vertices.len(),
        report.graph.edges.len(),
        report.graph.degree_histogram()
    );
    for comp in report.x0.components.iter().take(2) {
        println!("{:?}: {}", comp.source, comp.relation);
    }
    Ok(())
}

//! Sample the amoeba of f_t for d=1 at t = e^8.

use tropical_pants::amoeba::{sample_amoeba, AmoebaGrid};

fn main() -> tropical_pants::Result<()> {
    let grid = AmoebaGrid::around_vertices(1, [8, 8], [6, 6])?;
    let cloud = sample_amoeba(1, 8f64.exp(), &grid)?;
    println!(
        "{} samples from {} grid points ({} complete)",
        cloud.points.len(),
        cloud.grid_points,
        cloud.complete_points
    );
    for line in cloud.to_csv().lines().take(4) {
        println!("{line}");
    }
    Ok(())
}

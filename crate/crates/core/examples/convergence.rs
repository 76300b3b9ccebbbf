//! Distance from amoeba samples to the tropical surface as t grows.

use tropical_pants::amoeba::{convergence_study, AmoebaGrid};

fn main() -> tropical_pants::Result<()> {
    let d = 1;
    let grid = AmoebaGrid::around_vertices(d, [16, 16], [8, 8])?;
    let ts: Vec<f64> = [4.0, 8.0, 16.0].iter().map(|k: &f64| k.exp()).collect();
    let table = convergence_study(d, &ts, &grid)?;
    print!("{}", table.to_csv());
    println!("max strictly decreasing: {}", table.max_strictly_decreasing());
    Ok(())
}

//! Exact monomial and residue identities for d=5.

use tropical_pants::lattice::{LatticePoint, SimplexDomain};
use tropical_pants::patchwork::{identity_sweep, monomial_identity};
use tropical_pants::subdivision::{subdivide, LiftingFunction};

fn main() -> tropical_pants::Result<()> {
    let sub = subdivide(5, &LiftingFunction::Canonical)?;
    let sweep = identity_sweep(&sub)?;
    println!(
        "{} identities over {} interior cells, all verified: {}",
        sweep.identity_count(),
        sweep.cells.len(),
        sweep.all_verified()
    );
    let interior = SimplexDomain::interior(5)?;
    let cell = sub
        .cells()
        .iter()
        .find(|c| c.simplex.vertices.iter().all(|v| interior.contains(v)))
        .expect("an interior cell");
    let id = monomial_identity(5, &cell.simplex, &LatticePoint::new(0, 0, 5))?;
    println!("w^(0,0,5) on {:?}: a = {:?}, t-exponent {}", cell.simplex.vertices, id.a, id.exponent);
    Ok(())
}

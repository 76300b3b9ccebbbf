//! Limit-fiber residuals and the torus period for d=1.

use tropical_pants::amoeba::{limit_fiber_check, period_integral, FiberProbe, PeriodMode};
use tropical_pants::lattice::LatticePoint;
use tropical_pants::subdivision::{subdivide, LiftingFunction};

fn main() -> tropical_pants::Result<()> {
    let sub = subdivide(1, &LiftingFunction::Canonical)?;
    let probe = FiberProbe::centered(&sub, LatticePoint::ORIGIN, LatticePoint::new(0, 0, 1))?;
    for k in [4.0f64, 8.0, 16.0] {
        let r = limit_fiber_check(&probe, k.exp(), [5, 5], [8, 8])?;
        println!("t=e^{k}: angle {:.3e}, ratio {:.3e}", r.angle_residual, r.ratio_residual);
    }
    let est = period_integral(&probe, 16f64.exp(), 64, PeriodMode::Numeric)?;
    println!("period {:.12} (target {:.12})", est.value.re, est.target);
    Ok(())
}
